#include "waveplate/fem.hpp"

#include <Eigen/LU>

#include "waveplate/errors.hpp"
#include "waveplate/quadrature.hpp"

namespace waveplate {

namespace {

std::array<Point2, 3> tri_points(const TriMesh& mesh, int t) {
  const auto& v = mesh.triangles()[t].v;
  const auto& V = mesh.vertices();
  return {V[v[0]], V[v[1]], V[v[2]]};
}

Point2 map_point(const std::array<Point2, 3>& p, double xi, double eta) {
  return p[0] + xi * (p[1] - p[0]) + eta * (p[2] - p[0]);
}

double area_of(const std::array<Point2, 3>& p) { return 0.5 * cross(p[1] - p[0], p[2] - p[0]); }

}  // namespace

MorleyElement::MorleyElement(const std::array<Point2, 3>& p, const std::array<Point2, 3>& normals)
    : p_(p) {
  area_ = area_of(p);
  c_ = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
  s_ = std::max({norm(p[1] - p[0]), norm(p[2] - p[1]), norm(p[0] - p[2])});
  Eigen::Matrix<double, 6, 6> v;
  for (int l = 0; l < 3; ++l) {
    double xi = (p[l].x - c_.x) / s_, eta = (p[l].y - c_.y) / s_;
    v.row(l) << 1.0, xi, eta, xi * xi, xi * eta, eta * eta;
  }
  for (int k = 0; k < 3; ++k) {
    Point2 m = 0.5 * (p[(k + 1) % 3] + p[(k + 2) % 3]);
    double xi = (m.x - c_.x) / s_, eta = (m.y - c_.y) / s_;
    Point2 n = normals[k];
    // d/dn of each monomial, in units of 1/s
    v.row(3 + k) << 0.0, n.x / s_, n.y / s_, 2.0 * xi * n.x / s_, (eta * n.x + xi * n.y) / s_,
        2.0 * eta * n.y / s_;
  }
  coef_ = v.inverse();
  const double s2 = s_ * s_;
  for (int k = 0; k < 6; ++k) {
    hess_[k] = {2.0 * coef_(3, k) / s2, coef_(4, k) / s2, 2.0 * coef_(5, k) / s2};
  }
}

std::array<double, 6> MorleyElement::values(Point2 x) const {
  double xi = (x.x - c_.x) / s_, eta = (x.y - c_.y) / s_;
  Eigen::Matrix<double, 1, 6> m;
  m << 1.0, xi, eta, xi * xi, xi * eta, eta * eta;
  Eigen::Matrix<double, 1, 6> r = m * coef_;
  std::array<double, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = r(k);
  return out;
}

std::array<Point2, 6> MorleyElement::gradients(Point2 x) const {
  double xi = (x.x - c_.x) / s_, eta = (x.y - c_.y) / s_;
  Eigen::Matrix<double, 1, 6> mx, my;
  mx << 0.0, 1.0, 0.0, 2.0 * xi, eta, 0.0;
  my << 0.0, 0.0, 1.0, 0.0, xi, 2.0 * eta;
  Eigen::Matrix<double, 1, 6> gx = mx * coef_ / s_, gy = my * coef_ / s_;
  std::array<Point2, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = {gx(k), gy(k)};
  return out;
}

std::array<Point2, 3> p1_gradients(const std::array<Point2, 3>& p) {
  double two_a = cross(p[1] - p[0], p[2] - p[0]);
  std::array<Point2, 3> g;
  for (int k = 0; k < 3; ++k) {
    Point2 e = p[(k + 2) % 3] - p[(k + 1) % 3];  // edge opposite k
    g[k] = (1.0 / two_a) * Point2{-e.y, e.x};
  }
  return g;
}

double bending_density(const std::array<double, 3>& f, const std::array<double, 3>& g, double mu) {
  return f[0] * g[0] + f[2] * g[2] + mu * (f[0] * g[2] + f[2] * g[0]) + 2.0 * (1.0 - mu) * f[1] * g[1];
}

std::array<int, 6> FemSpaces::plate_dofs(const TriMesh& mesh, int tri) const {
  const auto& t = mesh.triangles()[tri];
  const auto& e = mesh.triangle_edges(tri);
  return {plate_vertex_index[t.v[0]], plate_vertex_index[t.v[1]], plate_vertex_index[t.v[2]],
          plate_edge_index[e[0]],     plate_edge_index[e[1]],     plate_edge_index[e[2]]};
}

MorleyElement FemSpaces::plate_element(const TriMesh& mesh, int tri) const {
  const auto& e = mesh.triangle_edges(tri);
  return MorleyElement(tri_points(mesh, tri),
                       {edge_dof_direction(e[0]), edge_dof_direction(e[1]), edge_dof_direction(e[2])});
}

FemSpaces build_spaces(const TriMesh& mesh) {
  FemSpaces s;
  const int nv = static_cast<int>(mesh.vertices().size());
  const int ne = static_cast<int>(mesh.edges().size());
  s.wave_index.assign(nv, -1);
  s.plate_vertex_index.assign(nv, -1);
  s.plate_edge_index.assign(ne, -1);
  s.edge_normal.assign(ne, Point2{});
  s.edge_scale.assign(ne, 0.0);
  s.wave_vertices = mesh.subdomain_vertices(Subdomain::Wave);
  for (std::size_t i = 0; i < s.wave_vertices.size(); ++i) s.wave_index[s.wave_vertices[i]] = static_cast<int>(i);
  s.plate_vertices = mesh.subdomain_vertices(Subdomain::Plate);
  for (std::size_t i = 0; i < s.plate_vertices.size(); ++i) {
    s.plate_vertex_index[s.plate_vertices[i]] = static_cast<int>(i);
  }
  s.plate_edges = mesh.subdomain_edges(Subdomain::Plate);
  const int nvp = static_cast<int>(s.plate_vertices.size());
  for (std::size_t i = 0; i < s.plate_edges.size(); ++i) {
    int e = s.plate_edges[i];
    s.plate_edge_index[e] = nvp + static_cast<int>(i);
    const auto& ed = mesh.edges()[e];
    s.edge_scale[e] = mesh.edge_length(e);
    if (ed.tag) {
      s.edge_normal[e] = mesh.boundary_normal(e, Subdomain::Plate);
    } else {
      Point2 t = mesh.vertices()[ed.v[1]] - mesh.vertices()[ed.v[0]];
      s.edge_normal[e] = (1.0 / norm(t)) * Point2{t.y, -t.x};
    }
  }
  s.gamma1_vertices = mesh.vertices_with_tag(BoundaryTag::Gamma1);
  s.gamma2_vertices = mesh.vertices_with_tag(BoundaryTag::Gamma2);
  s.gamma2_edges = mesh.edges_with_tag(BoundaryTag::Gamma2);
  return s;
}

FormSet assemble_forms(const TriMesh& mesh, double mu) {
  if (!(mu >= 0.0 && mu < 0.5)) throw ArgumentError("Poisson ratio must lie in [0, 1/2)");
  FormSet f;
  f.mu = mu;
  f.spaces = build_spaces(mesh);
  const FemSpaces& s = f.spaces;
  const int nw = s.n_wave(), np = s.n_plate();

  TripletList<double> k1, m1, k2, m2;
  const auto rule4 = triangle_rule(4);
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    auto p = tri_points(mesh, t);
    double area = area_of(p);
    if (tri.domain == Subdomain::Wave) {
      auto g = p1_gradients(p);
      for (int a = 0; a < 3; ++a) {
        int ia = s.wave_index[tri.v[a]];
        for (int b = 0; b < 3; ++b) {
          int ib = s.wave_index[tri.v[b]];
          k1.add(ia, ib, area * dot(g[a], g[b]));
          m1.add(ia, ib, area / 12.0 * (a == b ? 2.0 : 1.0));
        }
      }
    } else {
      MorleyElement el = s.plate_element(mesh, t);
      auto dofs = s.plate_dofs(mesh, t);
      const auto& h = el.hessians();
      Eigen::Matrix<double, 6, 6> mloc = Eigen::Matrix<double, 6, 6>::Zero();
      for (const auto& q : rule4) {
        auto phi = el.values(map_point(p, q.xi, q.eta));
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) mloc(a, b) += 2.0 * area * q.w * phi[a] * phi[b];
      }
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          k2.add(dofs[a], dofs[b], area * bending_density(h[a], h[b], mu));
          m2.add(dofs[a], dofs[b], mloc(a, b));
        }
      }
    }
  }
  f.K1 = k1.build(nw, nw);
  f.M1 = m1.build(nw, nw);
  f.K2 = k2.build(np, np);
  f.M2 = m2.build(np, np);

  // traces and control Gram matrices
  const int n1 = static_cast<int>(s.gamma1_vertices.size());
  const int n2v = static_cast<int>(s.gamma2_vertices.size());
  const int n2e = static_cast<int>(s.gamma2_edges.size());
  std::vector<int> g1_index(mesh.vertices().size(), -1), g2_index(mesh.vertices().size(), -1);
  TripletList<double> t1, t2v, t2n, g1, g2v, g2n;
  for (int i = 0; i < n1; ++i) {
    g1_index[s.gamma1_vertices[i]] = i;
    t1.add(i, s.wave_index[s.gamma1_vertices[i]], 1.0);
  }
  for (int i = 0; i < n2v; ++i) {
    g2_index[s.gamma2_vertices[i]] = i;
    t2v.add(i, s.plate_vertex_index[s.gamma2_vertices[i]], 1.0);
  }
  auto boundary_mass = [&](TripletList<double>& g, const std::vector<int>& index, int e) {
    const auto& ed = mesh.edges()[e];
    double len = mesh.edge_length(e);
    int a = index[ed.v[0]], b = index[ed.v[1]];
    g.add(a, a, len / 3.0);
    g.add(b, b, len / 3.0);
    g.add(a, b, len / 6.0);
    g.add(b, a, len / 6.0);
  };
  for (int e : mesh.edges_with_tag(BoundaryTag::Gamma1)) boundary_mass(g1, g1_index, e);
  for (int i = 0; i < n2e; ++i) {
    int e = s.gamma2_edges[i];
    boundary_mass(g2v, g2_index, e);
    double sign = dot(s.edge_normal[e], mesh.boundary_normal(e, Subdomain::Plate)) > 0 ? 1.0 : -1.0;
    t2n.add(i, s.plate_edge_index[e], sign / s.edge_scale[e]);
    g2n.add(i, i, mesh.edge_length(e));
  }
  f.T1 = t1.build(n1, nw);
  f.T2v = t2v.build(n2v, np);
  f.T2n = t2n.build(n2e, np);
  f.G1 = g1.build(n1, n1);
  f.G2v = g2v.build(n2v, n2v);
  f.G2n = g2n.build(n2e, n2e);
  return f;
}

VecD interpolate_p1(const TriMesh& mesh, const FemSpaces& s, const ScalarFn& f) {
  VecD u(s.n_wave());
  for (int i = 0; i < s.n_wave(); ++i) u[i] = f(mesh.vertices()[s.wave_vertices[i]]);
  return u;
}

VecD interpolate_morley(const TriMesh& mesh, const FemSpaces& s, const ScalarFn& f,
                        const GradientFn& grad) {
  VecD w(s.n_plate());
  for (std::size_t i = 0; i < s.plate_vertices.size(); ++i) w[i] = f(mesh.vertices()[s.plate_vertices[i]]);
  for (int e : s.plate_edges) w[s.plate_edge_index[e]] = dot(grad(mesh.edge_midpoint(e)), s.edge_dof_direction(e));
  return w;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> plate_moment_rows(const TriMesh& mesh, const FemSpaces& s) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> rows = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, s.n_plate());
  const auto rule = triangle_rule(2);
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    if (mesh.triangles()[t].domain != Subdomain::Plate) continue;
    auto p = tri_points(mesh, t);
    MorleyElement el = s.plate_element(mesh, t);
    auto dofs = s.plate_dofs(mesh, t);
    for (const auto& q : rule) {
      Point2 x = map_point(p, q.xi, q.eta);
      auto v = el.values(x);
      auto g = el.gradients(x);
      double w = 2.0 * el.area() * q.w;
      for (int a = 0; a < 6; ++a) {
        rows(0, dofs[a]) += w * v[a];
        rows(1, dofs[a]) += w * g[a].x;
        rows(2, dofs[a]) += w * g[a].y;
      }
    }
  }
  return rows;
}

double p1_l2_error(const TriMesh& mesh, const FemSpaces& s, const VecD& u, const ScalarFn& exact) {
  const auto rule = triangle_rule(8);
  double err = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (tri.domain != Subdomain::Wave) continue;
    auto p = tri_points(mesh, t);
    double area = area_of(p);
    for (const auto& q : rule) {
      double uh = (1.0 - q.xi - q.eta) * u[s.wave_index[tri.v[0]]] + q.xi * u[s.wave_index[tri.v[1]]] +
                  q.eta * u[s.wave_index[tri.v[2]]];
      double d = exact(map_point(p, q.xi, q.eta)) - uh;
      err += 2.0 * area * q.w * d * d;
    }
  }
  return std::sqrt(err);
}

double morley_l2_error(const TriMesh& mesh, const FemSpaces& s, const VecD& w, const ScalarFn& exact) {
  const auto rule = triangle_rule(8);
  double err = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    if (mesh.triangles()[t].domain != Subdomain::Plate) continue;
    auto p = tri_points(mesh, t);
    MorleyElement el = s.plate_element(mesh, t);
    auto dofs = s.plate_dofs(mesh, t);
    for (const auto& q : rule) {
      Point2 x = map_point(p, q.xi, q.eta);
      auto v = el.values(x);
      double wh = 0.0;
      for (int a = 0; a < 6; ++a) wh += v[a] * w[dofs[a]];
      double d = exact(x) - wh;
      err += 2.0 * el.area() * q.w * d * d;
    }
  }
  return std::sqrt(err);
}

double morley_energy_error(const TriMesh& mesh, const FemSpaces& s, const VecD& w,
                           const std::function<std::array<double, 3>(Point2)>& hess) {
  const auto rule = triangle_rule(8);
  double err = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    if (mesh.triangles()[t].domain != Subdomain::Plate) continue;
    auto p = tri_points(mesh, t);
    MorleyElement el = s.plate_element(mesh, t);
    auto dofs = s.plate_dofs(mesh, t);
    std::array<double, 3> hh{0, 0, 0};
    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 3; ++c) hh[c] += el.hessians()[a][c] * w[dofs[a]];
    for (const auto& q : rule) {
      auto he = hess(map_point(p, q.xi, q.eta));
      double dxx = he[0] - hh[0], dxy = he[1] - hh[1], dyy = he[2] - hh[2];
      err += 2.0 * el.area() * q.w * (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
    }
  }
  return std::sqrt(err);
}

double bending_form(const TriMesh& mesh, const FemSpaces& s, const VecD& v, const VecD& w, double mu) {
  if (v.size() != s.n_plate() || w.size() != s.n_plate()) throw ArgumentError("plate vector size mismatch");
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    if (mesh.triangles()[t].domain != Subdomain::Plate) continue;
    MorleyElement el = s.plate_element(mesh, t);
    auto dofs = s.plate_dofs(mesh, t);
    std::array<double, 3> hv{0, 0, 0}, hw{0, 0, 0};
    for (int a = 0; a < 6; ++a) {
      for (int c = 0; c < 3; ++c) {
        hv[c] += el.hessians()[a][c] * v[dofs[a]];
        hw[c] += el.hessians()[a][c] * w[dofs[a]];
      }
    }
    sum += el.area() * bending_density(hv, hw, mu);
  }
  return sum;
}

}  // namespace waveplate
