#pragma once

// Manufactured Dirichlet Poisson and clamped plate problems on the two halves
// of the rectangle mesh, solved with the assembled forms.

#include <cmath>
#include <vector>

#include "waveplate/fem.hpp"
#include "waveplate/lu.hpp"
#include "waveplate/quadrature.hpp"

namespace model {

using namespace waveplate;

struct Errors {
  double h = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
};

// Solve K x = b with the dofs in `fixed` set to zero.
inline VecD solve_constrained(const SparseMatrix<double>& k, const VecD& b, const std::vector<char>& fixed) {
  const int n = k.rows();
  std::vector<int> map(n, -1);
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) map[i] = m++;
  TripletList<double> t;
  for (int r = 0; r < n; ++r) {
    if (map[r] < 0) continue;
    for (int q = k.row_ptr()[r]; q < k.row_ptr()[r + 1]; ++q) {
      int c = k.col_idx()[q];
      if (map[c] >= 0) t.add(map[r], map[c], k.values()[q]);
    }
  }
  VecD rb(m);
  for (int i = 0; i < n; ++i)
    if (map[i] >= 0) rb[map[i]] = b[i];
  VecD x = lu_solve(t.build(m, m), rb);
  VecD full = VecD::Zero(n);
  for (int i = 0; i < n; ++i)
    if (map[i] >= 0) full[i] = x[map[i]];
  return full;
}

// -Laplace u = f on [-1,0]x[0,1], u = x(x+1)y(y-1), zero on the whole boundary.
inline Errors poisson(int n) {
  TriMesh mesh = gen_rect_transmission(n);
  FormSet f = assemble_forms(mesh, 0.3);
  const FemSpaces& s = f.spaces;
  auto exact = [](Point2 p) { return p.x * (p.x + 1) * p.y * (p.y - 1); };
  auto rhs = [](Point2 p) { return -(2 * p.y * (p.y - 1) + 2 * p.x * (p.x + 1)); };
  VecD b = VecD::Zero(s.n_wave());
  auto rule = triangle_rule(6);
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (tri.domain != Subdomain::Wave) continue;
    Point2 p0 = mesh.vertices()[tri.v[0]], p1 = mesh.vertices()[tri.v[1]], p2 = mesh.vertices()[tri.v[2]];
    double area = 0.5 * cross(p1 - p0, p2 - p0);
    for (const auto& q : rule) {
      Point2 x = p0 + q.xi * (p1 - p0) + q.eta * (p2 - p0);
      double lam[3] = {1 - q.xi - q.eta, q.xi, q.eta};
      for (int a = 0; a < 3; ++a) b[s.wave_index[tri.v[a]]] += 2 * area * q.w * rhs(x) * lam[a];
    }
  }
  std::vector<char> fixed(s.n_wave(), 0);
  for (const auto& e : mesh.edges()) {
    if (!e.tag) continue;
    for (int v : e.v)
      if (s.wave_index[v] >= 0) fixed[s.wave_index[v]] = 1;
  }
  VecD u = solve_constrained(f.K1, b, fixed);
  return {mesh.h(), p1_l2_error(mesh, s, u, exact), 0.0};
}

// Delta^2 w = f on [0,1]^2 with w = x^2(1-x)^2 y^2(1-y)^2, clamped.
inline Errors clamped_plate(int n, double mu = 0.3) {
  TriMesh mesh = gen_rect_transmission(n);
  FormSet f = assemble_forms(mesh, mu);
  const FemSpaces& s = f.spaces;
  auto g = [](double t) { return t * t * (1 - t) * (1 - t); };
  auto g1 = [](double t) { return 2 * t - 6 * t * t + 4 * t * t * t; };
  auto g2 = [](double t) { return 2 - 12 * t + 12 * t * t; };
  auto exact = [&](Point2 p) { return g(p.x) * g(p.y); };
  auto hess = [&](Point2 p) {
    return std::array<double, 3>{g2(p.x) * g(p.y), g1(p.x) * g1(p.y), g(p.x) * g2(p.y)};
  };
  auto rhs = [&](Point2 p) { return 24 * g(p.y) + 2 * g2(p.x) * g2(p.y) + 24 * g(p.x); };
  VecD b = VecD::Zero(s.n_plate());
  auto rule = triangle_rule(8);
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    if (mesh.triangles()[t].domain != Subdomain::Plate) continue;
    MorleyElement el = s.plate_element(mesh, t);
    auto dofs = s.plate_dofs(mesh, t);
    const auto& p = el.points();
    for (const auto& q : rule) {
      Point2 x = p[0] + q.xi * (p[1] - p[0]) + q.eta * (p[2] - p[0]);
      auto v = el.values(x);
      for (int a = 0; a < 6; ++a) b[dofs[a]] += 2 * el.area() * q.w * rhs(x) * v[a];
    }
  }
  std::vector<char> fixed(s.n_plate(), 0);
  for (std::size_t i = 0; i < mesh.edges().size(); ++i) {
    const auto& e = mesh.edges()[i];
    if (!e.tag || s.plate_edge_index[i] < 0) continue;
    fixed[s.plate_edge_index[i]] = 1;
    for (int v : e.v) fixed[s.plate_vertex_index[v]] = 1;
  }
  VecD w = solve_constrained(f.K2, b, fixed);
  return {mesh.h(), morley_l2_error(mesh, s, w, exact), morley_energy_error(mesh, s, w, hess)};
}

inline double rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

}  // namespace model
