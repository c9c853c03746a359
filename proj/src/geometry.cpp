#include "waveplate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "waveplate/errors.hpp"
#include "waveplate/quadrature.hpp"

namespace waveplate {

namespace {

bool bounds(const MeshEdge& e, Subdomain d) {
  if (!e.tag) return false;
  if (*e.tag == BoundaryTag::Interface) return true;
  return *e.tag == (d == Subdomain::Wave ? BoundaryTag::Gamma1 : BoundaryTag::Gamma2);
}

double integrate_domain(const TriMesh& mesh, Subdomain d, int degree,
                        const std::function<double(Point2)>& f) {
  const auto rule = triangle_rule(degree);
  const auto& V = mesh.vertices();
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (tri.domain != d) continue;
    Point2 a = V[tri.v[0]], b = V[tri.v[1]], c = V[tri.v[2]];
    double jac = 2.0 * mesh.triangle_area(t);
    double s = 0.0;
    for (const auto& q : rule) s += q.w * f(a + q.xi * (b - a) + q.eta * (c - a));
    sum += jac * s;
  }
  return sum;
}

// f(x, nu, tag) integrated over the boundary of subdomain d
double integrate_boundary(const TriMesh& mesh, Subdomain d, int degree,
                          const std::function<double(Point2, Point2, BoundaryTag)>& f) {
  const auto rule = line_rule(degree);
  const auto& V = mesh.vertices();
  double sum = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.edges().size()); ++e) {
    const auto& ed = mesh.edges()[e];
    if (!bounds(ed, d)) continue;
    Point2 a = V[ed.v[0]], b = V[ed.v[1]];
    Point2 nu = mesh.boundary_normal(e, d);
    double s = 0.0;
    for (const auto& q : rule) s += q.w * f(a + q.s * (b - a), nu, *ed.tag);
    sum += mesh.edge_length(e) * s;
  }
  return sum;
}

Point2 grad(const PolyField& y, Point2 x) { return {y.dx(x), y.dy(x)}; }

// Hessian applied to a vector
Point2 hess_apply(const PolyField& y, Point2 x, Point2 v) {
  double a = y.derivative(2, 0, x), b = y.derivative(1, 1, x), c = y.derivative(0, 2, x);
  return {a * v.x + b * v.y, b * v.x + c * v.y};
}

double bending_density_of(const PolyField& y, Point2 x, double mu) {
  double a = y.derivative(2, 0, x), b = y.derivative(1, 1, x), c = y.derivative(0, 2, x);
  return a * a + c * c + 2.0 * mu * a * c + 2.0 * (1.0 - mu) * b * b;
}

double diameter(const TriMesh& mesh) {
  std::vector<Point2> pts;
  for (const auto& e : mesh.edges()) {
    if (e.on_boundary()) pts.push_back(mesh.vertices()[e.v[0]]);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, norm(pts[i] - pts[j]));
  }
  return d;
}

AngleReport angle_report(const TriMesh& mesh, Subdomain d, double threshold, double feature_turn) {
  AngleReport r;
  r.threshold = threshold;
  for (const auto& c : corner_angles(mesh, d, feature_turn)) {
    r.corners.push_back({c.vertex, c.position, c.angle, c.angle < threshold});
  }
  return r;
}

}  // namespace

MgcReport check_mgc(const TriMesh& mesh, Point2 x0) {
  MgcReport r;
  r.diameter = diameter(mesh);
  r.delta = std::numeric_limits<double>::infinity();
  for (int e = 0; e < static_cast<int>(mesh.edges().size()); ++e) {
    const auto& ed = mesh.edges()[e];
    if (!ed.tag) continue;
    Point2 m = mesh.edge_midpoint(e) - x0;
    if (*ed.tag == BoundaryTag::Interface) {
      double v = dot(m, mesh.boundary_normal(e, Subdomain::Wave));
      r.interface_residual = std::max(r.interface_residual, std::abs(v));
      if (std::abs(v) > 1e-9 * r.diameter) r.violations.push_back({e, v});
      continue;
    }
    Subdomain side = *ed.tag == BoundaryTag::Gamma1 ? Subdomain::Wave : Subdomain::Plate;
    double v = dot(m, mesh.boundary_normal(e, side));
    r.delta = std::min(r.delta, v);
    if (!(v > 0.0)) r.violations.push_back({e, v});
    double& R = side == Subdomain::Wave ? r.R1 : r.R2;
    for (int k = 0; k < 2; ++k) R = std::max(R, norm(mesh.vertices()[ed.v[k]] - x0));
  }
  if (!std::isfinite(r.delta)) r.delta = 0.0;
  r.pass = r.delta > 0.0 && r.interface_residual <= 1e-9 * r.diameter;
  return r;
}

bool AngleReport::pass() const {
  if (!has_verdict) return false;
  return std::all_of(corners.begin(), corners.end(), [](const AngleCheck& c) { return c.pass; });
}

AngleReport check_wave_angles(const TriMesh& mesh, double feature_turn) {
  return angle_report(mesh, Subdomain::Wave, std::numbers::pi, feature_turn);
}

AngleReport check_plate_angles(const TriMesh& mesh, double mu, std::optional<double> omega0_deg,
                               double feature_turn) {
  if (!(mu > 0.0 && mu < 0.5)) throw ArgumentError("Poisson coefficient must lie in (0, 1/2)");
  if (omega0_deg && !(*omega0_deg > 0.0 && *omega0_deg <= 360.0)) {
    throw ArgumentError("plate angle threshold must lie in (0, 360] degrees");
  }
  const bool known = std::abs(mu - 0.3) <= 1e-12;
  double deg = omega0_deg.value_or(kPlateThresholdDeg);
  AngleReport r = angle_report(mesh, Subdomain::Plate, deg * std::numbers::pi / 180.0, feature_turn);
  if (!omega0_deg && !known) {
    r.has_verdict = false;
    r.threshold = 0.0;
    r.warning = "unknown plate angle threshold for mu = " + std::to_string(mu);
    for (auto& c : r.corners) c.pass = false;
  }
  return r;
}

double plate_C1(const PolyField& y, Point2 x, Point2 nu) {
  Point2 tau{-nu.y, nu.x};
  return -dot(tau, hess_apply(y, x, tau));
}

double plate_C2(const PolyField& y, Point2 x, Point2 nu) {
  Point2 tau{-nu.y, nu.x};
  return dot(nu, hess_apply(y, x, tau));
}

double plate_B1(const PolyField& y, Point2 x, Point2 nu, double mu) {
  return y.laplacian(x) + (1.0 - mu) * plate_C1(y, x, nu);
}

double RellichTerms::residual() const { return std::abs(lhs - (flux - boundary)); }

RellichTerms rellich_terms(const TriMesh& mesh, const PolyField& y, Point2 x0, int degree) {
  RellichTerms r;
  auto mgrad = [&](Point2 x) { return dot(x - x0, grad(y, x)); };
  r.lhs = -integrate_domain(mesh, Subdomain::Wave, degree,
                            [&](Point2 x) { return y.laplacian(x) * mgrad(x); });
  r.flux = 0.5 * integrate_boundary(mesh, Subdomain::Wave, degree, [&](Point2 x, Point2 nu, BoundaryTag) {
    Point2 g = grad(y, x);
    return dot(x - x0, nu) * dot(g, g);
  });
  r.boundary = integrate_boundary(mesh, Subdomain::Wave, degree, [&](Point2 x, Point2 nu, BoundaryTag) {
    return dot(grad(y, x), nu) * mgrad(x);
  });
  r.gamma1_normal_sq = integrate_boundary(mesh, Subdomain::Wave, degree, [&](Point2 x, Point2 nu, BoundaryTag t) {
    double dn = dot(grad(y, x), nu);
    return t == BoundaryTag::Gamma1 ? dn * dn : 0.0;
  });
  r.interface = integrate_boundary(mesh, Subdomain::Wave, degree, [&](Point2 x, Point2 nu, BoundaryTag t) {
    return t == BoundaryTag::Interface ? dot(grad(y, x), nu) * mgrad(x) : 0.0;
  });
  return r;
}

double rellich_residual(const TriMesh& mesh, const PolyField& y, Point2 x0, int degree) {
  return rellich_terms(mesh, y, x0, degree).residual();
}

double rellich_inequality_gap(const TriMesh& mesh, const PolyField& y, Point2 x0, double delta,
                              double R1, int degree) {
  if (!(delta > 0.0)) throw ArgumentError("the multiplier bound needs delta > 0");
  RellichTerms r = rellich_terms(mesh, y, x0, degree);
  return r.lhs - (-(R1 * R1 / delta) * r.gamma1_normal_sq - r.interface);
}

double PlateMultiplierTerms::residual() const {
  return std::abs(lhs - (bending - moment + shear + flux));
}

PlateMultiplierTerms plate_multiplier_terms(const TriMesh& mesh, const PolyField& y, Point2 x0,
                                            double mu, int degree) {
  if (!(mu >= 0.0 && mu < 0.5)) throw ArgumentError("Poisson coefficient must lie in [0, 1/2)");
  PlateMultiplierTerms r;
  const PolyField lap = y.differentiate(2, 0) + y.differentiate(0, 2);
  // g = m.grad y has gradient grad y + H m
  auto g = [&](Point2 x) { return dot(x - x0, grad(y, x)); };
  auto grad_g = [&](Point2 x) { return grad(y, x) + hess_apply(y, x, x - x0); };
  r.lhs = integrate_domain(mesh, Subdomain::Plate, degree,
                           [&](Point2 x) { return y.bilaplacian(x) * g(x); });
  r.bending = integrate_domain(mesh, Subdomain::Plate, degree,
                               [&](Point2 x) { return bending_density_of(y, x, mu); });
  r.moment = integrate_boundary(mesh, Subdomain::Plate, degree, [&](Point2 x, Point2 nu, BoundaryTag) {
    return plate_B1(y, x, nu, mu) * dot(grad_g(x), nu);
  });
  r.shear = integrate_boundary(mesh, Subdomain::Plate, degree, [&](Point2 x, Point2 nu, BoundaryTag) {
    Point2 tau{-nu.y, nu.x};
    return dot(grad(lap, x), nu) * g(x) - (1.0 - mu) * plate_C2(y, x, nu) * dot(grad_g(x), tau);
  });
  r.flux = 0.5 * integrate_boundary(mesh, Subdomain::Plate, degree, [&](Point2 x, Point2 nu, BoundaryTag) {
    return dot(x - x0, nu) * bending_density_of(y, x, mu);
  });
  return r;
}

double plate_multiplier_residual(const TriMesh& mesh, const PolyField& y, Point2 x0, double mu,
                                 int degree) {
  return plate_multiplier_terms(mesh, y, x0, mu, degree).residual();
}

}  // namespace waveplate
