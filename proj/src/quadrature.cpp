#include "waveplate/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

// Legendre polynomial P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

std::vector<LinePoint> gauss_legendre(int points) {
  if (points < 1) throw ArgumentError("Gauss-Legendre needs at least one point");
  const int n = points;
  std::vector<LinePoint> out(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double dp = legendre(n, x).second;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[i] = {0.5 * (1.0 - x), 0.5 * w};
    out[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
  }
  return out;
}

std::vector<LinePoint> line_rule(int degree) {
  return gauss_legendre(std::max(1, (degree + 2) / 2));
}

std::vector<TriPoint> triangle_rule(int degree) {
  if (degree < 0) throw ArgumentError("quadrature degree must be non-negative");
  if (degree <= 1) return {{1.0 / 3.0, 1.0 / 3.0, 0.5}};
  if (degree == 2) {
    return {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
            {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
            {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
  }
  if (degree == 5) {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w0 = 9.0 / 80.0;
    const double w1 = (155.0 - s15) / 2400.0;
    const double w2 = (155.0 + s15) / 2400.0;
    return {{1.0 / 3.0, 1.0 / 3.0, w0}, {a1, a1, w1}, {b1, a1, w1}, {a1, b1, w1},
            {a2, a2, w2}, {b2, a2, w2}, {a2, b2, w2}};
  }
  // (u, v) -> (u, (1 - u) v) with Jacobian (1 - u): degree + 1 in u.
  const int q = (degree + 3) / 2;
  auto g = gauss_legendre(q);
  std::vector<TriPoint> out;
  out.reserve(static_cast<std::size_t>(q) * q);
  for (const auto& pu : g) {
    for (const auto& pv : g) {
      out.push_back({pu.s, (1.0 - pu.s) * pv.s, pu.w * pv.w * (1.0 - pu.s)});
    }
  }
  return out;
}

}  // namespace waveplate
