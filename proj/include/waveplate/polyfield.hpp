#pragma once

#include <array>
#include <string>

#include "waveplate/mesh.hpp"

namespace waveplate {

// Bivariate polynomial sum c[i][j] x^i y^j of total degree <= kMaxDegree.
class PolyField {
 public:
  static constexpr int kMaxDegree = 6;

  PolyField() { c_.fill({}); }
  static PolyField monomial(int i, int j, double coef = 1.0);
  static PolyField constant(double v) { return monomial(0, 0, v); }

  double coef(int i, int j) const { return c_[i][j]; }
  void set_coef(int i, int j, double v);
  int degree() const;

  double operator()(Point2 p) const { return derivative(0, 0, p); }
  // d^(a+b) / dx^a dy^b evaluated at p.
  double derivative(int a, int b, Point2 p) const;
  PolyField differentiate(int a, int b) const;

  double dx(Point2 p) const { return derivative(1, 0, p); }
  double dy(Point2 p) const { return derivative(0, 1, p); }
  double laplacian(Point2 p) const { return derivative(2, 0, p) + derivative(0, 2, p); }
  double bilaplacian(Point2 p) const;

  PolyField& operator+=(const PolyField& o);
  friend PolyField operator+(PolyField a, const PolyField& b) { return a += b; }
  friend PolyField operator*(double s, PolyField a);

  std::string to_string() const;

 private:
  std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> c_;
};

}  // namespace waveplate
