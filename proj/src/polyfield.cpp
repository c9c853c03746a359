#include "waveplate/polyfield.hpp"

#include <cmath>
#include <sstream>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

}  // namespace

PolyField PolyField::monomial(int i, int j, double coef) {
  PolyField p;
  p.set_coef(i, j, coef);
  return p;
}

void PolyField::set_coef(int i, int j, double v) {
  if (i < 0 || j < 0 || i + j > kMaxDegree) throw ArgumentError("monomial degree out of range");
  c_[i][j] = v;
}

int PolyField::degree() const {
  int d = 0;
  for (int i = 0; i <= kMaxDegree; ++i) {
    for (int j = 0; i + j <= kMaxDegree; ++j) {
      if (c_[i][j] != 0.0) d = std::max(d, i + j);
    }
  }
  return d;
}

double PolyField::derivative(int a, int b, Point2 p) const {
  double s = 0.0;
  for (int i = a; i <= kMaxDegree; ++i) {
    for (int j = b; i + j <= kMaxDegree; ++j) {
      if (c_[i][j] == 0.0) continue;
      s += c_[i][j] * falling(i, a) * falling(j, b) * std::pow(p.x, i - a) * std::pow(p.y, j - b);
    }
  }
  return s;
}

PolyField PolyField::differentiate(int a, int b) const {
  PolyField out;
  for (int i = a; i <= kMaxDegree; ++i) {
    for (int j = b; i + j <= kMaxDegree; ++j) {
      out.c_[i - a][j - b] = c_[i][j] * falling(i, a) * falling(j, b);
    }
  }
  return out;
}

double PolyField::bilaplacian(Point2 p) const {
  return derivative(4, 0, p) + 2.0 * derivative(2, 2, p) + derivative(0, 4, p);
}

PolyField& PolyField::operator+=(const PolyField& o) {
  for (int i = 0; i <= kMaxDegree; ++i) {
    for (int j = 0; j <= kMaxDegree; ++j) c_[i][j] += o.c_[i][j];
  }
  return *this;
}

PolyField operator*(double s, PolyField a) {
  for (auto& row : a.c_) {
    for (auto& v : row) v *= s;
  }
  return a;
}

std::string PolyField::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int d = kMaxDegree; d >= 0; --d) {
    for (int i = d; i >= 0; --i) {
      double c = c_[i][d - i];
      if (c == 0.0) continue;
      if (!first) out << " + ";
      first = false;
      out << c;
      if (i) out << "*x^" << i;
      if (d - i) out << "*y^" << (d - i);
    }
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace waveplate
