#pragma once

#include <vector>

namespace waveplate {

// Point on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriPoint {
  double xi = 0.0;
  double eta = 0.0;
  double w = 0.0;
};

// Point on [0, 1]; weights sum to 1.
struct LinePoint {
  double s = 0.0;
  double w = 0.0;
};

// Rule exact for polynomials of total degree <= degree. Degrees 1, 2 and 5
// use the classical 1-, 3- and 7-point rules; other degrees use a collapsed
// Gauss-Legendre product rule.
std::vector<TriPoint> triangle_rule(int degree);
std::vector<LinePoint> gauss_legendre(int points);
std::vector<LinePoint> line_rule(int degree);

}  // namespace waveplate
