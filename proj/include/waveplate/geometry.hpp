#pragma once

#include <optional>
#include <string>
#include <vector>

#include "waveplate/mesh.hpp"
#include "waveplate/polyfield.hpp"

namespace waveplate {

struct MgcViolation {
  int edge = -1;
  double value = 0.0;  // m.nu at the edge midpoint
};

// Multiplier m(x) = x - x0 against the outward normals.
struct MgcReport {
  double delta = 0.0;               // min m.nu over Gamma1 and Gamma2
  double R1 = 0.0;                  // max |m| over Gamma1 vertices
  double R2 = 0.0;                  // max |m| over Gamma2 vertices
  double interface_residual = 0.0;  // max |m.nu1| over interface edges
  double diameter = 0.0;
  std::vector<MgcViolation> violations;
  bool pass = false;
};

MgcReport check_mgc(const TriMesh& mesh, Point2 x0);

struct AngleCheck {
  int vertex = -1;
  Point2 position;
  double angle = 0.0;  // radians
  bool pass = false;
};

struct AngleReport {
  std::vector<AngleCheck> corners;
  double threshold = 0.0;  // radians; a corner passes when its angle is strictly below
  bool has_verdict = true;
  std::string warning;
  bool pass() const;
};

// Boundary vertices whose turn exceeds this are corners; smaller turns are
// treated as the discretization of a smooth arc.
inline constexpr double kFeatureTurn = 0.3;

// Known plate threshold, valid for mu = 0.3 only.
inline constexpr double kPlateThresholdDeg = 77.753311;

AngleReport check_wave_angles(const TriMesh& mesh, double feature_turn = kFeatureTurn);
AngleReport check_plate_angles(const TriMesh& mesh, double mu,
                               std::optional<double> omega0_deg = std::nullopt,
                               double feature_turn = kFeatureTurn);

// Terms of  -int_W lap y (m.grad y) = 1/2 int (m.nu)|grad y|^2 - int d_nu y (m.grad y)
// over the wave subdomain and its full boundary.
struct RellichTerms {
  double lhs = 0.0;
  double flux = 0.0;      // 1/2 int (m.nu)|grad y|^2
  double boundary = 0.0;  // int d_nu y (m.grad y)
  double gamma1_normal_sq = 0.0;  // int_Gamma1 |d_nu y|^2
  double interface = 0.0;         // int_I d_nu y (m.grad y)
  double residual() const;
};

RellichTerms rellich_terms(const TriMesh& mesh, const PolyField& y, Point2 x0, int degree = 8);
double rellich_residual(const TriMesh& mesh, const PolyField& y, Point2 x0, int degree = 8);

// LHS - RHS of the Rellich lower bound
//   -int lap y (m.grad y) >= -(R1^2/delta) int_Gamma1 |d_nu y|^2 - int_I d_nu y (m.grad y).
double rellich_inequality_gap(const TriMesh& mesh, const PolyField& y, Point2 x0, double delta,
                              double R1, int degree = 8);

// Terms of
//   int_P bilap y (m.grad y) = a(y, y) - int [B1 y d_nu g - B2 y g] + 1/2 int (m.nu) b(y),
// g = m.grad y, over the plate subdomain. The B2 pairing is taken in the weak
// form int d_nu lap y g - (1 - mu) C2 y d_tau g, which is exact on polygons.
struct PlateMultiplierTerms {
  double lhs = 0.0;
  double bending = 0.0;
  double moment = 0.0;  // int B1 y d_nu g
  double shear = 0.0;   // <B2 y, g>
  double flux = 0.0;    // 1/2 int (m.nu) b(y)
  double residual() const;
};

PlateMultiplierTerms plate_multiplier_terms(const TriMesh& mesh, const PolyField& y, Point2 x0,
                                            double mu, int degree = 8);
double plate_multiplier_residual(const TriMesh& mesh, const PolyField& y, Point2 x0, double mu,
                                 int degree = 8);

// Boundary operators on a straight edge with outward normal nu.
double plate_C1(const PolyField& y, Point2 x, Point2 nu);
double plate_C2(const PolyField& y, Point2 x, Point2 nu);
double plate_B1(const PolyField& y, Point2 x, Point2 nu, double mu);

}  // namespace waveplate
