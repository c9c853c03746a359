#pragma once

#include <utility>
#include <vector>

#include "waveplate/eigensolvers.hpp"
#include "waveplate/system.hpp"

namespace waveplate {

// Coercive form with boundary masses on the tied space:
// S = K_X + T1^T G1 T1 + T2v^T G2v T2v + T2n^T G2n T2n, paired with M_X.
SparseMatrix<double> odr_stiffness(const GeneratorSystem& sys);

struct EigenPair {
  double mu_sq = 0.0;
  VecD x;    // tied-space vector, M_X-normalized
  VecD phi;  // wave part
  VecD psi;  // plate part
  double residual = 0.0;  // ||S x - mu^2 M x|| / ||S x||
  double mu() const { return std::sqrt(mu_sq); }
};

std::vector<EigenPair> eig_ODeltaR(const GeneratorSystem& sys, int k, const EigenOptions& opts = {});
std::vector<EigenPair> eig_ODeltaR(const TriMesh& mesh, double mu_poisson, int k,
                                   const EigenOptions& opts = {});

// A frequency is resolved on a mesh of size h when mu h <= 1.
bool resolved(double mu, double h);

struct WitnessState {
  VecC U;
  VecC F;
};

// U = (x/(i mu), x, T1 x/(i mu), T2n x/(i mu), T2v x/(i mu)), F its control part,
// so that (i mu - A_h) U = F.
WitnessState witness_state(const GeneratorSystem& sys, const EigenPair& pair);

struct WitnessPoint {
  double mu = 0.0;
  double U_norm = 0.0;
  double F_norm = 0.0;
  double residual = 0.0;  // ||(i mu - A_h) U - F||_H
  double pencil_residual = 0.0;  // ||(i mu E - B) U - E F|| / ||U||, Euclidean
  bool resolved = true;
};

std::vector<WitnessPoint> witness(const std::vector<EigenPair>& pairs, const GeneratorSystem& sys);

// ||(i beta - A_h)^{-1}|| in the energy norm on the complement of the rigid
// states, by Lanczos on the normal operator of the resolvent.
double resolvent_norm(const GeneratorSystem& sys, double beta, double tol = 1e-10);

struct BtFit {
  double ell_hat = 0.0;    // slope of log ||R|| against log beta
  double intercept = 0.0;
  double residual = 0.0;   // rms of the log fit
};

BtFit bt_exponent_fit(const std::vector<std::pair<double, double>>& points);

// count log-spaced frequencies between the second and the largest resolved
// eigenfrequency
std::vector<double> default_sweep(const std::vector<EigenPair>& pairs, double h, int count = 16);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace waveplate
