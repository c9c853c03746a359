#pragma once

#include <array>
#include <memory>

#include "waveplate/eigensolvers.hpp"
#include "waveplate/fem.hpp"
#include "waveplate/lu.hpp"
#include "waveplate/mesh.hpp"
#include "waveplate/sparse.hpp"

namespace waveplate {

// State vector [q | p | eta | xi | zeta]. q and p hold displacement and
// velocity in the tied space X: wave vertex values first, then plate vertices
// off the interface, then plate edge dofs. Interface vertices carry one value
// shared by u and w, so the transmission condition holds by construction.
struct StateLayout {
  int n_x = 0;
  int n_eta = 0;
  int n_xi = 0;
  int n_zeta = 0;

  int q() const { return 0; }
  int p() const { return n_x; }
  int eta() const { return 2 * n_x; }
  int xi() const { return eta() + n_eta; }
  int zeta() const { return xi() + n_xi; }
  int size() const { return zeta() + n_zeta; }
};

struct DofMap {
  StateLayout layout;
  std::vector<int> wave_to_x;   // wave dof -> X
  std::vector<int> plate_to_x;  // plate dof -> X
  SparseMatrix<double> Pw;      // X -> wave dofs
  SparseMatrix<double> Pp;      // X -> plate dofs
};

DofMap build_dofmap(const TriMesh& mesh, const FemSpaces& spaces);

struct Energy {
  double u = 0, v = 0, eta = 0, w = 0, z = 0, xi = 0, zeta = 0;
  double total() const { return u + v + eta + w + z + xi + zeta; }
};

struct Dissipation {
  double eta = 0, xi = 0, zeta = 0;
  double total() const { return eta + xi + zeta; }
};

// Discrete generator A_h = E^{-1} B of the damped transmission problem, with
// the energy Gram matrix of the state space.
class GeneratorSystem {
 public:
  GeneratorSystem(TriMesh mesh, double mu);

  const TriMesh& mesh() const { return mesh_; }
  const FormSet& forms() const { return forms_; }
  const DofMap& dofs() const { return dofs_; }
  const StateLayout& layout() const { return dofs_.layout; }
  int size() const { return dofs_.layout.size(); }
  double mu() const { return forms_.mu; }

  const SparseMatrix<double>& E() const { return E_; }
  const SparseMatrix<double>& B() const { return B_; }
  const SparseMatrix<double>& gram() const { return gram_; }
  const SparseMatrix<double>& KX() const { return KX_; }
  const SparseMatrix<double>& MX() const { return MX_; }
  // traces composed with the tied space
  const SparseMatrix<double>& T1X() const { return T1X_; }
  const SparseMatrix<double>& T2nX() const { return T2nX_; }
  const SparseMatrix<double>& T2vX() const { return T2vX_; }

  VecD apply_generator(const VecD& u) const;
  VecC apply_generator(const VecC& u) const;
  VecD solve_E(const VecD& r) const { return E_lu_->solve(r); }
  VecC solve_E(const VecC& r) const;

  Energy energy(const VecD& u) const;
  Energy energy(const VecC& u) const;
  Dissipation dissipation(const VecD& u) const;
  Dissipation dissipation(const VecC& u) const;
  double h_norm_sq(const VecD& u) const { return u.dot(gram_.apply(u)); }
  double h_norm_sq(const VecC& u) const;

  // Kernel of A_h (zero-energy rigid states) and the conserved functionals
  // annihilating its range, one column each.
  const Dense<double>& rigid_modes() const { return rigid_; }
  const Dense<double>& conserved() const { return conserved_; }
  // Spectral projection onto range(A_h) along the kernel.
  VecD project_range(const VecD& u) const;
  VecC project_range(const VecC& u) const;

  // Rows on X: int u, int w, int dw/dx1, int dw/dx2.
  const Eigen::Matrix<double, 4, Eigen::Dynamic>& mean_rows() const { return mean_rows_; }
  std::array<double, 4> means(const VecD& u) const;
  // Zero the four mean functionals of the q and p blocks (M_X-orthogonally).
  VecD project_means(const VecD& u) const;

  // Gram matrix completed on the kernel of the energy seminorm; positive
  // definite and equal to gram() on states with zero completion weights.
  const SparseMatrix<double>& completed_gram() const { return completed_; }

  // Block views
  VecD wave_part(const VecD& x) const { return dofs_.Pw.apply(x); }
  VecD plate_part(const VecD& x) const { return dofs_.Pp.apply(x); }

 private:
  TriMesh mesh_;
  FormSet forms_;
  DofMap dofs_;
  SparseMatrix<double> KX_, MX_, T1X_, T2nX_, T2vX_;
  SparseMatrix<double> E_, B_, gram_, completed_;
  std::unique_ptr<Factorization<double>> E_lu_;
  std::unique_ptr<Factorization<double>> M_lu_;
  Dense<double> rigid_, conserved_;
  Eigen::Matrix2d pairing_inv_;
  Eigen::Matrix<double, 4, Eigen::Dynamic> mean_rows_;
  Eigen::Matrix<double, Eigen::Dynamic, 4> mean_dual_;  // M_X^{-1} C^T
  Eigen::Matrix4d mean_gram_inv_;
};

// (lambda E - B) with a cached factorization: solve(F) returns
// (lambda - A_h)^{-1} F and solve_adjoint the adjoint map.
class ShiftedSolver {
 public:
  ShiftedSolver(const GeneratorSystem& sys, cplx lambda);
  cplx lambda() const { return lambda_; }
  VecC solve(const VecC& f) const;
  // Raw pencil solves: (lambda E - B) x = b and its conjugate transpose.
  VecC solve_pencil(const VecC& b) const;
  VecC solve_pencil_adjoint(const VecC& b) const;

 private:
  const GeneratorSystem& sys_;
  cplx lambda_;
  bool deflated_ = false;
  std::unique_ptr<Factorization<cplx>> lu_;
};

// Below this modulus lambda is treated as the zero eigenvalue and the solve
// is restricted to range(A_h).
inline constexpr double kDeflationRadius = 1e-8;

VecC resolvent_solve(const GeneratorSystem& sys, cplx lambda, const VecC& f);

struct SmoothData {
  VecD u0;
  double da_norm_sq = 0.0;  // ||U0||_H^2 + ||A_h U0||_H^2
  double residual = 0.0;
};

// U0 = (I - A_h)^{-1} P F with P the mean projection.
SmoothData smooth_initial_data(const GeneratorSystem& sys, const VecD& f);

VecD random_state(const GeneratorSystem& sys, unsigned seed);

}  // namespace waveplate
