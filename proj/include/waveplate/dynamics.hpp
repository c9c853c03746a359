#pragma once

#include <string>
#include <vector>

#include "waveplate/system.hpp"

namespace waveplate {

struct EnergyRecord {
  double t = 0.0;
  double energy = 0.0;
  double d_eta = 0.0;
  double d_xi = 0.0;
  double d_zeta = 0.0;
  std::array<double, 4> means{};  // int u, int w, int dw/dx1, int dw/dx2
};

struct EnergyTrace {
  std::vector<EnergyRecord> records;

  void write_csv(const std::string& path) const;
  void write_csv(std::ostream& out) const;
  static EnergyTrace read_csv(const std::string& path);
  static EnergyTrace read_csv(std::istream& in);
};

struct RunStats {
  int steps = 0;
  double e0 = 0.0;
  double max_step_residual = 0.0;  // max |dE + dt D(mid)| over steps
  double cumulative_residual = 0.0;  // |E(T) - E(0) + sum dt D(mid)|
  double max_increase = 0.0;       // max positive step change of E
};

// Implicit midpoint: (E - dt/2 B) U+ = (E + dt/2 B) U.
class MidpointStepper {
 public:
  MidpointStepper(const GeneratorSystem& sys, double dt);
  double dt() const { return dt_; }
  VecD step(const VecD& u) const;

 private:
  const GeneratorSystem& sys_;
  double dt_;
  SparseMatrix<double> explicit_;
  std::unique_ptr<Factorization<double>> implicit_;
};

double default_time_step(const TriMesh& mesh);

// Integrates to time T, recording every `stride` steps (and t = 0).
EnergyTrace run(const GeneratorSystem& sys, const VecD& u0, double dt, double T, int stride,
                RunStats* stats = nullptr);

}  // namespace waveplate
