#include "waveplate/dynamics.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

constexpr const char* kHeader = "t,E,D_eta,D_xi,D_zeta,mean_u,mean_w,mean_wx1,mean_wx2";

EnergyRecord record_of(const GeneratorSystem& sys, const VecD& u, double t) {
  EnergyRecord r;
  r.t = t;
  r.energy = sys.energy(u).total();
  Dissipation d = sys.dissipation(u);
  r.d_eta = d.eta;
  r.d_xi = d.xi;
  r.d_zeta = d.zeta;
  r.means = sys.means(u);
  return r;
}

}  // namespace

void EnergyTrace::write_csv(std::ostream& out) const {
  out << kHeader << "\n" << std::setprecision(17);
  for (const auto& r : records) {
    out << r.t << "," << r.energy << "," << r.d_eta << "," << r.d_xi << "," << r.d_zeta;
    for (double m : r.means) out << "," << m;
    out << "\n";
  }
}

void EnergyTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  write_csv(out);
}

EnergyTrace EnergyTrace::read_csv(std::istream& in) {
  EnergyTrace trace;
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("energy trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ArgumentError("unexpected energy trace header: " + line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ArgumentError("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() != 9) throw ArgumentError("line " + std::to_string(line_no) + ": expected 9 columns");
    trace.records.push_back({v[0], v[1], v[2], v[3], v[4], {v[5], v[6], v[7], v[8]}});
  }
  return trace;
}

EnergyTrace EnergyTrace::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open energy trace " + path);
  return read_csv(in);
}

MidpointStepper::MidpointStepper(const GeneratorSystem& sys, double dt) : sys_(sys), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("time step must be positive");
  explicit_ = add(sys.E(), sys.B(), 1.0, 0.5 * dt);
  implicit_ = std::make_unique<Factorization<double>>(add(sys.E(), sys.B(), 1.0, -0.5 * dt));
}

VecD MidpointStepper::step(const VecD& u) const { return implicit_->solve(explicit_.apply(u)); }

double default_time_step(const TriMesh& mesh) { return std::min(1e-2, mesh.h() / 4.0); }

EnergyTrace run(const GeneratorSystem& sys, const VecD& u0, double dt, double T, int stride,
                RunStats* stats) {
  if (u0.size() != sys.size()) throw ArgumentError("initial state has the wrong length");
  if (!u0.allFinite()) throw ArgumentError("initial state is not finite");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ArgumentError("final time must be non-negative");
  if (stride < 1) throw ArgumentError("output stride must be at least 1");
  MidpointStepper stepper(sys, dt);
  const long steps = static_cast<long>(std::floor(T / dt + 1e-9));
  EnergyTrace trace;
  RunStats st;
  VecD u = u0;
  double e = sys.energy(u).total();
  st.e0 = e;
  double dissipated = 0.0;
  trace.records.push_back(record_of(sys, u, 0.0));
  for (long k = 1; k <= steps; ++k) {
    VecD next = stepper.step(u);
    if (!next.allFinite()) throw SimulationError("state became non-finite", (k - 1) * dt);
    double e_next = sys.energy(next).total();
    VecD mid = 0.5 * (u + next);
    double d = dt * sys.dissipation(mid).total();
    st.max_step_residual = std::max(st.max_step_residual, std::abs(e_next - e + d));
    st.max_increase = std::max(st.max_increase, e_next - e);
    dissipated += d;
    u = std::move(next);
    e = e_next;
    if (k % stride == 0) trace.records.push_back(record_of(sys, u, k * dt));
  }
  st.steps = static_cast<int>(steps);
  st.cumulative_residual = std::abs(e - st.e0 + dissipated);
  if (stats) *stats = st;
  return trace;
}

}  // namespace waveplate
