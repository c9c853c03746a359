// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "model_problems.hpp"
#include "waveplate/analysis.hpp"
#include "waveplate/config.hpp"
#include "waveplate/dynamics.hpp"
#include "waveplate/fem.hpp"
#include "waveplate/geometry.hpp"
#include "waveplate/spectral.hpp"

using namespace waveplate;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig lens_config() {
  std::string path = std::string(WAVEPLATE_SOURCE_DIR) + "/configs/lens.cfg";
  return RunConfig::from_settings(Settings::load(path), std::string(WAVEPLATE_SOURCE_DIR) + "/configs");
}

const GeneratorSystem& lens_system() {
  static GeneratorSystem sys(build_mesh(lens_config()), lens_config().mu);
  return sys;
}

const std::vector<EigenPair>& lens_pairs() {
  static std::vector<EigenPair> pairs = eig_ODeltaR(lens_system(), lens_config().eig_count);
  return pairs;
}

// 1. Discrete dissipativity on random states.
void dissipativity(Outcome& o) {
  constexpr double kTol = 1e-10;
  constexpr double kLimit = 10.0;
  auto t0 = Clock::now();
  GeneratorSystem sys(gen_rect_transmission(8), 0.3);
  double worst = 0.0;
  for (unsigned seed = 1; seed <= 100; ++seed) {
    VecD u = random_state(sys, seed);
    double re = u.dot(sys.gram().apply(sys.apply_generator(u)));
    worst = std::max(worst, std::abs(re + sys.dissipation(u).total()) / sys.h_norm_sq(u));
  }
  double t = seconds_since(t0);
  o.detail << "max |Re<AU,U> + D(U)| / ||U||^2 = " << worst << " over 100 states, " << t << " s";
  o.require(worst <= kTol, "relative defect <= 1e-10");
  o.require(t < kLimit, "runtime < 10 s");
}

// 2. Energy identity over 10,000 midpoint steps.
void energy_identity(Outcome& o) {
  constexpr double kStepTol = 1e-9;
  constexpr double kCumulativeTol = 1e-8;
  constexpr int kSteps = 10000;
  constexpr double kDt = 0.01;
  constexpr double kLimit = 120.0;
  auto t0 = Clock::now();
  RunConfig cfg;
  cfg.n = 8;
  cfg.smoothing = 1;
  GeneratorSystem sys(build_mesh(cfg), cfg.mu);
  InitialData init = initial_data(sys, cfg);
  RunStats stats;
  run(sys, init.u0, kDt, kSteps * kDt, 100, &stats);
  double t = seconds_since(t0);
  double step = stats.max_step_residual / stats.e0, cum = stats.cumulative_residual / stats.e0;
  o.detail << stats.steps << " steps, max step defect " << step << " E0, cumulative " << cum << " E0, " << t
           << " s";
  o.require(stats.steps == kSteps, "10,000 steps");
  o.require(step <= kStepTol, "per-step defect <= 1e-9 E0");
  o.require(cum <= kCumulativeTol, "cumulative defect <= 1e-8 E0");
  o.require(t < kLimit, "runtime < 2 min");
}

// 3. Element and assembled forms.
void forms(Outcome& o) {
  constexpr double kElementTol = 1e-14;
  constexpr double kAffineTol = 1e-12;
  constexpr double kQuadraticTol = 1e-10;
  constexpr double kPsdTol = -1e-12;
  auto g = p1_gradients({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  const double expect[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  double element = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) element = std::max(element, std::abs(0.5 * dot(g[a], g[b]) - expect[a][b]));

  double affine = 0.0, affine_matrix = 0.0, quadratic = 0.0, min_form = INFINITY;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const TriMesh& mesh : {gen_rect_transmission(8), gen_lens(kPi / 2, kPi / 3, 8)}) {
    FormSet f = assemble_forms(mesh, 0.3);
    VecD aff = interpolate_morley(
        mesh, f.spaces, [](Point2 p) { return 1.5 - 2 * p.x + 0.7 * p.y; }, [](Point2) { return Point2{-2, 0.7}; });
    affine = std::max(affine, std::abs(bending_form(mesh, f.spaces, aff, aff, 0.3)));
    affine_matrix = std::max(affine_matrix, std::abs(aff.dot(f.K2.apply(aff))));
    VecD x2 = interpolate_morley(
        mesh, f.spaces, [](Point2 p) { return p.x * p.x; }, [](Point2 p) { return Point2{2 * p.x, 0}; });
    double area = mesh.subdomain_area(Subdomain::Plate);
    quadratic = std::max({quadratic, std::abs(x2.dot(f.K2.apply(x2)) - 4 * area),
                          std::abs(bending_form(mesh, f.spaces, x2, x2, 0.3) - 4 * area)});
    for (int k = 0; k < 50; ++k) {
      VecD w(f.spaces.n_plate()), u(f.spaces.n_wave());
      for (auto& v : w) v = unit(rng);
      for (auto& v : u) v = unit(rng);
      min_form = std::min({min_form, w.dot(f.K2.apply(w)), u.dot(f.K1.apply(u))});
    }
  }
  o.detail << "element " << element << ", a(affine) " << affine << " (through the assembled matrix " << affine_matrix
           << "), |a(x1^2) - 4 area| " << quadratic
           << ", min a(v,v) " << min_form << " over 100 fields";
  o.require(element <= kElementTol, "reference element to 1e-14");
  o.require(affine <= kAffineTol, "a(affine) = 0 to 1e-12");
  o.require(quadratic <= kQuadraticTol, "a(x1^2) = 4 area to 1e-10");
  o.require(min_form >= kPsdTol, "a(v,v) >= -1e-12");
}

// 4. Convergence rates of the manufactured problems, each of three refinements.
void rates(Outcome& o) {
  constexpr double kPoissonL2 = 1.9;
  constexpr double kPlateEnergy = 0.9;
  constexpr double kPlateL2 = 1.7;
  constexpr double kLimit = 120.0;
  auto t0 = Clock::now();
  const int ns[] = {8, 16, 32, 64};
  std::vector<model::Errors> p, c;
  for (int n : ns) {
    p.push_back(model::poisson(n));
    c.push_back(model::clamped_plate(n));
  }
  double pmin = INFINITY, emin = INFINITY, lmin = INFINITY;
  o.detail << "rates (Poisson L2 / plate energy / plate L2):";
  for (int i = 0; i < 3; ++i) {
    double a = model::rate(p[i].l2, p[i + 1].l2, p[i].h, p[i + 1].h);
    double b = model::rate(c[i].energy, c[i + 1].energy, c[i].h, c[i + 1].h);
    double d = model::rate(c[i].l2, c[i + 1].l2, c[i].h, c[i + 1].h);
    o.detail << " " << a << "/" << b << "/" << d;
    pmin = std::min(pmin, a);
    emin = std::min(emin, b);
    lmin = std::min(lmin, d);
  }
  double t = seconds_since(t0);
  o.detail << ", " << t << " s";
  o.require(pmin >= kPoissonL2, "Poisson L2 rate >= 1.9");
  o.require(emin >= kPlateEnergy, "plate energy rate >= 0.9");
  o.require(lmin >= kPlateL2, "plate L2 rate >= 1.7");
  o.require(t < kLimit, "runtime < 2 min");
}

// 5. Multiplier identities on the polynomial battery.
void multipliers(Outcome& o) {
  constexpr double kTol = 1e-9;
  constexpr double kLimit = 30.0;
  auto t0 = Clock::now();
  const std::vector<PolyField> battery{PolyField::monomial(2, 0), PolyField::monomial(0, 2),
                                       PolyField::monomial(1, 1), PolyField::monomial(3, 0),
                                       PolyField::monomial(4, 0)};
  const Point2 x0{0.0, 0.5};
  double rellich = 0.0, plate = 0.0;
  for (const TriMesh& mesh : {gen_rect_transmission(8), build_mesh(lens_config())}) {
    for (const auto& y : battery) {
      rellich = std::max(rellich, rellich_residual(mesh, y, x0));
      plate = std::max(plate, plate_multiplier_residual(mesh, y, x0, 0.3));
    }
  }
  double t = seconds_since(t0);
  o.detail << "max Rellich residual " << rellich << ", max plate residual " << plate << ", " << t << " s";
  o.require(rellich <= kTol, "Rellich residual <= 1e-9");
  o.require(plate <= kTol, "plate residual <= 1e-9");
  o.require(t < kLimit, "runtime < 30 s");
}

// 6. Geometry checks on the rectangle.
void geometry(Outcome& o) {
  constexpr double kDeltaTol = 1e-12;
  constexpr double kInterfaceTol = 1e-12;
  constexpr double kThresholdDeg = 77.753311;
  constexpr double kLimit = 1.0;
  auto t0 = Clock::now();
  RunConfig cfg = RunConfig::from_settings(Settings::load(std::string(WAVEPLATE_SOURCE_DIR) + "/configs/rect.cfg"));
  TriMesh mesh = build_mesh(cfg);
  MgcReport mgc = check_mgc(mesh, cfg.x0);
  AngleReport wave = check_wave_angles(mesh);
  AngleReport plate = check_plate_angles(mesh, cfg.mu, cfg.omega0_deg);
  int violations = 0;
  for (const auto& c : plate.corners) violations += c.pass ? 0 : 1;
  double t = seconds_since(t0);
  double threshold_deg = plate.threshold * 180.0 / kPi;
  o.detail << "delta " << mgc.delta << ", interface residual " << mgc.interface_residual << ", wave "
           << (wave.pass() ? "pass" : "fail") << ", plate " << (plate.pass() ? "pass" : "fail") << " ("
           << violations << " violations at threshold " << threshold_deg << " deg), " << t << " s";
  o.require(std::abs(mgc.delta - 0.5) <= kDeltaTol, "delta = 0.5");
  o.require(mgc.interface_residual <= kInterfaceTol, "interface residual <= 1e-12");
  o.require(wave.pass(), "wave angles pass");
  o.require(plate.has_verdict && !plate.pass(), "plate angles fail");
  o.require(violations == 4, "four plate corner violations");
  o.require(std::abs(threshold_deg - kThresholdDeg) <= 1e-9, "threshold 77.753311 deg");
  o.require(t < kLimit, "runtime < 1 s");
}

struct LensRun {
  EnergyTrace trace;
  double da_norm_sq = 0.0;
  double seconds = 0.0;
};

const LensRun& lens_run() {
  static LensRun r = [] {
    auto t0 = Clock::now();
    RunConfig cfg = lens_config();
    const GeneratorSystem& sys = lens_system();
    InitialData init = initial_data(sys, cfg);
    LensRun out;
    out.trace = run(sys, init.u0, *cfg.dt, cfg.T, cfg.stride);
    out.da_norm_sq = init.da_norm_sq;
    out.seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

// 7. Strong stability on the lens.
void strong_stability(Outcome& o) {
  constexpr double kRatio = 0.05;
  constexpr double kLimit = 600.0;
  const LensRun& r = lens_run();
  double ratio = r.trace.records.back().energy / r.trace.records.front().energy;
  o.detail << "h " << lens_system().mesh().h() << ", T " << r.trace.records.back().t << ", E(T)/E(0) " << ratio
           << ", " << r.seconds << " s";
  o.require(ratio <= kRatio, "E(T)/E(0) <= 0.05");
  o.require(r.seconds < kLimit, "runtime < 10 min");
}

// 8. Polynomial decay over [T/4, T].
void polynomial_decay(Outcome& o) {
  constexpr double kTrendTol = 1e-6;
  constexpr double kSlope = -0.7;
  const LensRun& r = lens_run();
  DecayReport d = decay_fit(r.trace, r.da_norm_sq);
  o.detail << "window [" << d.t_min << ", " << d.t_max << "], tE trend " << d.tE_trend << " (start value "
           << d.tE_start << "), log-log slope " << d.loglog_slope;
  o.require(!d.truncated, "window not truncated");
  o.require(d.tE_trend <= kTrendTol * d.tE_start, "tE trend <= 1e-6 initial value");
  o.require(d.loglog_slope <= kSlope, "log-log slope <= -0.7");
}

// 9. Witness sequence on the first 20 resolved eigenfrequencies.
void witness_sequence(Outcome& o) {
  constexpr int kCount = 20;
  constexpr double kUnitTol = 1e-8;
  constexpr double kResidualTol = 1e-8;
  constexpr double kFSlope = -0.2;
  constexpr double kBoundSlack = 1e-6;
  constexpr double kLimit = 300.0;
  auto t0 = Clock::now();
  const GeneratorSystem& sys = lens_system();
  std::vector<WitnessPoint> pts;
  for (const auto& p : witness(lens_pairs(), sys)) {
    if (p.resolved && static_cast<int>(pts.size()) < kCount) pts.push_back(p);
  }
  double min_u = INFINITY, max_res = 0.0, max_h_res = 0.0, worst_bound = INFINITY;
  std::vector<double> lmu, lf, lr;
  for (const auto& p : pts) {
    min_u = std::min(min_u, p.U_norm);
    max_res = std::max(max_res, p.pencil_residual);
    max_h_res = std::max(max_h_res, p.residual / p.U_norm);
    double rn = resolvent_norm(sys, p.mu);
    worst_bound = std::min(worst_bound, rn - p.U_norm / p.F_norm);
    lmu.push_back(std::log(p.mu));
    lf.push_back(std::log(p.F_norm));
    lr.push_back(std::log(rn));
  }
  double t = seconds_since(t0);
  double fslope = fit_slope(lmu, lf), rslope = fit_slope(lmu, lr);
  o.detail << pts.size() << " points, mu " << pts.front().mu << ".." << pts.back().mu << ", min U_norm " << min_u
           << ", max shifted-system residual " << max_res << " (energy-norm form " << max_h_res
           << "), F_norm slope " << fslope << ", min(R - U/F) " << worst_bound << ", log R slope " << rslope
           << ", " << t << " s";
  o.require(static_cast<int>(pts.size()) == kCount, "20 resolved points");
  o.require(min_u >= 1.0 - kUnitTol, "U_norm >= 1 - 1e-8");
  o.require(max_res <= kResidualTol, "shifted-system residual <= 1e-8");
  o.require(fslope <= kFSlope, "F_norm log-log slope <= -0.2");
  o.require(worst_bound >= -kBoundSlack, "resolvent_norm >= U_norm/F_norm");
  o.require(rslope > 0.0, "resolvent norm grows along the sequence");
  o.require(t < kLimit, "runtime < 5 min");
}

// 10. Resolvent growth consistent with the exponent 2.
void resolvent_growth(Outcome& o) {
  constexpr double kGrowth = 2.0;
  constexpr double kTrend = 0.0;
  constexpr double kLimit = 300.0;
  auto t0 = Clock::now();
  const GeneratorSystem& sys = lens_system();
  std::vector<double> betas = default_sweep(lens_pairs(), sys.mesh().h(), lens_config().sweep_count);
  std::vector<double> lb, lr, top_b, top_scaled;
  const double top_start = betas.back() / std::sqrt(10.0);
  for (double b : betas) {
    double r = resolvent_norm(sys, b);
    lb.push_back(std::log(b));
    lr.push_back(std::log(r));
    if (b >= top_start * (1 - 1e-12)) {
      top_b.push_back(std::log(b));
      top_scaled.push_back(std::log(r) - 2.0 * std::log(b));
    }
  }
  double t = seconds_since(t0);
  double ell = fit_slope(lb, lr);
  double growth = std::exp(ell * (lb.back() - lb.front()));
  double trend = fit_slope(top_b, top_scaled);
  o.detail << betas.size() << " frequencies " << betas.front() << ".." << betas.back() << ", fitted exponent " << ell
           << ", fitted growth " << growth << "x, trend of beta^-2 R over the top half-decade (" << top_b.size()
           << " points) " << trend << ", " << t << " s";
  o.require(top_b.size() >= 3, "at least 3 points in the top half-decade");
  o.require(trend <= kTrend, "beta^-2 R non-increasing over the top half-decade");
  o.require(growth >= kGrowth, "growth >= 2x");
  o.require(t < kLimit, "runtime < 5 min");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"dissipativity", dissipativity},
      {"energy identity", energy_identity},
      {"form correctness", forms},
      {"convergence rates", rates},
      {"multiplier identities", multipliers},
      {"geometry validation", geometry},
      {"strong stability", strong_stability},
      {"polynomial decay", polynomial_decay},
      {"witness sequence", witness_sequence},
      {"resolvent growth", resolvent_growth},
  };
  int failed = 0, k = 0;
  for (const auto& [name, check] : criteria) {
    ++k;
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << k << " " << name << ": " << o.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
