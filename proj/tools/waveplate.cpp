#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "waveplate/analysis.hpp"
#include "waveplate/config.hpp"
#include "waveplate/dynamics.hpp"
#include "waveplate/errors.hpp"
#include "waveplate/geometry.hpp"
#include "waveplate/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace waveplate;

namespace {

constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::map<std::string, std::string> overrides;
  std::optional<std::string> output_dir;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "config file (flat 'key = value' lines)");
  app->add_option("--output-dir", c.output_dir, "directory for output files");
  struct Flag {
    const char* key;
    const char* help;
  };
  static const Flag flags[] = {
      {"mesh", "rect, lens or a mesh file path"},
      {"n", "mesh resolution"},
      {"alpha1_deg", "lens corner angle on the wave side (degrees)"},
      {"alpha2_deg", "lens corner angle on the plate side (degrees)"},
      {"x0", "multiplier centre as 'x, y'"},
      {"mu", "Poisson coefficient in (0, 1/2)"},
      {"omega0_deg", "plate corner threshold (degrees) for mu other than 0.3"},
      {"dt", "time step"},
      {"T", "final time"},
      {"stride", "record every stride steps"},
      {"seed", "random seed for the initial data"},
      {"smoothing", "number of resolvent smoothing passes on the initial data"},
      {"eig_count", "number of eigenpairs"},
      {"sweep_count", "number of sweep frequencies"},
      {"beta_min", "lowest sweep frequency"},
      {"beta_max", "highest sweep frequency"},
  };
  for (const auto& f : flags) {
    std::string key = f.key;
    app->add_option_function<std::string>(
        "--" + key, [&c, key](const std::string& v) { c.overrides[key] = v; }, f.help);
  }
}

RunConfig resolve(const Common& c) {
  Settings s;
  std::string base = ".";
  if (!c.config.empty()) {
    if (!fs::exists(c.config)) throw UsageError("cannot open config file " + c.config);
    s = Settings::load(c.config);
    base = fs::path(c.config).parent_path().string();
    if (base.empty()) base = ".";
  }
  for (const auto& [k, v] : c.overrides) s.set(k, v);
  if (c.output_dir) s.set("output_dir", *c.output_dir);
  return RunConfig::from_settings(s, base);
}

fs::path output_path(const RunConfig& cfg, const std::string& name) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir / name;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out.precision(17);
  return out;
}

void write_json(const json& j, const fs::path& p) {
  std::ofstream out = open_output(p);
  out << j.dump(2) << "\n";
}

int threads_from_environment() {
  const char* v = std::getenv("WAVEPLATE_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("WAVEPLATE_THREADS must be a positive integer");
  return static_cast<int>(n);
}

json angles_json(const AngleReport& r) {
  json a = json::array();
  for (const auto& c : r.corners) {
    a.push_back({{"vertex", c.vertex},
                 {"x", c.position.x},
                 {"y", c.position.y},
                 {"angle_deg", c.angle * 180.0 / std::numbers::pi},
                 {"threshold_deg", r.threshold * 180.0 / std::numbers::pi},
                 {"pass", c.pass}});
  }
  return a;
}

json geometry_report(const TriMesh& mesh, const RunConfig& cfg, bool& pass) {
  MgcReport mgc = check_mgc(mesh, cfg.x0);
  AngleReport wave = check_wave_angles(mesh);
  AngleReport plate = check_plate_angles(mesh, cfg.mu, cfg.omega0_deg);
  pass = mgc.pass && wave.pass() && (!plate.has_verdict || plate.pass());
  json j;
  j["delta"] = mgc.delta;
  j["R1"] = mgc.R1;
  j["R2"] = mgc.R2;
  j["interface_residual"] = mgc.interface_residual;
  j["wave_angles"] = angles_json(wave);
  j["plate_angles"] = angles_json(plate);
  if (!plate.has_verdict) j["warning"] = plate.warning;
  json v = json::array();
  for (const auto& m : mgc.violations) v.push_back({{"edge", m.edge}, {"m_dot_nu", m.value}});
  j["mgc_violations"] = v;
  j["pass"] = pass;
  return j;
}

int cmd_mesh_gen(const RunConfig& cfg) {
  TriMesh mesh = build_mesh(cfg);
  fs::path p = output_path(cfg, "mesh.txt");
  save_mesh(mesh, p.string());
  std::cout << p.string() << ": " << mesh.vertices().size() << " vertices, "
            << mesh.triangles().size() << " triangles, h = " << mesh.h() << "\n";
  return 0;
}

int cmd_check_geometry(const RunConfig& cfg) {
  bool pass = false;
  json j = geometry_report(build_mesh(cfg), cfg, pass);
  write_json(j, output_path(cfg, "geometry.json"));
  std::cout << j.dump(2) << "\n";
  return pass ? 0 : kValidationFailure;
}

int cmd_simulate(const RunConfig& cfg, bool strict) {
  TriMesh mesh = build_mesh(cfg);
  if (strict) {
    bool pass = false;
    json j = geometry_report(mesh, cfg, pass);
    if (!pass) {
      std::cout << j.dump(2) << "\n";
      return kValidationFailure;
    }
  }
  GeneratorSystem sys(mesh, cfg.mu);
  InitialData init = initial_data(sys, cfg);
  double dt = cfg.dt ? *cfg.dt : default_time_step(sys.mesh());
  RunStats stats;
  EnergyTrace trace = run(sys, init.u0, dt, cfg.T, cfg.stride, &stats);
  trace.write_csv(output_path(cfg, "energy.csv").string());
  json j;
  j["dt"] = dt;
  j["T"] = cfg.T;
  j["steps"] = stats.steps;
  j["h"] = sys.mesh().h();
  j["unknowns"] = sys.layout().size();
  j["seed"] = cfg.seed;
  j["smoothing"] = cfg.smoothing;
  j["E0"] = stats.e0;
  j["E_T"] = trace.records.back().energy;
  j["da_norm_sq"] = init.da_norm_sq;
  j["max_step_residual"] = stats.max_step_residual;
  j["cumulative_residual"] = stats.cumulative_residual;
  j["max_increase"] = stats.max_increase;
  write_json(j, output_path(cfg, "summary.json"));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_eigs(const RunConfig& cfg) {
  GeneratorSystem sys(build_mesh(cfg), cfg.mu);
  auto pairs = eig_ODeltaR(sys, cfg.eig_count);
  std::ofstream out = open_output(output_path(cfg, "eigs.csv"));
  out << "n,mu,residual\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << i + 1 << "," << pairs[i].mu() << "," << pairs[i].residual << "\n";
  }
  return 0;
}

std::vector<double> sweep_frequencies(const GeneratorSystem& sys, const RunConfig& cfg) {
  if (cfg.beta_min || cfg.beta_max) {
    if (!cfg.beta_min || !cfg.beta_max) throw ArgumentError("set both beta_min and beta_max");
    if (!(*cfg.beta_min > 0.0 && *cfg.beta_max > *cfg.beta_min)) {
      throw ArgumentError("sweep needs 0 < beta_min < beta_max");
    }
    std::vector<double> b(cfg.sweep_count);
    double lo = std::log(*cfg.beta_min), hi = std::log(*cfg.beta_max);
    for (int i = 0; i < cfg.sweep_count; ++i) {
      b[i] = std::exp(lo + (hi - lo) * i / (cfg.sweep_count - 1));
    }
    return b;
  }
  return default_sweep(eig_ODeltaR(sys, cfg.eig_count), sys.mesh().h(), cfg.sweep_count);
}

int cmd_resolvent_sweep(const RunConfig& cfg) {
  GeneratorSystem sys(build_mesh(cfg), cfg.mu);
  std::ofstream out = open_output(output_path(cfg, "resolvent.csv"));
  out << "beta,resnorm\n";
  for (double b : sweep_frequencies(sys, cfg)) {
    out << b << "," << resolvent_norm(sys, b) << "\n" << std::flush;
  }
  return 0;
}

int cmd_witness(const RunConfig& cfg) {
  GeneratorSystem sys(build_mesh(cfg), cfg.mu);
  auto pts = witness(eig_ODeltaR(sys, cfg.eig_count), sys);
  std::ofstream out = open_output(output_path(cfg, "witness.csv"));
  out << "mu,U_norm,F_norm,residual\n";
  int skipped = 0;
  for (const auto& p : pts) {
    if (!p.resolved) {
      ++skipped;
      continue;
    }
    out << p.mu << "," << p.U_norm << "," << p.F_norm << "," << p.residual << "\n";
  }
  if (skipped > 0) std::cerr << skipped << " unresolved frequencies omitted\n";
  return 0;
}

int cmd_decay_fit(const RunConfig& cfg, std::string trace_path, std::optional<double> da_norm_sq,
                  std::optional<double> t_min, std::optional<double> t_max) {
  if (trace_path.empty()) trace_path = (fs::path(cfg.output_dir) / "energy.csv").string();
  if (!fs::exists(trace_path)) throw UsageError("cannot open trace " + trace_path);
  if (!da_norm_sq) {
    fs::path summary = fs::path(trace_path).parent_path() / "summary.json";
    std::ifstream in(summary);
    if (!in) throw UsageError("pass --da-norm-sq or provide " + summary.string());
    da_norm_sq = json::parse(in).at("da_norm_sq").get<double>();
  }
  if (t_min.has_value() != t_max.has_value()) throw UsageError("set both --t-min and --t-max");
  std::optional<std::pair<double, double>> window;
  if (t_min) window = std::make_pair(*t_min, *t_max);
  DecayReport r = decay_fit(EnergyTrace::read_csv(trace_path), *da_norm_sq, window);
  json j;
  j["loglog_slope"] = r.loglog_slope;
  j["loglog_intercept"] = r.loglog_intercept;
  j["sup_tE"] = r.sup_tE;
  j["sup_t"] = r.sup_t;
  j["C_over_dAnorm"] = r.C_over_dAnorm;
  j["exp_rate"] = r.exp_rate;
  j["exp_fit_rms"] = r.exp_fit_rms;
  j["poly_fit_rms"] = r.poly_fit_rms;
  j["tE_trend"] = r.tE_trend;
  j["tE_start"] = r.tE_start;
  j["t_min"] = r.t_min;
  j["t_max"] = r.t_max;
  j["samples"] = r.samples;
  j["truncated"] = r.truncated;
  write_json(j, output_path(cfg, "decay.json"));
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(17);
  CLI::App app{"Wave-plate transmission problem: meshes, geometry checks, simulation and spectral probes"};
  app.require_subcommand(1);

  Common common;
  bool strict = false;
  std::string trace_path;
  std::optional<double> da_norm_sq, t_min, t_max;

  auto* mesh_gen = app.add_subcommand("mesh-gen", "write the configured mesh to mesh.txt");
  auto* check = app.add_subcommand("check-geometry", "multiplier and corner-angle checks as JSON");
  auto* simulate = app.add_subcommand("simulate", "integrate in time, writing energy.csv and summary.json");
  simulate->add_flag("--strict", strict, "refuse to run when the geometry checks fail");
  auto* eigs = app.add_subcommand("eigs", "smallest eigenpairs, written to eigs.csv");
  auto* sweep = app.add_subcommand("resolvent-sweep", "resolvent norms, written to resolvent.csv");
  auto* wit = app.add_subcommand("witness", "witness sequence, written to witness.csv");
  auto* decay = app.add_subcommand("decay-fit", "fit decay laws to an energy trace");
  decay->add_option("--trace", trace_path, "energy CSV (default <output-dir>/energy.csv)");
  decay->add_option("--da-norm-sq", da_norm_sq, "||U0||^2 in the graph norm (default from summary.json)");
  decay->add_option("--t-min", t_min, "start of the fit window");
  decay->add_option("--t-max", t_max, "end of the fit window");
  for (auto* sub : {mesh_gen, check, simulate, eigs, sweep, wit, decay}) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  RunConfig cfg;
  try {
    threads_from_environment();
    cfg = resolve(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*mesh_gen) return cmd_mesh_gen(cfg);
    if (*check) return cmd_check_geometry(cfg);
    if (*simulate) return cmd_simulate(cfg, strict);
    if (*eigs) return cmd_eigs(cfg);
    if (*sweep) return cmd_resolvent_sweep(cfg);
    if (*wit) return cmd_witness(cfg);
    return cmd_decay_fit(cfg, trace_path, da_norm_sq, t_min, t_max);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}
