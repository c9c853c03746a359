#include "waveplate/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(v.substr(used)) != "" || !std::isfinite(x)) {
    throw ArgumentError("setting '" + key + "': '" + v + "' is not a finite number");
  }
  return x;
}

const std::set<std::string>& keys() {
  static const std::set<std::string> k{
      "mesh",  "n",     "alpha1_deg", "alpha2_deg", "x0",        "mu",          "omega0_deg",
      "dt",    "T",     "stride",     "seed",       "smoothing", "eig_count",   "sweep_count",
      "beta_min", "beta_max", "output_dir"};
  return k;
}

std::string format(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

Settings Settings::parse(std::istream& in, const std::string& origin) {
  Settings s;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError(origin + ":" + std::to_string(no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ArgumentError(origin + ":" + std::to_string(no) + ": empty key");
    s.values_[key] = value;
  }
  return s;
}

Settings Settings::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file " + path);
  return parse(in, path);
}

std::string Settings::text(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::optional<double> Settings::number(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return parse_number(key, it->second);
}

double Settings::number(const std::string& key, double fallback) const {
  return number(key).value_or(fallback);
}

int Settings::integer(const std::string& key, int fallback) const {
  auto v = number(key);
  if (!v) return fallback;
  if (*v != std::floor(*v) || std::abs(*v) > 2e9) {
    throw ArgumentError("setting '" + key + "' must be an integer");
  }
  return static_cast<int>(*v);
}

bool known_config_key(const std::string& key) { return keys().count(key) > 0; }

RunConfig RunConfig::from_settings(const Settings& s, const std::string& base_dir) {
  for (const auto& [k, v] : s.values()) {
    if (!known_config_key(k)) throw ArgumentError("unknown setting '" + k + "'");
  }
  RunConfig c;
  c.base_dir = base_dir;
  c.mesh = s.text("mesh", c.mesh);
  c.n = s.integer("n", c.n);
  c.alpha1_deg = s.number("alpha1_deg", c.alpha1_deg);
  c.alpha2_deg = s.number("alpha2_deg", c.alpha2_deg);
  if (s.has("x0")) {
    std::string v = s.text("x0", "");
    auto comma = v.find(',');
    if (comma == std::string::npos) throw ArgumentError("setting 'x0' must read 'x, y'");
    c.x0 = {parse_number("x0", trim(v.substr(0, comma))), parse_number("x0", trim(v.substr(comma + 1)))};
  }
  c.mu = s.number("mu", c.mu);
  c.omega0_deg = s.number("omega0_deg");
  c.dt = s.number("dt");
  c.T = s.number("T", c.T);
  c.stride = s.integer("stride", c.stride);
  int seed = s.integer("seed", static_cast<int>(c.seed));
  if (seed < 0) throw ArgumentError("setting 'seed' must be non-negative");
  c.seed = static_cast<unsigned>(seed);
  c.smoothing = s.integer("smoothing", c.smoothing);
  c.eig_count = s.integer("eig_count", c.eig_count);
  c.sweep_count = s.integer("sweep_count", c.sweep_count);
  c.beta_min = s.number("beta_min");
  c.beta_max = s.number("beta_max");
  c.output_dir = s.text("output_dir", c.output_dir);

  if (!(c.mu > 0.0 && c.mu < 0.5)) throw ArgumentError("mu must lie in (0, 1/2)");
  if (c.dt && !(*c.dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(c.T > 0.0)) throw ArgumentError("T must be positive");
  if (c.stride < 1) throw ArgumentError("stride must be at least 1");
  if (c.smoothing < 0) throw ArgumentError("smoothing must be non-negative");
  if (c.n < 1) throw ArgumentError("n must be at least 1");
  if (c.eig_count < 2) throw ArgumentError("eig_count must be at least 2");
  if (c.sweep_count < 4) throw ArgumentError("sweep_count must be at least 4");
  if (c.mesh != "rect" && c.mesh != "lens") {
    std::filesystem::path p(c.mesh);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    if (!std::filesystem::exists(p)) throw ArgumentError("mesh file not found: " + p.string());
  }
  return c;
}

Settings RunConfig::to_settings() const {
  Settings s;
  s.set("mesh", mesh);
  s.set("n", std::to_string(n));
  s.set("alpha1_deg", format(alpha1_deg));
  s.set("alpha2_deg", format(alpha2_deg));
  s.set("x0", format(x0.x) + ", " + format(x0.y));
  s.set("mu", format(mu));
  if (omega0_deg) s.set("omega0_deg", format(*omega0_deg));
  if (dt) s.set("dt", format(*dt));
  s.set("T", format(T));
  s.set("stride", std::to_string(stride));
  s.set("seed", std::to_string(seed));
  s.set("smoothing", std::to_string(smoothing));
  s.set("eig_count", std::to_string(eig_count));
  s.set("sweep_count", std::to_string(sweep_count));
  if (beta_min) s.set("beta_min", format(*beta_min));
  if (beta_max) s.set("beta_max", format(*beta_max));
  s.set("output_dir", output_dir);
  return s;
}

TriMesh build_mesh(const RunConfig& cfg) {
  constexpr double deg = std::numbers::pi / 180.0;
  if (cfg.mesh == "rect") return gen_rect_transmission(cfg.n);
  if (cfg.mesh == "lens") return gen_lens(cfg.alpha1_deg * deg, cfg.alpha2_deg * deg, cfg.n);
  std::filesystem::path p(cfg.mesh);
  if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
  return load_mesh(p.string());
}

InitialData initial_data(const GeneratorSystem& sys, const RunConfig& cfg) {
  InitialData d;
  d.u0 = sys.project_means(random_state(sys, cfg.seed));
  for (int k = 0; k < cfg.smoothing; ++k) {
    SmoothData s = smooth_initial_data(sys, d.u0);
    d.u0 = std::move(s.u0);
    d.residual = std::max(d.residual, s.residual);
  }
  d.da_norm_sq = sys.h_norm_sq(d.u0) + sys.h_norm_sq(sys.apply_generator(d.u0));
  return d;
}

}  // namespace waveplate
