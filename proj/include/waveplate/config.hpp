#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "waveplate/mesh.hpp"
#include "waveplate/system.hpp"

namespace waveplate {

// Flat "key = value" settings; '#' starts a comment.
class Settings {
 public:
  static Settings parse(std::istream& in, const std::string& origin = "<input>");
  static Settings load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> number(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  // mesh source: "rect", "lens" or a mesh file path
  std::string mesh = "rect";
  int n = 8;
  double alpha1_deg = 90.0;
  double alpha2_deg = 60.0;
  Point2 x0{0.0, 0.5};
  double mu = 0.3;
  std::optional<double> omega0_deg;
  std::optional<double> dt;  // default min(1e-2, h/4)
  double T = 10.0;
  int stride = 10;
  unsigned seed = 42;
  int smoothing = 1;  // applications of (I - A_h)^{-1}; 0 disables
  int eig_count = 40;
  int sweep_count = 16;
  std::optional<double> beta_min, beta_max;
  std::string output_dir = ".";
  std::string base_dir = ".";  // relative mesh paths resolve against this

  static RunConfig from_settings(const Settings& s, const std::string& base_dir = ".");
  Settings to_settings() const;
};

// Keys understood by RunConfig, for validation of user input.
bool known_config_key(const std::string& key);

TriMesh build_mesh(const RunConfig& cfg);

struct InitialData {
  VecD u0;
  double da_norm_sq = 0.0;  // ||U0||^2 + ||A_h U0||^2
  double residual = 0.0;
};

// Seeded uniform entries in [-1, 1], mean projection, then `smoothing`
// resolvent applications.
InitialData initial_data(const GeneratorSystem& sys, const RunConfig& cfg);

}  // namespace waveplate
