#pragma once

#include <optional>
#include <utility>

#include "waveplate/dynamics.hpp"

namespace waveplate {

struct DecayReport {
  double loglog_slope = 0.0;      // log E against log t
  double loglog_intercept = 0.0;
  double sup_tE = 0.0;            // max of t E(t) over the window samples
  double sup_t = 0.0;             // where it is attained
  double C_over_dAnorm = 0.0;     // sup_tE / ||U0||^2_D(A)
  double exp_rate = 0.0;          // -slope of log E against t
  double exp_fit_rms = 0.0;
  double poly_fit_rms = 0.0;
  // linear fit of t E(t) / ||U0||^2_D(A) against t, and its value at t_min
  double tE_trend = 0.0;
  double tE_start = 0.0;
  double t_min = 0.0, t_max = 0.0;
  int samples = 0;
  bool truncated = false;  // window cut where E fell below 1e-14 E(0)
};

// Fit decay laws over [t_min, t_max]; the default window is [T/4, T].
DecayReport decay_fit(const EnergyTrace& trace, double da_norm_sq,
                      std::optional<std::pair<double, double>> window = std::nullopt);

}  // namespace waveplate
