#include "waveplate/analysis.hpp"

#include <cmath>
#include <vector>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

DecayReport decay_fit(const EnergyTrace& trace, double da_norm_sq,
                      std::optional<std::pair<double, double>> window) {
  if (trace.records.empty()) throw ArgumentError("energy trace is empty");
  if (!(da_norm_sq > 0.0) || !std::isfinite(da_norm_sq)) {
    throw ArgumentError("D(A) norm must be positive");
  }
  const double T = trace.records.back().t;
  auto [lo, hi] = window.value_or(std::pair{0.25 * T, T});
  if (!(lo < hi)) throw ArgumentError("decay window is empty");
  const double e0 = trace.records.front().energy;
  DecayReport r;
  std::vector<double> t, logt, loge, g;
  for (const auto& rec : trace.records) {
    if (rec.t < lo || rec.t > hi || rec.t <= 0.0) continue;
    if (!(rec.energy >= 1e-14 * e0) || !(rec.energy > 0.0)) {
      r.truncated = true;
      break;
    }
    t.push_back(rec.t);
    logt.push_back(std::log(rec.t));
    loge.push_back(std::log(rec.energy));
    g.push_back(rec.t * rec.energy / da_norm_sq);
    if (rec.t * rec.energy > r.sup_tE) {
      r.sup_tE = rec.t * rec.energy;
      r.sup_t = rec.t;
    }
  }
  if (t.size() < 2) throw ArgumentError("decay window holds fewer than two usable samples");
  r.samples = static_cast<int>(t.size());
  r.t_min = t.front();
  r.t_max = t.back();
  LineFit poly = least_squares(logt, loge);
  LineFit expo = least_squares(t, loge);
  LineFit trend = least_squares(t, g);
  r.loglog_slope = poly.slope;
  r.loglog_intercept = poly.intercept;
  r.poly_fit_rms = poly.rms;
  r.exp_rate = -expo.slope;
  r.exp_fit_rms = expo.rms;
  r.C_over_dAnorm = r.sup_tE / da_norm_sq;
  r.tE_trend = trend.slope;
  r.tE_start = g.front();
  return r;
}

}  // namespace waveplate
