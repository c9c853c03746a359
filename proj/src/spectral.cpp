#include "waveplate/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

constexpr cplx kI{0.0, 1.0};

VecC complexify(const VecD& v) { return v.cast<cplx>(); }

}  // namespace

SparseMatrix<double> odr_stiffness(const GeneratorSystem& sys) {
  const FormSet& f = sys.forms();
  SparseMatrix<double> s = sys.KX();
  s = add(s, congruence(sys.T1X(), f.G1), 1.0, 1.0);
  s = add(s, congruence(sys.T2vX(), f.G2v), 1.0, 1.0);
  s = add(s, congruence(sys.T2nX(), f.G2n), 1.0, 1.0);
  return s;
}

std::vector<EigenPair> eig_ODeltaR(const GeneratorSystem& sys, int k, const EigenOptions& opts) {
  if (k < 1) throw ArgumentError("eigenpair count must be at least 1");
  if (k > sys.layout().n_x) throw ArgumentError("more eigenpairs requested than unknowns");
  SparseMatrix<double> s = odr_stiffness(sys);
  EigenOptions o = opts;
  o.refine_steps = std::max(o.refine_steps, 1);
  SymEigResult r = sym_eig_smallest(s, sys.MX(), k, o);
  std::vector<EigenPair> out;
  for (int i = 0; i < k; ++i) {
    EigenPair p;
    p.mu_sq = r.values[i];
    if (!(p.mu_sq > 0.0)) {
      throw ConvergenceError("non-positive eigenvalue " + std::to_string(p.mu_sq), r.residuals[i]);
    }
    p.x = r.vectors.col(i);
    p.x /= std::sqrt(p.x.dot(sys.MX().apply(p.x)));
    VecD sx = s.apply(p.x);
    p.residual = (sx - p.mu_sq * sys.MX().apply(p.x)).norm() / sx.norm();
    p.phi = sys.wave_part(p.x);
    p.psi = sys.plate_part(p.x);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<EigenPair> eig_ODeltaR(const TriMesh& mesh, double mu_poisson, int k,
                                   const EigenOptions& opts) {
  return eig_ODeltaR(GeneratorSystem(mesh, mu_poisson), k, opts);
}

bool resolved(double mu, double h) { return mu * h <= 1.0; }

WitnessState witness_state(const GeneratorSystem& sys, const EigenPair& pair) {
  const StateLayout& L = sys.layout();
  if (pair.x.size() != L.n_x) throw ArgumentError("eigenvector does not match the system");
  const cplx inv = 1.0 / (kI * pair.mu());
  VecC eta = inv * complexify(sys.T1X().apply(pair.x));
  VecC xi = inv * complexify(sys.T2nX().apply(pair.x));
  VecC zeta = inv * complexify(sys.T2vX().apply(pair.x));
  WitnessState w;
  w.U = VecC::Zero(L.size());
  w.F = VecC::Zero(L.size());
  w.U.segment(L.q(), L.n_x) = inv * complexify(pair.x);
  w.U.segment(L.p(), L.n_x) = complexify(pair.x);
  w.U.segment(L.eta(), L.n_eta) = eta;
  w.U.segment(L.xi(), L.n_xi) = xi;
  w.U.segment(L.zeta(), L.n_zeta) = zeta;
  w.F.segment(L.eta(), L.n_eta) = eta;
  w.F.segment(L.xi(), L.n_xi) = xi;
  w.F.segment(L.zeta(), L.n_zeta) = zeta;
  return w;
}

std::vector<WitnessPoint> witness(const std::vector<EigenPair>& pairs, const GeneratorSystem& sys) {
  std::vector<WitnessPoint> out;
  for (const auto& p : pairs) {
    WitnessState w = witness_state(sys, p);
    WitnessPoint pt;
    pt.mu = p.mu();
    pt.U_norm = std::sqrt(sys.h_norm_sq(w.U));
    pt.F_norm = std::sqrt(sys.h_norm_sq(w.F));
    VecC r = kI * pt.mu * w.U - sys.apply_generator(w.U) - w.F;
    pt.residual = std::sqrt(sys.h_norm_sq(r));
    VecC pr = kI * pt.mu * sys.E().apply_to<cplx>(w.U) - sys.B().apply_to<cplx>(w.U) -
              sys.E().apply_to<cplx>(w.F);
    pt.pencil_residual = pr.norm() / w.U.norm();
    pt.resolved = resolved(pt.mu, sys.mesh().h());
    out.push_back(pt);
  }
  return out;
}

double resolvent_norm(const GeneratorSystem& sys, double beta, double tol) {
  if (!std::isfinite(beta)) throw ArgumentError("frequency is not finite");
  if (std::abs(beta) < kDeflationRadius) {
    throw ArgumentError("resolvent norm needs a nonzero frequency");
  }
  ShiftedSolver solver(sys, kI * beta);
  const int n = sys.size();
  const SparseMatrix<double>& gram = sys.gram();
  const SparseMatrix<double>& completed = sys.completed_gram();
  // SPD but badly scaled (edge-dof masses are O(h^4)), so Cholesky rather than pivoted LU
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> clu(completed.to_eigen());
  if (clu.info() != Eigen::Success) throw SingularityError("completed Gram matrix is not positive definite", 0);
  SparseMatrix<double> et = sys.E().transpose();
  // M~^{-1} R^H M_H R with R = (i beta E - B)^{-1} E
  LinearMap<cplx> op = [&](const VecC& f) -> VecC {
    VecC u = solver.solve_pencil(sys.E().apply_to<cplx>(f));
    VecC v = et.apply_to<cplx>(solver.solve_pencil_adjoint(gram.apply_to<cplx>(u)));
    VecC z(n);
    z.real() = clu.solve(VecD(v.real()));
    z.imag() = clu.solve(VecD(v.imag()));
    return z;
  };
  LinearMap<cplx> g = [&](const VecC& x) -> VecC { return completed.apply_to<cplx>(x); };
  LanczosOptions lo;
  lo.tol = tol;
  auto res = lanczos_largest<cplx>(n, op, g, 1, lo);
  return std::sqrt(res.values[0]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ArgumentError("slope fit needs two or more matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

BtFit bt_exponent_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw ArgumentError("exponent fit needs at least 4 points");
  double lo = INFINITY, hi = 0.0;
  std::vector<double> x, y;
  for (auto [b, r] : points) {
    if (!(b > 0.0) || !(r > 0.0) || !std::isfinite(b) || !std::isfinite(r)) {
      throw ArgumentError("exponent fit needs positive finite frequencies and norms");
    }
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    x.push_back(std::log(b));
    y.push_back(std::log(r));
  }
  if (hi < 10.0 * lo * (1.0 - 1e-12)) throw ArgumentError("frequencies must span at least one decade");
  BtFit fit;
  fit.ell_hat = fit_slope(x, y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= x.size();
  fit.intercept = my - fit.ell_hat * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.ell_hat * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / x.size());
  return fit;
}

std::vector<double> default_sweep(const std::vector<EigenPair>& pairs, double h, int count) {
  if (pairs.size() < 2) throw ArgumentError("sweep needs at least two eigenfrequencies");
  if (count < 2) throw ArgumentError("sweep needs at least two frequencies");
  double lo = pairs[1].mu(), hi = lo;
  for (const auto& p : pairs) {
    if (resolved(p.mu(), h)) hi = std::max(hi, p.mu());
  }
  if (!(hi > lo)) throw ArgumentError("no resolved eigenfrequency above the second");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  }
  return out;
}

}  // namespace waveplate
