#include "waveplate/eigensolvers.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "waveplate/lu.hpp"

namespace waveplate {

SymEigResult sym_eig_smallest(const SparseMatrix<double>& a, const SparseMatrix<double>& m, int k,
                              const EigenOptions& opts) {
  const int n = a.rows();
  if (a.cols() != n || m.rows() != n || m.cols() != n) {
    throw ArgumentError("eigenproblem matrices must be square and of equal size");
  }
  if (k < 1 || k > n) throw ArgumentError("requested eigenpair count out of range");
  if (a.max_asymmetry() > 1e-12) throw ArgumentError("stiffness matrix is not symmetric");
  if (m.max_asymmetry() > 1e-12) throw ArgumentError("mass matrix is not symmetric");

  const double anorm = a.norm_inf();
  const double mnorm = m.norm_inf();
  if (mnorm == 0.0) throw ArgumentError("mass matrix is zero");
  Eigen::SparseMatrix<double> ae = a.to_eigen();
  Eigen::SparseMatrix<double> me = m.to_eigen();

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  double sigma = 0.0;
  auto try_shift = [&](double s) {
    Eigen::SparseMatrix<double> shifted = ae - s * me;
    llt.compute(shifted);
    return llt.info() == Eigen::Success;
  };
  if (opts.shift) {
    sigma = *opts.shift;
    if (!try_shift(sigma)) throw ArgumentError("shifted matrix A - sigma M is not positive definite");
  } else {
    // a Cholesky success certifies that sigma lies below the spectrum
    double step = 1e-6 * std::max(anorm / mnorm, 1e-300);
    sigma = -step;
    int tries = 0;
    while (!try_shift(sigma)) {
      step *= 8.0;
      sigma = -step;
      if (++tries > 60) throw ConvergenceError("no shift below the spectrum was found", sigma);
    }
  }

  LinearMap<double> op = [&](const VecD& x) -> VecD {
    VecD y = llt.solve(m.apply(x));
    return y;
  };
  LinearMap<double> gram = [&](const VecD& x) -> VecD { return m.apply(x); };
  LanczosOptions lo;
  lo.tol = 1e-13;
  lo.max_steps = opts.max_steps;
  lo.seed = opts.seed;
  auto lz = lanczos_largest<double>(n, op, gram, k, lo);

  SymEigResult res;
  res.shift = sigma;
  res.vectors = Dense<double>(n, k);
  // descending theta gives ascending lambda
  for (int i = 0; i < k; ++i) {
    res.values.push_back(sigma + 1.0 / lz.values[i]);
    res.vectors.col(i) = lz.vectors.col(i);
  }
  for (int c = 0; c < k; ++c) {
    VecD x = res.vectors.col(c);
    for (int step = 0; step < opts.refine_steps; ++step) {
      // shift just below the Rayleigh quotient; the near-singular solve
      // amplifies the wanted direction
      double rq = x.dot(a.apply(x)) / x.dot(m.apply(x));
      double sig = rq - 1e-9 * std::max(std::abs(rq), anorm / mnorm * 1e-6);
      Eigen::SparseMatrix<double> shifted = ae - sig * me;
      shifted.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(shifted);
      if (lu.info() != Eigen::Success) break;
      VecD y = lu.solve(m.apply(x));
      if (!y.allFinite() || y.norm() == 0.0) break;
      x = y / y.norm();
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < c; ++j) {
        VecD xj = res.vectors.col(j);
        x -= xj.dot(m.apply(x)) * xj;
      }
    }
    x /= std::sqrt(x.dot(m.apply(x)));
    res.vectors.col(c) = x;
    double lambda = x.dot(a.apply(x));
    res.values[c] = lambda;
    double r = (a.apply(x) - lambda * m.apply(x)).norm() / (std::max(anorm, 1e-300) * x.norm());
    res.residuals.push_back(r);
    if (r > opts.tol) {
      throw ConvergenceError("eigenpair " + std::to_string(c) + " residual " + std::to_string(r) +
                                 " above tolerance",
                             r);
    }
  }
  return res;
}

SingularValue smallest_singular_in_norm(const SparseMatrix<cplx>& c, const SparseMatrix<double>& g,
                                        double tol) {
  const int n = c.rows();
  if (c.cols() != n || g.rows() != n || g.cols() != n) throw ArgumentError("size mismatch");
  SingularValue out;
  std::unique_ptr<Factorization<cplx>> lu;
  try {
    lu = std::make_unique<Factorization<cplx>>(c);
  } catch (const SingularityError&) {
    out.singular = true;
    return out;
  }
  Factorization<double> glu(g);
  SparseMatrix<cplx> gc = g.cast<cplx>();
  // largest eigenvalue of G^{-1} C^{-H} G C^{-1}
  LinearMap<cplx> op = [&](const VecC& x) -> VecC {
    VecC y = lu->solve(x);
    y = lu->solve_adjoint(gc.apply(y));
    VecD re = glu.solve(y.real());
    VecD im = glu.solve(y.imag());
    VecC z(n);
    z.real() = re;
    z.imag() = im;
    return z;
  };
  LinearMap<cplx> gram = [&](const VecC& x) -> VecC { return gc.apply(x); };
  LanczosOptions lo;
  lo.tol = tol;
  auto lz = lanczos_largest<cplx>(n, op, gram, 1, lo);
  out.steps = lz.steps;
  out.sigma_min = 1.0 / std::sqrt(lz.values[0]);
  return out;
}

}  // namespace waveplate
