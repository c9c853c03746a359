#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "waveplate/errors.hpp"
#include "waveplate/sparse.hpp"

namespace waveplate {

template <class T>
using Dense = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using LinearMap = std::function<Vec<T>(const Vec<T>&)>;

struct LanczosOptions {
  double tol = 1e-12;  // relative Ritz residual estimate
  int max_steps = 0;   // 0: dimension of the space
  unsigned seed = 12345;
};

template <class T>
struct LanczosResult {
  std::vector<double> values;  // descending
  Dense<T> vectors;            // B-orthonormal columns
  std::vector<double> estimates;
  int steps = 0;
};

// Largest eigenpairs of an operator that is self-adjoint in the inner product
// <x, y> = x^H B y, with B positive definite. Full reorthogonalisation; the
// Krylov space is restarted with a fresh vector when it becomes invariant.
template <class T>
LanczosResult<T> lanczos_largest(int n, const LinearMap<T>& op, const LinearMap<T>& gram, int k,
                                 const LanczosOptions& opts = {});

struct EigenOptions {
  std::optional<double> shift;  // default: chosen below the spectrum
  double tol = 1e-8;            // ||Ax - lambda Mx|| <= tol ||A|| ||x||
  int max_steps = 0;
  unsigned seed = 12345;
  // shifted inverse-iteration sweeps applied to each Ritz pair
  int refine_steps = 0;
};

struct SymEigResult {
  std::vector<double> values;  // ascending
  Dense<double> vectors;       // M-orthonormal columns
  std::vector<double> residuals;
  double shift = 0.0;
};

// k smallest eigenpairs of A x = lambda M x, A symmetric and M symmetric
// positive definite, by shift-invert Lanczos.
SymEigResult sym_eig_smallest(const SparseMatrix<double>& a, const SparseMatrix<double>& m, int k,
                              const EigenOptions& opts = {});

struct SingularValue {
  double sigma_min = 0.0;
  bool singular = false;
  int steps = 0;
};

// Smallest singular value of C measured in the G-norm:
// min ||C x||_G / ||x||_G, with G symmetric positive definite.
SingularValue smallest_singular_in_norm(const SparseMatrix<cplx>& c, const SparseMatrix<double>& g,
                                        double tol = 1e-10);

// ------------------------------------------------------------------ template

namespace detail {

template <class T>
double real_part(T v) {
  return std::real(v);
}

template <class T>
Vec<T> random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Vec<T> v(n);
  for (int i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<T, double>) {
      v[i] = dist(rng);
    } else {
      v[i] = T(dist(rng), dist(rng));
    }
  }
  return v;
}

}  // namespace detail

template <class T>
LanczosResult<T> lanczos_largest(int n, const LinearMap<T>& op, const LinearMap<T>& gram, int k,
                                 const LanczosOptions& opts) {
  if (n <= 0) throw ArgumentError("Lanczos on an empty space");
  if (k < 1 || k > n) throw ArgumentError("requested eigenpair count out of range");
  const int max_steps = opts.max_steps > 0 ? std::min(opts.max_steps, n) : n;
  std::mt19937_64 rng(opts.seed);

  std::vector<Vec<T>> q, bq;
  std::vector<double> alpha, beta;  // beta[j] couples j and j+1

  // orthogonalise v against the first j basis vectors, twice
  auto orthogonalise = [&](Vec<T>& v, int j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        T c = bq[i].dot(v);
        v -= c * q[i];
      }
    }
  };
  auto start_vector = [&](int j) -> bool {
    for (int attempt = 0; attempt < 5; ++attempt) {
      Vec<T> v = detail::random_vector<T>(n, rng);
      orthogonalise(v, j);
      Vec<T> bv = gram(v);
      double nrm = std::sqrt(std::max(0.0, detail::real_part(v.dot(bv))));
      if (nrm > 1e-10) {
        q.push_back(v / nrm);
        bq.push_back(bv / nrm);
        return true;
      }
    }
    return false;
  };

  LanczosResult<T> res;
  if (!start_vector(0)) throw ConvergenceError("Lanczos could not build a start vector", 0.0);

  Eigen::SelfAdjointEigenSolver<Dense<double>> tri;
  int steps = 0;
  double scale = 0.0;
  for (int j = 0; j < max_steps; ++j) {
    Vec<T> w = op(q[j]);
    double a = detail::real_part(bq[j].dot(w));
    alpha.push_back(a);
    w -= a * q[j];
    if (j > 0) w -= beta[j - 1] * q[j - 1];
    orthogonalise(w, j + 1);
    Vec<T> bw = gram(w);
    double b = std::sqrt(std::max(0.0, detail::real_part(w.dot(bw))));
    steps = j + 1;

    Dense<double> t = Dense<double>::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    scale = std::max(scale, std::abs(a));
    bool invariant = b <= 1e-13 * std::max(scale, 1e-300);
    bool last = steps == max_steps;
    if (steps >= k && (invariant || last || steps % 5 == 0)) {
      tri.compute(t);
      const auto& theta = tri.eigenvalues();
      bool ok = true;
      double top = std::max(std::abs(theta(steps - 1)), std::abs(theta(0)));
      for (int i = 0; i < k; ++i) {
        int idx = steps - 1 - i;
        double est = invariant ? 0.0 : std::abs(b * tri.eigenvectors()(steps - 1, idx));
        if (est > opts.tol * std::max(std::abs(theta(idx)), 1e-8 * top)) ok = false;
      }
      if (ok || last) {
        if (!ok && steps < n) {
          throw ConvergenceError("Lanczos did not converge within the step limit", b);
        }
        res.steps = steps;
        res.vectors = Dense<T>(n, k);
        for (int i = 0; i < k; ++i) {
          int idx = steps - 1 - i;
          res.values.push_back(theta(idx));
          res.estimates.push_back(std::abs(b * tri.eigenvectors()(steps - 1, idx)));
          Vec<T> v = Vec<T>::Zero(n);
          for (int r = 0; r < steps; ++r) v += tri.eigenvectors()(r, idx) * q[r];
          res.vectors.col(i) = v;
        }
        return res;
      }
    }
    if (j + 1 == max_steps) break;
    if (invariant) {
      beta.push_back(0.0);
      if (!start_vector(j + 1)) break;
    } else {
      beta.push_back(b);
      q.push_back(w / b);
      bq.push_back(bw / b);
    }
  }
  throw ConvergenceError("Lanczos stopped before the requested eigenpairs converged", 0.0);
}

}  // namespace waveplate
