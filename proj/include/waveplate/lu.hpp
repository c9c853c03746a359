#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "waveplate/sparse.hpp"

namespace waveplate {

// Reverse Cuthill-McKee order of the symmetrised pattern of a square matrix.
// order[k] is the original index placed at position k.
template <class T>
std::vector<int> reverse_cuthill_mckee(const SparseMatrix<T>& a);
std::vector<int> reverse_cuthill_mckee(const std::vector<std::vector<int>>& adjacency);
int bandwidth(const std::vector<std::vector<int>>& adjacency, const std::vector<int>& order);

// Column ordering functor for Eigen::SparseLU.
template <typename StorageIndex>
class RcmOrdering {
 public:
  using PermutationType = Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, StorageIndex>;

  template <typename MatrixType>
  void operator()(const MatrixType& mat, PermutationType& perm) {
    const Eigen::Index n = mat.cols();
    std::vector<std::vector<int>> adj(n);
    for (Eigen::Index j = 0; j < mat.outerSize(); ++j) {
      for (typename MatrixType::InnerIterator it(mat, j); it; ++it) {
        int r = static_cast<int>(it.index()), c = static_cast<int>(j);
        if (r == c) continue;
        adj[r].push_back(c);
        adj[c].push_back(r);
      }
    }
    std::vector<int> order = reverse_cuthill_mckee(adj);
    perm.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) perm.indices()(order[k]) = static_cast<StorageIndex>(k);
  }
};

// Sparse LU with partial pivoting. Construction throws SingularityError when
// a pivot falls below 1e-14 * ||A||_inf.
template <class T>
class Factorization {
 public:
  explicit Factorization(const SparseMatrix<T>& a);

  int size() const { return n_; }
  Vec<T> solve(const Vec<T>& b) const;
  // Solves A^H x = b.
  Vec<T> solve_adjoint(const Vec<T>& b) const;
  double min_pivot() const { return min_pivot_; }
  double matrix_norm() const { return norm_; }

 private:
  using Solver = Eigen::SparseLU<Eigen::SparseMatrix<T>, RcmOrdering<int>>;
  int n_ = 0;
  double norm_ = 0.0;
  double min_pivot_ = 0.0;
  std::unique_ptr<Solver> lu_;
};

template <class T>
Vec<T> lu_solve(const SparseMatrix<T>& a, const Vec<T>& b) {
  return Factorization<T>(a).solve(b);
}

}  // namespace waveplate
