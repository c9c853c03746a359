#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <span>
#include <vector>

namespace waveplate {

using cplx = std::complex<double>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using VecD = Vec<double>;
using VecC = Vec<cplx>;

template <class T>
struct Triplet {
  int row = 0;
  int col = 0;
  T value{};
};

// Compressed sparse row matrix. Column indices are sorted within each row and
// no explicit zeros are stored.
template <class T>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet<T>> entries);
  static SparseMatrix identity(int n);
  static SparseMatrix diagonal(const Vec<T>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<T>& values() const { return values_; }

  T coeff(int r, int c) const;
  Vec<T> apply(const Vec<T>& x) const;
  template <class S>
  Vec<S> apply_to(const Vec<S>& x) const;
  Vec<T> apply_transpose(const Vec<T>& x) const;

  SparseMatrix transpose() const;
  SparseMatrix adjoint() const;
  SparseMatrix scaled(T s) const;
  double norm_inf() const;
  double norm_fro() const;
  // max |a_ij - a_ji| over stored entries, relative to norm_inf.
  double max_asymmetry() const;

  Eigen::SparseMatrix<T> to_eigen() const;
  static SparseMatrix from_eigen(const Eigen::SparseMatrix<T>& m);
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense() const;

  template <class S>
  SparseMatrix<S> cast() const;

 private:
  template <class>
  friend class SparseMatrix;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<T> values_;
};

template <class T>
SparseMatrix<T> csr_from_triplets(int n, std::span<const Triplet<T>> entries) {
  return SparseMatrix<T>::from_triplets(n, n, entries);
}

// Growable triplet list with block helpers used by assembly.
template <class T>
class TripletList {
 public:
  void add(int r, int c, T v) {
    if (v != T{}) data_.push_back({r, c, v});
  }
  template <class S>
  void add_block(const SparseMatrix<S>& m, int row0, int col0, T scale = T{1});
  template <class S>
  void add_block_transpose(const SparseMatrix<S>& m, int row0, int col0, T scale = T{1});
  SparseMatrix<T> build(int rows, int cols) const {
    return SparseMatrix<T>::from_triplets(rows, cols, std::span<const Triplet<T>>(data_));
  }
  std::size_t size() const { return data_.size(); }

 private:
  std::vector<Triplet<T>> data_;
};

SparseMatrix<double> multiply(const SparseMatrix<double>& a, const SparseMatrix<double>& b);
SparseMatrix<double> add(const SparseMatrix<double>& a, const SparseMatrix<double>& b,
                         double alpha = 1.0, double beta = 1.0);
// P^T A P
SparseMatrix<double> congruence(const SparseMatrix<double>& p, const SparseMatrix<double>& a);

// ------------------------------------------------------------------ inline

template <class T>
template <class S>
Vec<S> SparseMatrix<T>::apply_to(const Vec<S>& x) const {
  Vec<S> y = Vec<S>::Zero(rows_);
  for (int r = 0; r < rows_; ++r) {
    S s{};
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
  return y;
}

template <class T>
template <class S>
SparseMatrix<S> SparseMatrix<T>::cast() const {
  SparseMatrix<S> out(rows_, cols_);
  out.row_ptr_ = row_ptr_;
  out.col_idx_ = col_idx_;
  out.values_.assign(values_.begin(), values_.end());
  return out;
}

template <class T>
template <class S>
void TripletList<T>::add_block(const SparseMatrix<S>& m, int row0, int col0, T scale) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      add(row0 + r, col0 + m.col_idx()[k], scale * T(m.values()[k]));
    }
  }
}

template <class T>
template <class S>
void TripletList<T>::add_block_transpose(const SparseMatrix<S>& m, int row0, int col0, T scale) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      add(row0 + m.col_idx()[k], col0 + r, scale * T(m.values()[k]));
    }
  }
}

}  // namespace waveplate
