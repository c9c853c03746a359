#include "waveplate/sparse.hpp"

#include <algorithm>
#include <numeric>

#include "waveplate/errors.hpp"

namespace waveplate {

template <class T>
SparseMatrix<T> SparseMatrix<T>::from_triplets(int rows, int cols,
                                               std::span<const Triplet<T>> entries) {
  if (rows < 0 || cols < 0) throw ArgumentError("negative matrix dimension");
  SparseMatrix out(rows, cols);
  std::vector<int> count(rows + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw ArgumentError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                          ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " matrix");
    }
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<int> cols_tmp(entries.size());
  std::vector<T> vals_tmp(entries.size());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (const auto& t : entries) {
    int k = fill[t.row]++;
    cols_tmp[k] = t.col;
    vals_tmp[k] = t.value;
  }
  std::vector<int> order;
  out.col_idx_.reserve(entries.size());
  out.values_.reserve(entries.size());
  for (int r = 0; r < rows; ++r) {
    order.resize(count[r + 1] - count[r]);
    std::iota(order.begin(), order.end(), count[r]);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cols_tmp[a] < cols_tmp[b]; });
    std::size_t i = 0;
    while (i < order.size()) {
      int c = cols_tmp[order[i]];
      T v{};
      while (i < order.size() && cols_tmp[order[i]] == c) v += vals_tmp[order[i++]];
      if (v != T{}) {
        out.col_idx_.push_back(c);
        out.values_.push_back(v);
      }
    }
    out.row_ptr_[r + 1] = static_cast<int>(out.col_idx_.size());
  }
  return out;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::identity(int n) {
  return diagonal(Vec<T>::Ones(n));
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::diagonal(const Vec<T>& d) {
  std::vector<Triplet<T>> t;
  for (int i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  int n = static_cast<int>(d.size());
  return from_triplets(n, n, t);
}

template <class T>
T SparseMatrix<T>::coeff(int r, int c) const {
  auto b = col_idx_.begin() + row_ptr_[r];
  auto e = col_idx_.begin() + row_ptr_[r + 1];
  auto it = std::lower_bound(b, e, c);
  if (it != e && *it == c) return values_[it - col_idx_.begin()];
  return T{};
}

template <class T>
Vec<T> SparseMatrix<T>::apply(const Vec<T>& x) const {
  if (x.size() != cols_) throw ArgumentError("matrix-vector size mismatch");
  return apply_to<T>(x);
}

template <class T>
Vec<T> SparseMatrix<T>::apply_transpose(const Vec<T>& x) const {
  if (x.size() != rows_) throw ArgumentError("matrix-vector size mismatch");
  Vec<T> y = Vec<T>::Zero(cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * x[r];
  }
  return y;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::transpose() const {
  std::vector<Triplet<T>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({col_idx_[k], r, values_[k]});
  }
  return from_triplets(cols_, rows_, t);
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::adjoint() const {
  SparseMatrix out = transpose();
  if constexpr (!std::is_same_v<T, double>) {
    for (auto& v : out.values_) v = std::conj(v);
  }
  return out;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::scaled(T s) const {
  SparseMatrix out = *this;
  for (auto& v : out.values_) v *= s;
  return out;
}

template <class T>
double SparseMatrix<T>::norm_inf() const {
  double best = 0.0;
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    best = std::max(best, s);
  }
  return best;
}

template <class T>
double SparseMatrix<T>::norm_fro() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

template <class T>
double SparseMatrix<T>::max_asymmetry() const {
  if (rows_ != cols_) throw ArgumentError("asymmetry of a non-square matrix");
  double worst = 0.0;
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], r)));
    }
  }
  double n = norm_inf();
  return n > 0 ? worst / n : worst;
}

template <class T>
Eigen::SparseMatrix<T> SparseMatrix<T>::to_eigen() const {
  std::vector<Eigen::Triplet<T>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.emplace_back(r, col_idx_[k], values_[k]);
  }
  Eigen::SparseMatrix<T> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::from_eigen(const Eigen::SparseMatrix<T>& m) {
  std::vector<Triplet<T>> t;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (typename Eigen::SparseMatrix<T>::InnerIterator it(m, k); it; ++it) {
      t.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
    }
  }
  return from_triplets(static_cast<int>(m.rows()), static_cast<int>(m.cols()), t);
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> SparseMatrix<T>::to_dense() const {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) = values_[k];
  }
  return d;
}

template class SparseMatrix<double>;
template class SparseMatrix<cplx>;

SparseMatrix<double> multiply(const SparseMatrix<double>& a, const SparseMatrix<double>& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matrix product size mismatch");
  Eigen::SparseMatrix<double> p = a.to_eigen() * b.to_eigen();
  return SparseMatrix<double>::from_eigen(p);
}

SparseMatrix<double> add(const SparseMatrix<double>& a, const SparseMatrix<double>& b,
                         double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("matrix sum size mismatch");
  TripletList<double> t;
  t.add_block(a, 0, 0, alpha);
  t.add_block(b, 0, 0, beta);
  return t.build(a.rows(), a.cols());
}

SparseMatrix<double> congruence(const SparseMatrix<double>& p, const SparseMatrix<double>& a) {
  return multiply(p.transpose(), multiply(a, p));
}

}  // namespace waveplate
