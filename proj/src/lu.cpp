#include "waveplate/lu.hpp"

#include <algorithm>
#include <queue>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

// BFS levels from start within one component; returns the visit order.
std::vector<int> bfs_order(const std::vector<std::vector<int>>& adj, int start,
                           std::vector<int>& level, const std::vector<int>& degree) {
  std::vector<int> order{start};
  level[start] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    std::vector<int> next;
    for (int w : adj[v]) {
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end(), [&](int a, int b) { return degree[a] < degree[b]; });
    order.insert(order.end(), next.begin(), next.end());
  }
  return order;
}

}  // namespace

std::vector<int> reverse_cuthill_mckee(const std::vector<std::vector<int>>& input) {
  const int n = static_cast<int>(input.size());
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    adj[v] = input[v];
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    adj[v].erase(std::remove(adj[v].begin(), adj[v].end(), v), adj[v].end());
  }
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(adj[v].size());

  std::vector<int> result;
  result.reserve(n);
  std::vector<char> done(n, 0);
  std::vector<int> level(n, -1);
  for (int seed = 0; seed < n; ++seed) {
    if (done[seed]) continue;
    // pseudo-peripheral start: repeat BFS from the lowest-degree vertex of the last level
    int start = seed;
    int depth = -1;
    std::vector<int> order;
    for (int pass = 0; pass < 8; ++pass) {
      for (int v : order) level[v] = -1;
      level[start] = -1;
      order = bfs_order(adj, start, level, degree);
      int last = level[order.back()];
      if (last <= depth) break;
      depth = last;
      int cand = order.back();
      for (int v : order) {
        if (level[v] == last && degree[v] < degree[cand]) cand = v;
      }
      if (cand == start) break;
      start = cand;
    }
    for (int v : order) level[v] = -1;
    order = bfs_order(adj, start, level, degree);
    for (int v : order) done[v] = 1;
    result.insert(result.end(), order.rbegin(), order.rend());
  }
  return result;
}

template <class T>
std::vector<int> reverse_cuthill_mckee(const SparseMatrix<T>& a) {
  if (a.rows() != a.cols()) throw ArgumentError("ordering needs a square matrix");
  std::vector<std::vector<int>> adj(a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      int c = a.col_idx()[k];
      if (c == r) continue;
      adj[r].push_back(c);
      adj[c].push_back(r);
    }
  }
  return reverse_cuthill_mckee(adj);
}

template std::vector<int> reverse_cuthill_mckee(const SparseMatrix<double>&);
template std::vector<int> reverse_cuthill_mckee(const SparseMatrix<cplx>&);

int bandwidth(const std::vector<std::vector<int>>& adj, const std::vector<int>& order) {
  std::vector<int> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
  int bw = 0;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (int w : adj[v]) bw = std::max(bw, std::abs(pos[v] - pos[w]));
  }
  return bw;
}

template <class T>
Factorization<T>::Factorization(const SparseMatrix<T>& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw ArgumentError("LU needs a square matrix");
  norm_ = a.norm_inf();
  if (n_ == 0) return;
  if (norm_ == 0.0) throw SingularityError("matrix is identically zero", 0);
  Eigen::SparseMatrix<T> m = a.to_eigen();
  m.makeCompressed();
  lu_ = std::make_unique<Solver>();
  lu_->analyzePattern(m);
  lu_->factorize(m);
  if (lu_->info() != Eigen::Success) {
    throw SingularityError("LU factorization failed: " + lu_->lastErrorMessage(), 0);
  }
  // Pivots of U sit on the diagonal of the supernodal L store.
  const auto& store = lu_->matrixL().m_mapL;
  min_pivot_ = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (Eigen::Index j = 0; j < store.cols(); ++j) {
    for (typename std::decay_t<decltype(store)>::InnerIterator it(store, j); it; ++it) {
      if (it.index() == j) {
        double p = std::abs(it.value());
        if (p < min_pivot_) min_pivot_ = p, worst = static_cast<std::size_t>(j);
      }
    }
  }
  if (!(min_pivot_ >= 1e-14 * norm_)) {
    throw SingularityError("pivot " + std::to_string(worst) + " has magnitude " +
                               std::to_string(min_pivot_) + " (||A|| = " + std::to_string(norm_) +
                               ")",
                           worst);
  }
}

template <class T>
Vec<T> Factorization<T>::solve(const Vec<T>& b) const {
  if (b.size() != n_) throw ArgumentError("right-hand side has the wrong length");
  if (n_ == 0) return b;
  Vec<T> x = lu_->solve(b);
  return x;
}

template <class T>
Vec<T> Factorization<T>::solve_adjoint(const Vec<T>& b) const {
  if (b.size() != n_) throw ArgumentError("right-hand side has the wrong length");
  if (n_ == 0) return b;
  Vec<T> x = lu_->adjoint().solve(b);
  return x;
}

template class Factorization<double>;
template class Factorization<cplx>;

}  // namespace waveplate
