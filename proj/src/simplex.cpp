#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wigcur {

namespace {

constexpr double kDualTol = 1e-10;   // a reduced cost below -kDualTol prices in
constexpr double kPivotTol = 1e-11;  // smallest usable pivot magnitude

void check_problem(const StandardLp& lp, const std::vector<int>& initial_basis) {
  if (lp.n_rows <= 0 || lp.n_cols <= 0) throw SolverError("simplex: empty problem");
  if (lp.cols.size() != static_cast<size_t>(lp.n_cols) ||
      lp.cost.size() != static_cast<size_t>(lp.n_cols) ||
      lp.rhs.size() != static_cast<size_t>(lp.n_rows)) {
    throw SolverError("simplex: inconsistent problem dimensions");
  }
  if (initial_basis.size() != static_cast<size_t>(lp.n_rows)) {
    throw SolverError("simplex: initial basis must have one column per row");
  }
}

// Exact solves with forest-structured bases. A basis is factored by leaf
// peeling: repeatedly take a row incident to exactly one unresolved basic
// column. The peel order permutes the basis to a lower-triangular matrix, so
// forward (FTRAN) and reverse (BTRAN) sweeps solve it without fill-in.
class ForestBasis {
 public:
  explicit ForestBasis(const StandardLp& lp) : lp_(lp), m_(lp.n_rows) {
    row_count_.resize(m_);
    row_head_.resize(m_);
    peel_row_.resize(m_);
    peel_col_pos_.resize(m_);
    other_row_.resize(m_);
    other_val_.resize(m_);
    pivot_val_.resize(m_);
    pos_of_row_.resize(m_);
    resolved_.resize(m_);
    queue_.resize(m_);
    // per-row incidence over basic columns: CSR with <= 2 entries per column
    csr_pos_.resize(m_ + 1);
    csr_col_pos_.resize(2 * static_cast<size_t>(m_));
  }

  void factor(const std::vector<int>& basis) {
    std::fill(row_count_.begin(), row_count_.end(), 0);
    for (int bp = 0; bp < m_; ++bp) {
      const SparseColumn& c = lp_.cols[basis[bp]];
      for (int e = 0; e < c.nnz; ++e) ++row_count_[c.row[e]];
    }
    csr_pos_[0] = 0;
    for (int r = 0; r < m_; ++r) csr_pos_[r + 1] = csr_pos_[r] + row_count_[r];
    std::vector<int> fill = csr_pos_;
    for (int bp = 0; bp < m_; ++bp) {
      const SparseColumn& c = lp_.cols[basis[bp]];
      for (int e = 0; e < c.nnz; ++e) csr_col_pos_[fill[c.row[e]]++] = bp;
    }

    std::fill(resolved_.begin(), resolved_.end(), 0);
    int head = 0, tail = 0;
    for (int r = 0; r < m_; ++r) {
      if (row_count_[r] == 1) queue_[tail++] = r;
      if (row_count_[r] == 0) throw SolverError("simplex: singular basis (empty row)");
    }
    int done = 0;
    while (head < tail) {
      const int r = queue_[head++];
      if (row_count_[r] != 1) continue;  // may have dropped to 0 via an earlier peel
      int bp = -1;
      for (int q = csr_pos_[r]; q < csr_pos_[r + 1]; ++q) {
        if (!resolved_[csr_col_pos_[q]]) {
          bp = csr_col_pos_[q];
          break;
        }
      }
      if (bp < 0) throw SolverError("simplex: peel bookkeeping failed");
      resolved_[bp] = 1;
      const SparseColumn& c = lp_.cols[basis[bp]];
      double pv = 0.0;
      int orow = -1;
      double oval = 0.0;
      for (int e = 0; e < c.nnz; ++e) {
        if (c.row[e] == r) {
          pv = c.val[e];
        } else {
          orow = c.row[e];
          oval = c.val[e];
        }
      }
      if (std::abs(pv) < kPivotTol) throw SolverError("simplex: zero pivot in basis");
      peel_row_[done] = r;
      peel_col_pos_[done] = bp;
      other_row_[done] = orow;
      other_val_[done] = oval;
      pivot_val_[done] = pv;
      pos_of_row_[r] = done;
      ++done;
      row_count_[r] = 0;
      if (orow >= 0) {
        if (--row_count_[orow] == 1) queue_[tail++] = orow;
      }
    }
    if (done != m_) {
      throw SolverError("simplex: basis is not forest-structured");
    }
  }

  // Solve B x = b; x indexed by basis position.
  void ftran(const std::vector<double>& b, std::vector<double>& x,
             std::vector<double>& scratch) const {
    scratch = b;
    for (int i = 0; i < m_; ++i) {
      const double xi = scratch[peel_row_[i]] / pivot_val_[i];
      x[peel_col_pos_[i]] = xi;
      if (other_row_[i] >= 0) scratch[other_row_[i]] -= other_val_[i] * xi;
    }
  }

  // Solve y^T B = cb (cb indexed by basis position); y indexed by row.
  void btran(const std::vector<double>& cb, std::vector<double>& y) const {
    for (int i = m_ - 1; i >= 0; --i) {
      double rhs = cb[peel_col_pos_[i]];
      if (other_row_[i] >= 0) rhs -= other_val_[i] * y[other_row_[i]];
      y[peel_row_[i]] = rhs / pivot_val_[i];
    }
  }

 private:
  const StandardLp& lp_;
  int m_;
  std::vector<int> row_count_, row_head_, queue_;
  std::vector<int> csr_pos_, csr_col_pos_;
  std::vector<int> peel_row_, peel_col_pos_, other_row_;
  std::vector<double> other_val_, pivot_val_;
  std::vector<int> pos_of_row_;
  std::vector<char> resolved_;
};

double column_dot(const SparseColumn& c, const std::vector<double>& y) {
  double s = 0.0;
  for (int e = 0; e < c.nnz; ++e) s += c.val[e] * y[c.row[e]];
  return s;
}

// Ratio test shared by both backends: min z_b[i]/d[i] over d[i] > kPivotTol,
// ties broken toward the smallest basic column id (Bland).
int ratio_test(const std::vector<double>& z_b, const std::vector<double>& d,
               const std::vector<int>& basis) {
  const int m = static_cast<int>(basis.size());
  int leave = -1;
  double best = 0.0;
  for (int i = 0; i < m; ++i) {
    if (d[i] <= kPivotTol) continue;
    const double ratio = std::max(z_b[i], 0.0) / d[i];
    if (leave < 0 || ratio < best - 1e-12 * (1.0 + best)) {
      leave = i;
      best = ratio;
    } else if (ratio <= best + 1e-12 * (1.0 + best) && basis[i] < basis[leave]) {
      leave = i;
    }
  }
  return leave;
}

// Revised simplex on forest bases. Re-factors every iteration (O(m)) and
// recomputes the basic solution from the rhs, so nothing drifts.
long sparse_iterate(const StandardLp& lp, std::vector<int>& basis, long max_iterations,
                    long iterations_so_far) {
  const int m = lp.n_rows;
  ForestBasis fb(lp);
  std::vector<double> z_b(m), y(m), d(m), cb(m), scratch(m);
  std::vector<char> in_basis(lp.n_cols, 0);
  for (int id : basis) in_basis[id] = 1;

  long it = iterations_so_far;
  for (;;) {
    fb.factor(basis);
    fb.ftran(lp.rhs, z_b, scratch);
    for (int i = 0; i < m; ++i) cb[i] = lp.cost[basis[i]];
    fb.btran(cb, y);

    int enter = -1;
    for (int j = 0; j < lp.n_cols; ++j) {
      if (in_basis[j]) continue;
      if (lp.cost[j] - column_dot(lp.cols[j], y) < -kDualTol) {
        enter = j;
        break;  // Bland: first improving column
      }
    }
    if (enter < 0) return it;

    std::vector<double> a_col(m, 0.0);
    const SparseColumn& c = lp.cols[enter];
    for (int e = 0; e < c.nnz; ++e) a_col[c.row[e]] = c.val[e];
    fb.ftran(a_col, d, scratch);

    const int leave = ratio_test(z_b, d, basis);
    if (leave < 0) throw SolverError("simplex: unbounded direction (unexpected for L1 objective)");
    in_basis[basis[leave]] = 0;
    in_basis[enter] = 1;
    basis[leave] = enter;
    if (++it > max_iterations) {
      throw SolverError("simplex: iteration cap exceeded after " + std::to_string(it) +
                        " pivots");
    }
  }
}

// Classic full-tableau simplex. The tableau is only used to navigate; the
// returned basis is re-verified (and, if its certificate is off, finished)
// by the exact engine.
long dense_iterate(const StandardLp& lp, std::vector<int>& basis, long max_iterations) {
  const int m = lp.n_rows;
  const int n = lp.n_cols;
  const int width = n + 1;

  // tableau = B^{-1} [M | rhs], built with exact forest solves column-wise
  ForestBasis fb(lp);
  fb.factor(basis);
  std::vector<double> tableau(static_cast<size_t>(m) * width, 0.0);
  std::vector<double> col(m), solved(m), scratch(m);
  for (int j = 0; j <= n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    if (j < n) {
      const SparseColumn& c = lp.cols[j];
      for (int e = 0; e < c.nnz; ++e) col[c.row[e]] = c.val[e];
    } else {
      col = lp.rhs;
    }
    fb.ftran(col, solved, scratch);
    // solved is indexed by basis position == tableau row
    for (int i = 0; i < m; ++i) tableau[static_cast<size_t>(i) * width + j] = solved[i];
  }
  std::vector<double> cbar(n);
  for (int j = 0; j < n; ++j) {
    double s = lp.cost[j];
    for (int i = 0; i < m; ++i) {
      s -= lp.cost[basis[i]] * tableau[static_cast<size_t>(i) * width + j];
    }
    cbar[j] = s;
  }
  std::vector<char> in_basis(n, 0);
  for (int id : basis) in_basis[id] = 1;

  std::vector<double> z_b(m), d(m);
  long it = 0;
  for (;;) {
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (!in_basis[j] && cbar[j] < -kDualTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return it;

    for (int i = 0; i < m; ++i) {
      z_b[i] = tableau[static_cast<size_t>(i) * width + n];
      d[i] = tableau[static_cast<size_t>(i) * width + enter];
    }
    const int leave = ratio_test(z_b, d, basis);
    if (leave < 0) throw SolverError("simplex: unbounded direction (unexpected for L1 objective)");

    double* pivot_row = &tableau[static_cast<size_t>(leave) * width];
    const double pivot = pivot_row[enter];
    for (int j = 0; j <= n; ++j) pivot_row[j] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double* row = &tableau[static_cast<size_t>(i) * width];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= n; ++j) row[j] -= f * pivot_row[j];
    }
    const double cf = cbar[enter];
    for (int j = 0; j < n; ++j) cbar[j] -= cf * pivot_row[j];

    in_basis[basis[leave]] = 0;
    in_basis[enter] = 1;
    basis[leave] = enter;
    if (++it > max_iterations) {
      throw SolverError("simplex: iteration cap exceeded after " + std::to_string(it) +
                        " pivots");
    }
  }
}

}  // namespace

SimplexResult solve_standard_lp(const StandardLp& lp, const std::vector<int>& initial_basis,
                                SimplexBackend backend, long max_iterations) {
  check_problem(lp, initial_basis);
  std::vector<int> basis = initial_basis;

  long iterations = 0;
  if (backend == SimplexBackend::kDense) {
    iterations = dense_iterate(lp, basis, max_iterations);
  }
  // The sparse engine both finishes the dense run (usually zero pivots) and
  // is the primary path for kSparse.
  iterations = sparse_iterate(lp, basis, max_iterations, iterations);

  const int m = lp.n_rows;
  ForestBasis fb(lp);
  fb.factor(basis);
  std::vector<double> z_b(m), y(m), cb(m), scratch(m);
  fb.ftran(lp.rhs, z_b, scratch);
  for (int i = 0; i < m; ++i) cb[i] = lp.cost[basis[i]];
  fb.btran(cb, y);

  SimplexResult res;
  res.basis = basis;
  res.iterations = iterations;
  res.z.assign(lp.n_cols, 0.0);
  for (int i = 0; i < m; ++i) res.z[basis[i]] = z_b[i];

  res.objective = 0.0;
  for (int i = 0; i < m; ++i) res.objective += lp.cost[basis[i]] * z_b[i];

  std::vector<double> residual = lp.rhs;
  for (int j = 0; j < lp.n_cols; ++j) {
    const double zj = res.z[j];
    if (zj == 0.0) continue;
    const SparseColumn& c = lp.cols[j];
    for (int e = 0; e < c.nnz; ++e) residual[c.row[e]] -= c.val[e] * zj;
  }
  for (double r : residual) res.residual_inf = std::max(res.residual_inf, std::abs(r));

  res.min_reduced_cost = 0.0;
  for (int j = 0; j < lp.n_cols; ++j) {
    const double rc = lp.cost[j] - column_dot(lp.cols[j], y);
    res.min_reduced_cost = std::min(res.min_reduced_cost, rc);
  }
  return res;
}

}  // namespace wigcur
