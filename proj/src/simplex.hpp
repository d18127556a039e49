#pragma once

#include <stdexcept>
#include <vector>

namespace wigcur {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Column of a standard-form constraint matrix with at most two nonzeros.
// The reconstruction constraints are forward-difference incidence columns,
// which never need more.
struct SparseColumn {
  int row[2] = {-1, -1};
  double val[2] = {0.0, 0.0};
  int nnz = 0;
};

// min c^T z  s.t.  M z = rhs,  z >= 0, with all costs equal and positive is
// the only shape this project needs, but costs are kept explicit.
struct StandardLp {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<SparseColumn> cols;
  std::vector<double> cost;
  std::vector<double> rhs;
};

struct SimplexResult {
  std::vector<double> z;          // length n_cols
  std::vector<int> basis;         // length n_rows, column ids
  double objective = 0.0;
  double residual_inf = 0.0;      // ||M z - rhs||_inf, recomputed from z
  double min_reduced_cost = 0.0;  // dual feasibility certificate at the end
  long iterations = 0;
};

enum class SimplexBackend { kDense, kSparse };

// Bland's rule (lowest-index entering column; lowest basic index on ratio
// ties), so identical problems reproduce identical vertices. initial_basis
// must be a feasible basis of size n_rows. kDense navigates on a full
// tableau; kSparse is a revised simplex whose bases are forest-structured
// (each column couples at most two rows), solved by exact leaf peeling with
// no factor updates to drift. Both finish through the same exact extraction,
// and the dense path re-verifies its optimum with the exact engine.
// Throws SolverError when max_iterations is exceeded.
SimplexResult solve_standard_lp(const StandardLp& lp, const std::vector<int>& initial_basis,
                                SimplexBackend backend, long max_iterations);

}  // namespace wigcur
