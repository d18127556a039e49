#pragma once

#include <vector>

#include "currents.hpp"
#include "phase_grid.hpp"
#include "simplex.hpp"

namespace wigcur {

// Split-variable component blocks, in column order.
enum class LpComponent { kJxPlus = 0, kJxMinus = 1, kJpPlus = 2, kJpMinus = 3 };

// The discretized continuity constraint
//   Dx (Jx_init + dJx) + Dp (Jp_init + dJp) = (W_t - W_next) / d_tau
// as a standard-form LP over split variables dJ = u - v, u,v >= 0, with unit
// costs realizing ||dJ||_1. Dx, Dp are the forward-difference operators with
// the zero-padding rule, so one constraint row per lattice point and four
// variable blocks of n_sites columns each: [Jx+, Jx-, Jp+, Jp-], row-major
// within a block.
struct LpProblem {
  Grid grid;
  double d_tau = 0.0;
  VectorField j_init;
  StandardLp lp;

  int n_sites() const { return grid.size(); }
  int column_of(LpComponent c, int site) const {
    return static_cast<int>(c) * grid.size() + site;
  }
  LpComponent component_of(int col) const {
    return static_cast<LpComponent>(col / grid.size());
  }
  int site_of(int col) const { return col % grid.size(); }
};

LpProblem assemble_lp(const ScalarField& w_t, const ScalarField& w_next, double d_tau,
                      const VectorField& j_init);

struct ReconstructionResult {
  VectorField j_exp;      // j_initial + delta_j
  VectorField delta_j;
  VectorField j_initial;
  double objective_value = 0.0;   // ||delta_j||_1
  double residual_inf = 0.0;      // continuity residual of j_exp
  double min_reduced_cost = 0.0;  // >= -1e-9 certifies optimality
  long iterations = 0;
};

struct SolveOptions {
  long max_iter_per_col = 50;
  // Full-tableau simplex up to this many columns, forest revised simplex
  // beyond. 600 keeps the dense path to small grids; the sparse path is
  // exact and much faster at scenario sizes.
  int dense_column_limit = 600;
  double feasibility_tol = 1e-9;
};

ReconstructionResult solve_l1_lp(const LpProblem& p, const SolveOptions& opt = {});

enum class InitMode { kZero, kFittedJsys };

struct TimedField {
  double tau = 0.0;
  ScalarField w;
};

// Per consecutive snapshot pair: j_init is zero or the squeezer current of
// the pure squeezed state fitted to w_t's variances (r from the variance
// ratio, xi from the local dr/dtau, evaluated with the state-frame pump
// phase). delta_j then directly estimates the environmental current in
// fitted mode. threads > 1 solves pairs concurrently; results are identical
// for any thread count.
std::vector<ReconstructionResult> reconstruct_sequence(const std::vector<TimedField>& snapshots,
                                                       InitMode mode,
                                                       const SolveOptions& opt = {},
                                                       int threads = 1);

// The fitted pure-squeezed prior for one pair, exposed for the pipeline's
// ideal-current exports.
VectorField fitted_jsys(const ScalarField& w_t, const ScalarField& w_next, double d_tau);

// r = ln(Vp/Vx)/4 from the field's second moments.
double fitted_r(const ScalarField& w);

}  // namespace wigcur
