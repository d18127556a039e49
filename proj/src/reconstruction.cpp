#include "reconstruction.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "evolution.hpp"
#include "gaussian_states.hpp"

namespace wigcur {

LpProblem assemble_lp(const ScalarField& w_t, const ScalarField& w_next, double d_tau,
                      const VectorField& j_init) {
  validate_finite(w_t, "assemble_lp");
  validate_finite(w_next, "assemble_lp");
  validate_finite(j_init, "assemble_lp");
  if (!w_t.grid.same_lattice(w_next.grid) || !w_t.grid.same_lattice(j_init.grid)) {
    throw std::invalid_argument("assemble_lp: lattice mismatch");
  }
  if (!(d_tau > 0.0)) throw std::invalid_argument("assemble_lp: d_tau must be > 0");

  LpProblem p;
  p.grid = w_t.grid;
  p.d_tau = d_tau;
  p.j_init = j_init;

  const Grid& g = p.grid;
  const int n = g.size();
  p.lp.n_rows = n;
  p.lp.n_cols = 4 * n;
  p.lp.cost.assign(4 * static_cast<size_t>(n), 1.0);
  p.lp.cols.resize(4 * static_cast<size_t>(n));

  // rhs = (W_t - W_next)/d_tau - Dx Jx_init - Dp Jp_init
  const ScalarField div_init = divergence(j_init);
  p.lp.rhs.resize(n);
  for (int k = 0; k < n; ++k) {
    p.lp.rhs[k] = (w_t.values[k] - w_next.values[k]) / d_tau - div_init.values[k];
  }

  // Column of Dx at site k: -1/hx in row k, +1/hx in the west neighbor's row
  // (that neighbor's forward difference reads this site). Same along p.
  const double inv_hx = 1.0 / g.hx;
  const double inv_hp = 1.0 / g.hp;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int ip = 0; ip < g.np; ++ip) {
      const int k = g.index(ix, ip);
      SparseColumn cx;
      cx.row[cx.nnz] = k;
      cx.val[cx.nnz] = -inv_hx;
      ++cx.nnz;
      if (ix > 0) {
        cx.row[cx.nnz] = g.index(ix - 1, ip);
        cx.val[cx.nnz] = inv_hx;
        ++cx.nnz;
      }
      SparseColumn cp;
      cp.row[cp.nnz] = k;
      cp.val[cp.nnz] = -inv_hp;
      ++cp.nnz;
      if (ip > 0) {
        cp.row[cp.nnz] = g.index(ix, ip - 1);
        cp.val[cp.nnz] = inv_hp;
        ++cp.nnz;
      }
      SparseColumn neg_cx = cx;
      SparseColumn neg_cp = cp;
      for (int e = 0; e < 2; ++e) {
        neg_cx.val[e] = -neg_cx.val[e];
        neg_cp.val[e] = -neg_cp.val[e];
      }
      p.lp.cols[p.column_of(LpComponent::kJxPlus, k)] = cx;
      p.lp.cols[p.column_of(LpComponent::kJxMinus, k)] = neg_cx;
      p.lp.cols[p.column_of(LpComponent::kJpPlus, k)] = cp;
      p.lp.cols[p.column_of(LpComponent::kJpMinus, k)] = neg_cp;
    }
  }
  return p;
}

namespace {

// Feasible start without artificial variables: Dx is invertible (triangular
// shift-difference), so u = Dx^{-1} rhs by suffix sums along each x-line;
// pick the Jx+ or Jx- column per site to make the basic values |u|.
std::vector<int> initial_basis(const LpProblem& p) {
  const Grid& g = p.grid;
  std::vector<int> basis(g.size());
  std::vector<double> u(g.size(), 0.0);
  for (int ip = 0; ip < g.np; ++ip) {
    double acc = 0.0;
    for (int ix = g.nx - 1; ix >= 0; --ix) {
      const int k = g.index(ix, ip);
      acc += p.lp.rhs[k];
      u[k] = -g.hx * acc;
      basis[k] = p.column_of(u[k] >= 0.0 ? LpComponent::kJxPlus : LpComponent::kJxMinus, k);
    }
  }
  return basis;
}

}  // namespace

ReconstructionResult solve_l1_lp(const LpProblem& p, const SolveOptions& opt) {
  const SimplexBackend backend = (p.lp.n_cols <= opt.dense_column_limit)
                                     ? SimplexBackend::kDense
                                     : SimplexBackend::kSparse;
  const long cap = opt.max_iter_per_col * static_cast<long>(p.lp.n_cols);
  const SimplexResult sol = solve_standard_lp(p.lp, initial_basis(p), backend, cap);

  ReconstructionResult res;
  res.iterations = sol.iterations;
  res.min_reduced_cost = sol.min_reduced_cost;
  res.objective_value = sol.objective;
  res.j_initial = p.j_init;

  const int n = p.n_sites();
  res.delta_j = make_vector_field(p.grid);
  for (int k = 0; k < n; ++k) {
    res.delta_j.jx[k] = sol.z[p.column_of(LpComponent::kJxPlus, k)] -
                        sol.z[p.column_of(LpComponent::kJxMinus, k)];
    res.delta_j.jp[k] = sol.z[p.column_of(LpComponent::kJpPlus, k)] -
                        sol.z[p.column_of(LpComponent::kJpMinus, k)];
  }
  res.j_exp = res.j_initial;
  for (int k = 0; k < n; ++k) {
    res.j_exp.jx[k] += res.delta_j.jx[k];
    res.j_exp.jp[k] += res.delta_j.jp[k];
  }

  // Independent feasibility check through the lattice operators rather than
  // the solver's own bookkeeping.
  const ScalarField div_delta = divergence(res.delta_j);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(div_delta.values[k] - p.lp.rhs[k]));
  }
  res.residual_inf = worst;
  if (res.residual_inf > opt.feasibility_tol) {
    throw SolverError("solve_l1_lp: feasibility residual " + std::to_string(res.residual_inf) +
                      " exceeds tolerance");
  }
  if (res.min_reduced_cost < -opt.feasibility_tol) {
    throw SolverError("solve_l1_lp: dual infeasibility " +
                      std::to_string(res.min_reduced_cost));
  }
  return res;
}

double fitted_r(const ScalarField& w) {
  validate_finite(w, "fitted_r");
  const Grid& g = w.grid;
  double mass = 0.0, mx = 0.0, mp = 0.0, mxx = 0.0, mpp = 0.0;
  ScalarField tmp = make_scalar_field(g);
  // moments via the same trapezoidal quadrature as everything else
  auto moment = [&](auto&& f) {
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int ip = 0; ip < g.np; ++ip) {
        tmp.at(ix, ip) = f(g.x(ix), g.p(ip)) * w.at(ix, ip);
      }
    }
    return quadrature_integral(tmp);
  };
  mass = moment([](double, double) { return 1.0; });
  if (!(mass > 0.0)) throw std::invalid_argument("fitted_r: field has no mass");
  mx = moment([](double x, double) { return x; }) / mass;
  mp = moment([](double, double p) { return p; }) / mass;
  mxx = moment([&](double x, double) { return x * x; }) / mass - mx * mx;
  mpp = moment([&](double, double p) { return p * p; }) / mass - mp * mp;
  if (!(mxx > 0.0) || !(mpp > 0.0)) {
    throw std::invalid_argument("fitted_r: degenerate second moments");
  }
  return 0.25 * std::log(mpp / mxx);
}

VectorField fitted_jsys(const ScalarField& w_t, const ScalarField& w_next, double d_tau) {
  const double r_t = fitted_r(w_t);
  const double r_next = fitted_r(w_next);
  const double xi_fit = (r_next - r_t) / d_tau;
  const ScalarField w_fit =
      gaussian_wigner_field(squeezed_vacuum_state(r_t, kHalfPi), w_t.grid);
  return j_sys(w_fit, state_frame_params(SystemParams{xi_fit, kHalfPi}));
}

std::vector<ReconstructionResult> reconstruct_sequence(const std::vector<TimedField>& snapshots,
                                                       InitMode mode, const SolveOptions& opt,
                                                       int threads) {
  if (snapshots.size() < 2) {
    throw std::invalid_argument("reconstruct_sequence: need at least two snapshots");
  }
  for (size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].tau > snapshots[i - 1].tau)) {
      throw std::invalid_argument("reconstruct_sequence: tau must be strictly increasing");
    }
    if (!snapshots[i].w.grid.same_lattice(snapshots[0].w.grid)) {
      throw std::invalid_argument("reconstruct_sequence: lattice mismatch across snapshots");
    }
  }

  const int n_pairs = static_cast<int>(snapshots.size()) - 1;
  std::vector<ReconstructionResult> results(n_pairs);
  std::mutex err_mutex;
  std::string first_error;

  auto solve_pair = [&](int i) {
    try {
      const ScalarField& w_t = snapshots[i].w;
      const ScalarField& w_next = snapshots[i + 1].w;
      const double d_tau = snapshots[i + 1].tau - snapshots[i].tau;
      VectorField init = (mode == InitMode::kZero) ? make_vector_field(w_t.grid)
                                                   : fitted_jsys(w_t, w_next, d_tau);
      results[i] = solve_l1_lp(assemble_lp(w_t, w_next, d_tau, init), opt);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (first_error.empty()) {
        first_error = "pair " + std::to_string(i) + ": " + e.what();
      }
    }
  };

  if (threads <= 1) {
    for (int i = 0; i < n_pairs && first_error.empty(); ++i) solve_pair(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min(threads, n_pairs);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_pairs; i = next.fetch_add(1)) solve_pair(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw SolverError("reconstruct_sequence: " + first_error);
  return results;
}

}  // namespace wigcur
