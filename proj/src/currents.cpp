#include "currents.hpp"

#include <cmath>
#include <stdexcept>

namespace wigcur {

void validate_env(const EnvParams& ep) {
  if (ep.gamma < 0.0) throw std::invalid_argument("env: gamma must be >= 0");
  if (ep.n_bar < 0.0) throw std::invalid_argument("env: n_bar must be >= 0");
}

VectorField j_sys(const ScalarField& w, const SystemParams& sp) {
  validate_finite(w, "j_sys");
  const Grid& g = w.grid;
  VectorField j = make_vector_field(g);
  const double c = std::cos(sp.theta);
  const double s = std::sin(sp.theta);
  for (int ix = 0; ix < g.nx; ++ix) {
    const double x = g.x(ix);
    for (int ip = 0; ip < g.np; ++ip) {
      const double p = g.p(ip);
      const double wv = w.at(ix, ip);
      const int k = g.index(ix, ip);
      j.jx[k] = sp.xi * (x * c + p * s) * wv;
      j.jp[k] = sp.xi * (x * s - p * c) * wv;
    }
  }
  return j;
}

VectorField j_damp(const ScalarField& w, const EnvParams& ep) {
  validate_finite(w, "j_damp");
  validate_env(ep);
  const Grid& g = w.grid;
  VectorField j = make_vector_field(g);
  const double f = -0.5 * ep.gamma;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double x = g.x(ix);
    for (int ip = 0; ip < g.np; ++ip) {
      const int k = g.index(ix, ip);
      j.jx[k] = f * x * w.values[k];
      j.jp[k] = f * g.p(ip) * w.values[k];
    }
  }
  return j;
}

VectorField j_diff(const ScalarField& w, const EnvParams& ep) {
  validate_finite(w, "j_diff");
  validate_env(ep);
  const double f = -0.5 * ep.gamma * (ep.n_bar + 0.5);
  VectorField j = make_vector_field(w.grid);
  if (auto grad = analytic_gradient(w)) {
    for (size_t k = 0; k < j.jx.size(); ++k) {
      j.jx[k] = f * grad->first.values[k];
      j.jp[k] = f * grad->second.values[k];
    }
  } else {
    const ScalarField gx = forward_diff(w, Axis::kX);
    const ScalarField gp = forward_diff(w, Axis::kP);
    for (size_t k = 0; k < j.jx.size(); ++k) {
      j.jx[k] = f * gx.values[k];
      j.jp[k] = f * gp.values[k];
    }
  }
  return j;
}

VectorField j_env(const ScalarField& w, const EnvParams& ep) {
  VectorField damp = j_damp(w, ep);
  const VectorField diff = j_diff(w, ep);
  for (size_t k = 0; k < damp.jx.size(); ++k) {
    damp.jx[k] += diff.jx[k];
    damp.jp[k] += diff.jp[k];
  }
  return damp;
}

ScalarField continuity_residual(const ScalarField& w_t, const ScalarField& w_next,
                                const VectorField& j, double d_tau) {
  validate_finite(w_t, "continuity_residual");
  validate_finite(w_next, "continuity_residual");
  validate_finite(j, "continuity_residual");
  if (!w_t.grid.same_lattice(w_next.grid) || !w_t.grid.same_lattice(j.grid)) {
    throw std::invalid_argument("continuity_residual: lattice mismatch");
  }
  if (!(d_tau > 0.0)) {
    throw std::invalid_argument("continuity_residual: d_tau must be > 0");
  }
  ScalarField res = divergence(j);
  const double inv_dt = 1.0 / d_tau;
  for (size_t k = 0; k < res.values.size(); ++k) {
    res.values[k] += (w_next.values[k] - w_t.values[k]) * inv_dt;
  }
  return res;
}

}  // namespace wigcur
