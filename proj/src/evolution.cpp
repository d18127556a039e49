#include "evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace wigcur {

void validate_schedule(const PumpSchedule& s) {
  if (s.powers_mw.empty()) throw std::invalid_argument("schedule: no powers");
  if (!(s.k_cal > 0.0)) throw std::invalid_argument("schedule: k_cal must be > 0");
  double prev = -1.0;
  for (double p : s.powers_mw) {
    if (p < 0.0) throw std::invalid_argument("schedule: negative power");
    if (p <= prev) throw std::invalid_argument("schedule: powers must be strictly increasing");
    prev = p;
  }
}

std::vector<double> pump_to_tau(const PumpSchedule& s) {
  validate_schedule(s);
  std::vector<double> taus;
  taus.reserve(s.powers_mw.size());
  for (double p : s.powers_mw) taus.push_back(s.k_cal * std::sqrt(p));
  return taus;
}

Mat2 drift_matrix(const SystemParams& sp, const EnvParams& ep) {
  validate_env(ep);
  const Mat2 principal{-sp.xi - 0.5 * ep.gamma, 0.0, sp.xi - 0.5 * ep.gamma};
  return mat2_rotated(principal, (sp.theta - kHalfPi) / 2.0);
}

SystemParams state_frame_params(const SystemParams& sp) {
  return SystemParams{sp.xi, sp.theta + kHalfPi};
}

namespace {

// integral_0^tau e^{a s} ds
double exp_integral(double a, double tau) {
  if (std::abs(a * tau) < 1e-12) return tau * (1.0 + 0.5 * a * tau);
  return (std::exp(a * tau) - 1.0) / a;
}

}  // namespace

GaussianState evolve_covariance(const GaussianState& s0, const SystemParams& sp,
                                const EnvParams& ep, double tau) {
  validate_env(ep);
  if (tau < 0.0) throw std::invalid_argument("evolve_covariance: tau must be >= 0");
  const double phi = (sp.theta - kHalfPi) / 2.0;
  const double a1 = -sp.xi - 0.5 * ep.gamma;
  const double a2 = sp.xi - 0.5 * ep.gamma;
  const double diffusion = ep.gamma * (ep.n_bar + 0.5);

  // Work in the principal frame of the drift; the diffusion is isotropic and
  // unaffected by the rotation.
  Mat2 cov = mat2_rotated(s0.cov, -phi);
  const double c = std::cos(-phi);
  const double s = std::sin(-phi);
  Vec2 mean{c * s0.mean.x - s * s0.mean.p, s * s0.mean.x + c * s0.mean.p};

  const double e1 = std::exp(a1 * tau);
  const double e2 = std::exp(a2 * tau);
  cov.xx = e1 * e1 * cov.xx + diffusion * exp_integral(2.0 * a1, tau);
  cov.pp = e2 * e2 * cov.pp + diffusion * exp_integral(2.0 * a2, tau);
  cov.xp = e1 * e2 * cov.xp;
  mean.x *= e1;
  mean.p *= e2;

  GaussianState out;
  out.cov = mat2_rotated(cov, phi);
  const double cb = std::cos(phi);
  const double sb = std::sin(phi);
  out.mean = Vec2{cb * mean.x - sb * mean.p, sb * mean.x + cb * mean.p};
  return out;
}

ScalarField pde_evolve_oracle(const ScalarField& w0, const SystemParams& sp,
                              const EnvParams& ep, double d_tau, int steps) {
  validate_finite(w0, "pde_evolve_oracle");
  validate_env(ep);
  if (!(d_tau > 0.0)) throw std::invalid_argument("pde_evolve_oracle: d_tau must be > 0");
  if (steps < 0) throw std::invalid_argument("pde_evolve_oracle: steps must be >= 0");

  const Grid& g = w0.grid;
  const double h_min = std::min(g.hx, g.hp);
  const Mat2 a = drift_matrix(sp, ep);
  const double diffusion = 0.5 * ep.gamma * (ep.n_bar + 0.5);

  double v_max = 0.0;
  for (double xc : {g.x_min, g.x_max}) {
    for (double pc : {g.p_min, g.p_max}) {
      const Vec2 v = mat2_apply(a, Vec2{xc, pc});
      v_max = std::max(v_max, std::hypot(v.x, v.p));
    }
  }
  if (v_max > 0.0 && d_tau > 0.2 * h_min / v_max) {
    throw std::invalid_argument("pde_evolve_oracle: d_tau exceeds the advective stability bound");
  }
  if (diffusion > 0.0 && d_tau > 0.2 * h_min * h_min / (2.0 * diffusion)) {
    throw std::invalid_argument("pde_evolve_oracle: d_tau exceeds the diffusive stability bound");
  }

  ScalarField w = w0;
  w.provenance.reset();
  std::vector<double> jx(g.size()), jp(g.size()), next(g.size());
  auto value = [&](const std::vector<double>& f, int ix, int ip) -> double {
    if (ix < 0 || ix >= g.nx || ip < 0 || ip >= g.np) return 0.0;
    return f[g.index(ix, ip)];
  };

  for (int step = 0; step < steps; ++step) {
    // Flux F = A (x, p) W - (gamma/2)(n_bar + 1/2) grad W, central gradient.
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix);
      for (int ip = 0; ip < g.np; ++ip) {
        const double p = g.p(ip);
        const int k = g.index(ix, ip);
        const Vec2 v = mat2_apply(a, Vec2{x, p});
        const double gx = (value(w.values, ix + 1, ip) - value(w.values, ix - 1, ip)) / (2.0 * g.hx);
        const double gp = (value(w.values, ix, ip + 1) - value(w.values, ix, ip - 1)) / (2.0 * g.hp);
        jx[k] = v.x * w.values[k] - diffusion * gx;
        jp[k] = v.p * w.values[k] - diffusion * gp;
      }
    }
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int ip = 0; ip < g.np; ++ip) {
        const int k = g.index(ix, ip);
        const double div = (value(jx, ix + 1, ip) - value(jx, ix - 1, ip)) / (2.0 * g.hx) +
                           (value(jp, ix, ip + 1) - value(jp, ix, ip - 1)) / (2.0 * g.hp);
        next[k] = w.values[k] - d_tau * div;
      }
    }
    w.values.swap(next);
  }
  return w;
}

std::vector<Snapshot> snapshot_sequence(const Scenario& sc) {
  validate_env(sc.env);
  const std::vector<double> taus = pump_to_tau(sc.schedule);
  if (sc.weight_policy == WeightPolicy::kFixed) {
    double sum = 0.0;
    for (double wv : sc.fixed_weights) {
      if (wv < 0.0) throw std::invalid_argument("scenario: negative fixed weight");
      sum += wv;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("scenario: fixed weights must sum to 1");
    }
  }

  const SystemParams sp{1.0, sc.theta};  // r advances at unit rate, r = tau
  const EnvParams lossless{0.0, 0.0};
  std::vector<Snapshot> out;
  out.reserve(taus.size());
  for (size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    Snapshot snap;
    snap.tau = tau;
    snap.power_mw = sc.schedule.powers_mw[j];
    snap.state.squeezed = evolve_covariance(vacuum_state(), sp, lossless, tau);
    snap.state.squeezed_thermal =
        evolve_covariance(thermal_state(sc.env.n_bar), sp, lossless, tau);
    snap.state.thermal = thermal_state(sc.env.n_bar);
    if (sc.weight_policy == WeightPolicy::kFixed) {
      snap.state.weights = sc.fixed_weights;
    } else {
      const GaussianState reference = evolve_covariance(vacuum_state(), sp, sc.env, tau);
      const ScalarField w_ref = gaussian_wigner_field(reference, sc.grid);
      snap.state.weights = fit_mixture_weights(w_ref, tau, sc.env.n_bar, sc.theta).weights;
    }
    snap.w = mixture_wigner(snap.state, sc.grid);
    out.push_back(std::move(snap));
  }
  return out;
}

}  // namespace wigcur
