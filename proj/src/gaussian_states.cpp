#include "gaussian_states.hpp"

#include <cmath>
#include <stdexcept>

namespace wigcur {

GaussianState vacuum_state() { return GaussianState{}; }

GaussianState thermal_state(double n_bar) {
  if (n_bar < 0.0) throw std::invalid_argument("thermal_state: n_bar must be >= 0");
  const double v = n_bar + 0.5;
  return GaussianState{Vec2{}, Mat2{v, 0.0, v}};
}

GaussianState squeezed_thermal_state(double r, double theta, double n_bar) {
  if (n_bar < 0.0) {
    throw std::invalid_argument("squeezed_thermal_state: n_bar must be >= 0");
  }
  const double v = n_bar + 0.5;
  const Mat2 principal{v * std::exp(-2.0 * r), 0.0, v * std::exp(2.0 * r)};
  const double phi = (theta - kHalfPi) / 2.0;
  GaussianState s;
  s.cov = mat2_rotated(principal, phi);
  return s;
}

GaussianState squeezed_vacuum_state(double r, double theta) {
  return squeezed_thermal_state(r, theta, 0.0);
}

double state_purity(const GaussianState& s) {
  return 1.0 / (2.0 * std::sqrt(s.cov.det()));
}

namespace {

void accumulate_gaussian(ScalarField& f, const GaussianState& s, double weight) {
  const Mat2 inv = mat2_inverse(s.cov);
  const double norm = weight / (kTwoPi * std::sqrt(s.cov.det()));
  const Grid& g = f.grid;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double dx = g.x(ix) - s.mean.x;
    for (int ip = 0; ip < g.np; ++ip) {
      const double dp = g.p(ip) - s.mean.p;
      const double q = inv.xx * dx * dx + 2.0 * inv.xp * dx * dp + inv.pp * dp * dp;
      f.at(ix, ip) += norm * std::exp(-0.5 * q);
    }
  }
}

void check_covariance(const GaussianState& s, const char* what) {
  if (!(s.cov.det() >= 1e-12)) {
    throw std::invalid_argument(std::string(what) + ": near-singular covariance");
  }
}

}  // namespace

ScalarField gaussian_wigner_field(const GaussianState& s, const Grid& g) {
  check_covariance(s, "gaussian_wigner_field");
  ScalarField f = make_scalar_field(g);
  accumulate_gaussian(f, s, 1.0);
  auto prov = std::make_shared<FieldProvenance>();
  prov->weights = {1.0};
  prov->components = {s};
  f.provenance = std::move(prov);
  return f;
}

void validate_mixture(const MixtureState& m) {
  double sum = 0.0;
  for (double w : m.weights) {
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("mixture: weights must sum to 1");
  }
}

ScalarField mixture_wigner(const MixtureState& m, const Grid& g) {
  validate_mixture(m);
  const GaussianState* comps[3] = {&m.squeezed, &m.squeezed_thermal, &m.thermal};
  ScalarField f = make_scalar_field(g);
  auto prov = std::make_shared<FieldProvenance>();
  for (int i = 0; i < 3; ++i) {
    check_covariance(*comps[i], "mixture_wigner");
    if (m.weights[i] != 0.0) accumulate_gaussian(f, *comps[i], m.weights[i]);
    prov->weights.push_back(m.weights[i]);
    prov->components.push_back(*comps[i]);
  }
  f.provenance = std::move(prov);
  return f;
}

std::optional<std::pair<ScalarField, ScalarField>> analytic_gradient(const ScalarField& w) {
  if (!w.provenance) return std::nullopt;
  const Grid& g = w.grid;
  ScalarField gx = make_scalar_field(g);
  ScalarField gp = make_scalar_field(g);
  const FieldProvenance& prov = *w.provenance;
  for (size_t c = 0; c < prov.components.size(); ++c) {
    if (prov.weights[c] == 0.0) continue;
    const GaussianState& s = prov.components[c];
    const Mat2 inv = mat2_inverse(s.cov);
    const double norm = prov.weights[c] / (kTwoPi * std::sqrt(s.cov.det()));
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x(ix) - s.mean.x;
      for (int ip = 0; ip < g.np; ++ip) {
        const double dp = g.p(ip) - s.mean.p;
        const double q = inv.xx * dx * dx + 2.0 * inv.xp * dx * dp + inv.pp * dp * dp;
        const double wv = norm * std::exp(-0.5 * q);
        gx.at(ix, ip) += -(inv.xx * dx + inv.xp * dp) * wv;
        gp.at(ix, ip) += -(inv.xp * dx + inv.pp * dp) * wv;
      }
    }
  }
  return std::make_pair(std::move(gx), std::move(gp));
}

double purity_of_field(const ScalarField& w, double* normalization_defect) {
  validate_finite(w, "purity_of_field");
  if (normalization_defect != nullptr) {
    *normalization_defect = std::abs(quadrature_integral(w) - 1.0);
  }
  ScalarField sq;
  sq.grid = w.grid;
  sq.values.resize(w.values.size());
  for (size_t k = 0; k < w.values.size(); ++k) sq.values[k] = w.values[k] * w.values[k];
  return kTwoPi * quadrature_integral(sq);
}

void validate_noise(const NoiseModel& n) {
  if (!(n.eta > 0.0) || n.eta > 1.0) {
    throw std::invalid_argument("noise: eta must lie in (0, 1]");
  }
  if (n.theta_rms < 0.0) {
    throw std::invalid_argument("noise: theta_rms must be >= 0");
  }
}

DbLevels degraded_db_levels(double r, const NoiseModel& noise) {
  if (r < 0.0) throw std::invalid_argument("degraded_db_levels: r must be >= 0");
  validate_noise(noise);
  const double v_sq = std::exp(-2.0 * r);
  const double v_anti = std::exp(2.0 * r);
  const double lossy_sq = noise.eta * v_sq + (1.0 - noise.eta);
  const double lossy_anti = noise.eta * v_anti + (1.0 - noise.eta);
  // Quadrature-frame jitter is half of the pump phase noise; exact Gaussian
  // second moment, no small-angle expansion.
  const double delta = noise.theta_rms / 2.0;
  const double c = 0.5 * (1.0 + std::exp(-2.0 * delta * delta));
  const double mixed_sq = c * lossy_sq + (1.0 - c) * lossy_anti;
  const double mixed_anti = c * lossy_anti + (1.0 - c) * lossy_sq;
  return DbLevels{-10.0 * std::log10(mixed_sq), 10.0 * std::log10(mixed_anti)};
}

namespace {

// Solve the equality-constrained least squares on an active set S:
// minimize a^T G a - 2 g^T a subject to sum(a) = 1, a_i = 0 for i not in S.
// Returns false if the KKT system is numerically singular.
bool solve_active_set(const double G[3][3], const double g[3], const bool active[3],
                      double a_out[3]) {
  int idx[3];
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    if (active[i]) idx[n++] = i;
  }
  // KKT system: [2 G_S, 1; 1^T, 0] [a; lambda] = [2 g_S; 1]
  const int dim = n + 1;
  double m[4][5] = {};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m[r][c] = 2.0 * G[idx[r]][idx[c]];
    m[r][n] = 1.0;
    m[r][dim] = 2.0 * g[idx[r]];
  }
  for (int c = 0; c < n; ++c) m[n][c] = 1.0;
  m[n][dim] = 1.0;

  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int r = col + 1; r < dim; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-13) return false;
    if (piv != col) {
      for (int c = 0; c <= dim; ++c) std::swap(m[piv][c], m[col][c]);
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c <= dim; ++c) m[r][c] -= f * m[col][c];
    }
  }
  a_out[0] = a_out[1] = a_out[2] = 0.0;
  for (int r = 0; r < n; ++r) a_out[idx[r]] = m[r][dim] / m[r][r];
  return true;
}

}  // namespace

MixtureFit fit_mixture_weights(const ScalarField& w, double r, double n_bar, double theta) {
  validate_finite(w, "fit_mixture_weights");
  const Grid& g = w.grid;
  MixtureState dict;
  dict.squeezed = squeezed_vacuum_state(r, theta);
  dict.squeezed_thermal = squeezed_thermal_state(r, theta, n_bar);
  dict.thermal = thermal_state(n_bar);
  const ScalarField f0 = gaussian_wigner_field(dict.squeezed, g);
  const ScalarField f1 = gaussian_wigner_field(dict.squeezed_thermal, g);
  const ScalarField f2 = gaussian_wigner_field(dict.thermal, g);
  const ScalarField* fields[3] = {&f0, &f1, &f2};

  double G[3][3];
  double gv[3];
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (size_t k = 0; k < w.values.size(); ++k) {
        s += fields[i]->values[k] * fields[j]->values[k];
      }
      G[i][j] = G[j][i] = s;
    }
    double s = 0.0;
    for (size_t k = 0; k < w.values.size(); ++k) s += fields[i]->values[k] * w.values[k];
    gv[i] = s;
  }

  MixtureFit fit;
  // Near-identical dictionary members make the weights non-identifiable.
  double max_diag = 0.0;
  for (int i = 0; i < 3; ++i) max_diag = std::max(max_diag, G[i][i]);
  for (int i = 0; i < 3 && !fit.ill_conditioned; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double dist2 = G[i][i] + G[j][j] - 2.0 * G[i][j];
      if (dist2 <= 1e-10 * max_diag) {
        fit.ill_conditioned = true;
        break;
      }
    }
  }

  // Enumerate active sets; the optimum's own active set always yields a
  // feasible candidate, so the best feasible candidate is the optimum.
  static const bool kSets[7][3] = {{true, true, true},  {true, true, false},
                                   {true, false, true}, {false, true, true},
                                   {true, false, false}, {false, true, false},
                                   {false, false, true}};
  double best_obj = 0.0;
  bool have_best = false;
  for (const bool* set : kSets) {
    double a[3];
    if (!solve_active_set(G, gv, set, a)) continue;
    bool feasible = true;
    for (int i = 0; i < 3; ++i) {
      if (a[i] < -1e-12) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    for (int i = 0; i < 3; ++i) a[i] = std::max(a[i], 0.0);
    const double sum = a[0] + a[1] + a[2];
    for (int i = 0; i < 3; ++i) a[i] /= sum;
    double obj = 0.0;
    for (int i = 0; i < 3; ++i) {
      obj -= 2.0 * gv[i] * a[i];
      for (int j = 0; j < 3; ++j) obj += G[i][j] * a[i] * a[j];
    }
    if (!have_best || obj < best_obj - 1e-15 * (1.0 + std::abs(best_obj))) {
      have_best = true;
      best_obj = obj;
      fit.weights = {a[0], a[1], a[2]};
    }
  }
  if (!have_best) {
    throw std::runtime_error("fit_mixture_weights: no feasible active set");
  }
  double self = 0.0;
  for (size_t k = 0; k < w.values.size(); ++k) self += w.values[k] * w.values[k];
  fit.residual_l2 = std::sqrt(std::max(0.0, self + best_obj));
  return fit;
}

}  // namespace wigcur
