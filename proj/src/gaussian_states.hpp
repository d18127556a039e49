#pragma once

#include <array>
#include <optional>
#include <utility>

#include "phase_grid.hpp"

namespace wigcur {

// Gaussian Wigner state: mean quadratures plus symmetric covariance.
// Physical states satisfy det(cov) >= 1/4, with equality iff pure.
struct GaussianState {
  Vec2 mean;
  Mat2 cov{0.5, 0.0, 0.5};
};

GaussianState vacuum_state();
GaussianState thermal_state(double n_bar);

// Squeezed thermal state at pump phase theta. The covariance is
// R(phi) diag((n_bar+1/2) e^{-2r}, (n_bar+1/2) e^{+2r}) R(phi)^T with
// phi = (theta - pi/2)/2, so at the canonical theta = pi/2 the x quadrature
// is squeezed and p anti-squeezed.
GaussianState squeezed_thermal_state(double r, double theta, double n_bar);
GaussianState squeezed_vacuum_state(double r, double theta);

// tr(rho^2) = 1 / (2 sqrt(det cov)) for a Gaussian state.
double state_purity(const GaussianState& s);

struct FieldProvenance {
  std::vector<double> weights;
  std::vector<GaussianState> components;
};

// W(x,p) = (2 pi sqrt(det cov))^{-1} exp(-v^T cov^{-1} v / 2). Rejects
// near-singular covariances (det < 1e-12). The result carries provenance.
ScalarField gaussian_wigner_field(const GaussianState& s, const Grid& g);

// Three-component decomposition of a decohering squeezed state:
// weights (sigma1, c1, d1) over (squeezed vacuum, squeezed thermal, thermal).
struct MixtureState {
  std::array<double, 3> weights{1.0, 0.0, 0.0};
  GaussianState squeezed;
  GaussianState squeezed_thermal;
  GaussianState thermal;
};

void validate_mixture(const MixtureState& m);
ScalarField mixture_wigner(const MixtureState& m, const Grid& g);

// Analytic (dW/dx, dW/dp) when the field carries Gaussian provenance,
// nullopt otherwise.
std::optional<std::pair<ScalarField, ScalarField>> analytic_gradient(const ScalarField& w);

// 2 pi * integral of w^2. If normalization_defect is given it receives
// |integral(w) - 1|; values above 1e-3 mean the estimate is unreliable
// (callers are expected to warn, not fail).
double purity_of_field(const ScalarField& w, double* normalization_defect = nullptr);

// Detection-chain imperfections: eta is the overall efficiency (1 - loss),
// theta_rms the RMS pump phase noise in radians.
struct NoiseModel {
  double eta = 1.0;
  double theta_rms = 0.0;
};

void validate_noise(const NoiseModel& n);

struct DbLevels {
  double squeezing_db = 0.0;      // reported positive
  double antisqueezing_db = 0.0;
};

// Vacuum-normalized variances e^{-+2r} degraded by loss (V' = eta V + 1-eta)
// and by Gaussian phase jitter. The jitter mixes the two quadratures with
// weight c = <cos^2 delta> = (1 + e^{-2 delta_rms^2})/2 where the quadrature
// frame wobbles by half the pump phase noise, delta_rms = theta_rms / 2.
DbLevels degraded_db_levels(double r, const NoiseModel& noise);

struct MixtureFit {
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  double residual_l2 = 0.0;    // lattice L2 distance at the optimum
  bool ill_conditioned = false;
};

// Nonnegative least squares of w onto the three-component dictionary built
// from (r, n_bar) at pump phase theta, with the weights constrained to sum
// to one. Flags (without failing) dictionaries with near-identical members.
MixtureFit fit_mixture_weights(const ScalarField& w, double r, double n_bar,
                               double theta = kHalfPi);

}  // namespace wigcur
