#pragma once

#include <array>
#include <vector>

#include "currents.hpp"
#include "gaussian_states.hpp"

namespace wigcur {

// Pump sweep: strictly increasing powers in mW; k_cal maps sqrt(power) to
// effective time, tau_j = k_cal * sqrt(P_j).
struct PumpSchedule {
  std::vector<double> powers_mw;
  double k_cal = 1.0;
};

void validate_schedule(const PumpSchedule& s);
std::vector<double> pump_to_tau(const PumpSchedule& s);

// Drift matrix of the combined squeezer-plus-damping flow in the frame where
// the squeezed axis of pump phase theta lies along x: at theta = pi/2 this is
// diag(-xi - gamma/2, +xi - gamma/2); other pump phases rotate it by
// (theta - pi/2)/2.
Mat2 drift_matrix(const SystemParams& sp, const EnvParams& ep);

// The member of the j_sys family whose drift matches drift_matrix's
// orientation: pump phase shifted by pi/2 (the squeeze ellipse rotates at
// half the pump phase). Used wherever a system current must be evaluated
// against states squeezed along the quadrature axes.
SystemParams state_frame_params(const SystemParams& sp);

// Exact second-moment evolution of d(cov)/dtau = A cov + cov A^T + D with
// A = drift_matrix and D = gamma (n_bar + 1/2) I, and d(mean)/dtau = A mean.
// Closed form in A's principal frame. xi = 0 relaxes toward (n_bar + 1/2) I.
GaussianState evolve_covariance(const GaussianState& s0, const SystemParams& sp,
                                const EnvParams& ep, double tau);

// Independent grid oracle: explicit central-difference stepping of
// dW/dtau = -div(J_sys + J_env). Rejects step sizes beyond the stability
// bounds d_tau <= 0.2 min(h)^2 / (gamma (n_bar + 1/2)) and
// d_tau <= 0.2 min(h) / max|v|.
ScalarField pde_evolve_oracle(const ScalarField& w0, const SystemParams& sp,
                              const EnvParams& ep, double d_tau, int steps);

enum class WeightPolicy { kFitted, kFixed };

struct Scenario {
  PumpSchedule schedule;
  EnvParams env;
  double theta = kHalfPi;
  Grid grid;
  WeightPolicy weight_policy = WeightPolicy::kFitted;
  std::array<double, 3> fixed_weights{1.0, 0.0, 0.0};
};

struct Snapshot {
  double tau = 0.0;
  double power_mw = 0.0;
  MixtureState state;
  ScalarField w;
};

// One snapshot per scheduled power: the three mixture components evolved to
// tau_j (squeezing advances r at unit rate, r = tau), weighted either by the
// fixed config triple or by fitting against the exactly evolved open-system
// Gaussian.
std::vector<Snapshot> snapshot_sequence(const Scenario& sc);

}  // namespace wigcur
