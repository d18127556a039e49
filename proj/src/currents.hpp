#pragma once

#include "gaussian_states.hpp"
#include "phase_grid.hpp"

namespace wigcur {

// Squeezer drive: xi = chi^(2) |alpha| in inverse effective time, pump phase
// theta. The optical frequency omega0 is fixed to 1 by the unit convention.
struct SystemParams {
  double xi = 0.0;
  double theta = kHalfPi;
};

// Reservoir coupling: energy damping rate gamma, mean occupation n_bar.
struct EnvParams {
  double gamma = 0.0;
  double n_bar = 0.0;
};

void validate_env(const EnvParams& ep);

// Ideal squeezer current
//   J = xi * (x W cos(theta) + p W sin(theta),
//             x W sin(theta) - p W cos(theta)),
// which reduces to xi * (p W, x W) at theta = pi/2. Vanishes at the origin
// for every theta.
VectorField j_sys(const ScalarField& w, const SystemParams& sp);

// Dissipative pull toward the origin: J = -(gamma/2) W (x, p).
VectorField j_damp(const ScalarField& w, const EnvParams& ep);

// Diffusive push along -grad W: J = -(gamma/2)(n_bar + 1/2)(dW/dx, dW/dp).
// Uses the analytic gradient when w carries Gaussian provenance, forward
// lattice differences otherwise.
VectorField j_diff(const ScalarField& w, const EnvParams& ep);

// j_damp + j_diff, summed pointwise.
VectorField j_env(const ScalarField& w, const EnvParams& ep);

// (w_next - w_t)/d_tau + div(j), pointwise.
ScalarField continuity_residual(const ScalarField& w_t, const ScalarField& w_next,
                                const VectorField& j, double d_tau);

}  // namespace wigcur
