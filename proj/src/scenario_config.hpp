#pragma once

#include <stdexcept>
#include <string>

#include "evolution.hpp"
#include "reconstruction.hpp"

namespace wigcur {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TopologyParams {
  double floor_frac = 1e-3;
  double loop_radius_cells = 3.0;
  int loop_samples = 64;
};

// Display scale factors recorded in exported field headers. Metadata only;
// stored values stay unscaled.
struct DisplayScales {
  double env = 1.0;
  double damp = 1.0;
  double diff = 1.0;
};

struct RunConfig {
  Scenario scenario;
  NoiseModel noise;
  SolveOptions solve;
  bool run_zero = true;
  bool run_fitted = true;
  TopologyParams topology;
  DisplayScales display;
};

// Flat sectioned key=value text:
//   [grid]           nx, np, x_half, p_half
//   [pump]           power_start_mw, power_step_mw, power_steps, k_cal, theta
//   [environment]    gamma, n_bar, weight_policy (fitted|fixed), weights
//   [noise]          eta, theta_rms
//   [reconstruction] init_modes (zero,fitted), dense_column_limit,
//                    display_scale_env/damp/diff
//   [topology]       floor_frac, loop_radius_cells, loop_samples
// Unknown sections or keys and missing required keys raise ConfigError with
// the offending key path.
RunConfig load_run_config(const std::string& path);

}  // namespace wigcur
