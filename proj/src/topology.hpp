#pragma once

#include <stdexcept>
#include <vector>

#include "phase_grid.hpp"

namespace wigcur {

struct WindingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed circular loop, sampled as a polygon; must lie strictly inside the
// grid so the current can be bilinearly interpolated everywhere on it.
struct Loop {
  Vec2 center;
  double radius = 0.0;
  int samples = 64;
};

// Net rotations of J's orientation around the loop: wrapped increments of
// atan2(Jp, Jx) summed over the polygon, divided by 2 pi, rounded to the
// nearest integer. J is interpolated componentwise (never the angle itself,
// which would break across the atan2 branch cut). Throws WindingError when a
// loop sample sits on a stagnation point (|J| <= 1e-12 max|J|) or when the
// pre-rounding value strays more than 0.05 from an integer.
int winding_number(const VectorField& j, const Loop& loop);

struct StagnationPoint {
  double x = 0.0;
  double p = 0.0;
  int charge = 0;
};

struct StagnationReport {
  std::vector<StagnationPoint> points;
  double field_norm_floor = 0.0;
  bool whole_grid_below_floor = false;
};

// Flags cells where both components change sign or |J| drops below
// floor_frac * max|J|, clusters them, and assigns each interior cluster the
// winding number of a loop of radius 3 max(hx, hp) around its centroid.
// Clusters touching the grid boundary (the decaying tails of any localized
// current) are not reported as points.
StagnationReport find_stagnation_points(const VectorField& j, double floor_frac);

}  // namespace wigcur
