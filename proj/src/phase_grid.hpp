#pragma once

#include <memory>
#include <vector>

namespace wigcur {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double p = 0.0;
};

// Symmetric 2x2 matrix over the (x, p) quadratures. Every matrix this
// toolkit needs (covariances, hyperbolic-plus-isotropic drifts, diffusion)
// is symmetric, so the off-diagonal is stored once.
struct Mat2 {
  double xx = 0.0;
  double xp = 0.0;
  double pp = 0.0;

  double det() const { return xx * pp - xp * xp; }
  double trace() const { return xx + pp; }
};

Mat2 mat2_inverse(const Mat2& m);
// R(phi) * m * R(phi)^T with R the counterclockwise rotation by phi.
Mat2 mat2_rotated(const Mat2& m, double phi);
Vec2 mat2_apply(const Mat2& m, const Vec2& v);

// Rectangular phase-space lattice in dimensionless quadrature units
// (hbar = omega0 = 1, vacuum variance 1/2). Storage layout across the whole
// toolkit is row-major with x as the outer index: k = ix * np + ip.
struct Grid {
  int nx = 0;
  int np = 0;
  double x_min = 0.0, x_max = 0.0;
  double p_min = 0.0, p_max = 0.0;
  double hx = 0.0, hp = 0.0;

  int size() const { return nx * np; }
  int index(int ix, int ip) const { return ix * np + ip; }
  double x(int ix) const { return x_min + hx * ix; }
  double p(int ip) const { return p_min + hp * ip; }
  bool same_lattice(const Grid& o) const;
};

// Symmetric grid about the origin; odd nx/np place a lattice point at (0,0).
Grid make_grid(int nx, int np, double x_half, double p_half);

struct FieldProvenance;  // defined with the Gaussian-state machinery

struct ScalarField {
  Grid grid;
  std::vector<double> values;  // length nx*np, row-major (x outer)
  // Set when the field was rendered from Gaussian components; consumers may
  // then use analytic gradients instead of lattice differences.
  std::shared_ptr<const FieldProvenance> provenance;

  double& at(int ix, int ip) { return values[grid.index(ix, ip)]; }
  double at(int ix, int ip) const { return values[grid.index(ix, ip)]; }
};

struct VectorField {
  Grid grid;
  std::vector<double> jx;
  std::vector<double> jp;
};

ScalarField make_scalar_field(const Grid& g, double fill = 0.0);
VectorField make_vector_field(const Grid& g);

enum class Axis { kX, kP };

// Forward first difference along an axis. Fields are treated as identically
// zero outside the lattice, so the final slice differentiates against zero:
// (0 - f[last]) / h. This keeps the discrete divergence theorem exact for
// fields that decay to zero at the boundary.
ScalarField forward_diff(const ScalarField& f, Axis axis);

// forward_diff(jx, X) + forward_diff(jp, P), same padding rule.
ScalarField divergence(const VectorField& j);

// Trapezoidal 2-D integral, hx*hp weighted.
double quadrature_integral(const ScalarField& f);

void validate_finite(const ScalarField& f, const char* what);
void validate_finite(const VectorField& j, const char* what);

}  // namespace wigcur
