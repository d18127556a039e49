#include "phase_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wigcur {

Mat2 mat2_inverse(const Mat2& m) {
  const double d = m.det();
  if (std::abs(d) < 1e-300) {
    throw std::invalid_argument("mat2_inverse: singular matrix");
  }
  return Mat2{m.pp / d, -m.xp / d, m.xx / d};
}

Mat2 mat2_rotated(const Mat2& m, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // R * m * R^T with R = [[c, -s], [s, c]]
  const double a = m.xx, b = m.xp, d = m.pp;
  return Mat2{c * c * a - 2.0 * c * s * b + s * s * d,
              c * s * (a - d) + (c * c - s * s) * b,
              s * s * a + 2.0 * c * s * b + c * c * d};
}

Vec2 mat2_apply(const Mat2& m, const Vec2& v) {
  return Vec2{m.xx * v.x + m.xp * v.p, m.xp * v.x + m.pp * v.p};
}

bool Grid::same_lattice(const Grid& o) const {
  return nx == o.nx && np == o.np && x_min == o.x_min && x_max == o.x_max &&
         p_min == o.p_min && p_max == o.p_max;
}

Grid make_grid(int nx, int np, double x_half, double p_half) {
  if (nx < 4 || np < 4) {
    throw std::invalid_argument("make_grid: nx and np must be >= 4");
  }
  if (!(x_half > 0.0) || !(p_half > 0.0)) {
    throw std::invalid_argument("make_grid: extents must be positive");
  }
  Grid g;
  g.nx = nx;
  g.np = np;
  g.x_min = -x_half;
  g.x_max = x_half;
  g.p_min = -p_half;
  g.p_max = p_half;
  g.hx = (g.x_max - g.x_min) / (nx - 1);
  g.hp = (g.p_max - g.p_min) / (np - 1);
  return g;
}

ScalarField make_scalar_field(const Grid& g, double fill) {
  ScalarField f;
  f.grid = g;
  f.values.assign(static_cast<size_t>(g.size()), fill);
  return f;
}

VectorField make_vector_field(const Grid& g) {
  VectorField j;
  j.grid = g;
  j.jx.assign(static_cast<size_t>(g.size()), 0.0);
  j.jp.assign(static_cast<size_t>(g.size()), 0.0);
  return j;
}

ScalarField forward_diff(const ScalarField& f, Axis axis) {
  const Grid& g = f.grid;
  ScalarField out = make_scalar_field(g);
  if (axis == Axis::kX) {
    const double inv_h = 1.0 / g.hx;
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int ip = 0; ip < g.np; ++ip) {
        const double next = (ix + 1 < g.nx) ? f.at(ix + 1, ip) : 0.0;
        out.at(ix, ip) = (next - f.at(ix, ip)) * inv_h;
      }
    }
  } else {
    const double inv_h = 1.0 / g.hp;
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int ip = 0; ip < g.np; ++ip) {
        const double next = (ip + 1 < g.np) ? f.at(ix, ip + 1) : 0.0;
        out.at(ix, ip) = (next - f.at(ix, ip)) * inv_h;
      }
    }
  }
  return out;
}

ScalarField divergence(const VectorField& j) {
  ScalarField fx;
  fx.grid = j.grid;
  fx.values = j.jx;
  ScalarField fp;
  fp.grid = j.grid;
  fp.values = j.jp;
  ScalarField dx = forward_diff(fx, Axis::kX);
  const ScalarField dp = forward_diff(fp, Axis::kP);
  for (size_t k = 0; k < dx.values.size(); ++k) dx.values[k] += dp.values[k];
  return dx;
}

double quadrature_integral(const ScalarField& f) {
  const Grid& g = f.grid;
  double total = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int ip = 0; ip < g.np; ++ip) {
      const double wp = (ip == 0 || ip == g.np - 1) ? 0.5 : 1.0;
      row += wp * f.at(ix, ip);
    }
    total += wx * row;
  }
  return total * g.hx * g.hp;
}

void validate_finite(const ScalarField& f, const char* what) {
  if (f.values.size() != static_cast<size_t>(f.grid.size())) {
    throw std::invalid_argument(std::string(what) + ": value count does not match lattice");
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
  }
}

void validate_finite(const VectorField& j, const char* what) {
  const size_t n = static_cast<size_t>(j.grid.size());
  if (j.jx.size() != n || j.jp.size() != n) {
    throw std::invalid_argument(std::string(what) + ": component count does not match lattice");
  }
  for (size_t k = 0; k < n; ++k) {
    if (!std::isfinite(j.jx[k]) || !std::isfinite(j.jp[k])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
  }
}

}  // namespace wigcur
