#include "topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace wigcur {

namespace {

double max_norm(const VectorField& j) {
  double best = 0.0;
  for (size_t k = 0; k < j.jx.size(); ++k) {
    best = std::max(best, std::hypot(j.jx[k], j.jp[k]));
  }
  return best;
}

Vec2 bilinear(const VectorField& j, double x, double p) {
  const Grid& g = j.grid;
  double fx = (x - g.x_min) / g.hx;
  double fp = (p - g.p_min) / g.hp;
  int ix = static_cast<int>(std::floor(fx));
  int ip = static_cast<int>(std::floor(fp));
  ix = std::clamp(ix, 0, g.nx - 2);
  ip = std::clamp(ip, 0, g.np - 2);
  const double tx = fx - ix;
  const double tp = fp - ip;
  const int k00 = g.index(ix, ip);
  const int k10 = g.index(ix + 1, ip);
  const int k01 = g.index(ix, ip + 1);
  const int k11 = g.index(ix + 1, ip + 1);
  const double w00 = (1.0 - tx) * (1.0 - tp);
  const double w10 = tx * (1.0 - tp);
  const double w01 = (1.0 - tx) * tp;
  const double w11 = tx * tp;
  return Vec2{w00 * j.jx[k00] + w10 * j.jx[k10] + w01 * j.jx[k01] + w11 * j.jx[k11],
              w00 * j.jp[k00] + w10 * j.jp[k10] + w01 * j.jp[k01] + w11 * j.jp[k11]};
}

void validate_loop(const Grid& g, const Loop& loop) {
  if (!(loop.radius > 0.0)) throw std::invalid_argument("loop: radius must be > 0");
  if (loop.samples < 8) throw std::invalid_argument("loop: need at least 8 samples");
  if (!(loop.center.x - loop.radius > g.x_min) || !(loop.center.x + loop.radius < g.x_max) ||
      !(loop.center.p - loop.radius > g.p_min) || !(loop.center.p + loop.radius < g.p_max)) {
    throw std::invalid_argument("loop: must lie strictly inside the grid");
  }
}

}  // namespace

int winding_number(const VectorField& j, const Loop& loop) {
  validate_finite(j, "winding_number");
  validate_loop(j.grid, loop);
  const double floor = 1e-12 * max_norm(j);

  double prev_angle = 0.0;
  double first_angle = 0.0;
  double total = 0.0;
  for (int s = 0; s < loop.samples; ++s) {
    const double a = kTwoPi * s / loop.samples;
    const Vec2 v = bilinear(j, loop.center.x + loop.radius * std::cos(a),
                            loop.center.p + loop.radius * std::sin(a));
    const double norm = std::hypot(v.x, v.p);
    if (!(norm > floor)) {
      throw WindingError("winding_number: loop touches a stagnation region");
    }
    const double angle = std::atan2(v.p, v.x);
    if (s == 0) {
      first_angle = angle;
    } else {
      total += std::remainder(angle - prev_angle, kTwoPi);
    }
    prev_angle = angle;
  }
  total += std::remainder(first_angle - prev_angle, kTwoPi);

  const double w = total / kTwoPi;
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.05) {
    throw WindingError("winding_number: non-integer winding (under-sampled loop)");
  }
  return static_cast<int>(rounded);
}

StagnationReport find_stagnation_points(const VectorField& j, double floor_frac) {
  validate_finite(j, "find_stagnation_points");
  if (!(floor_frac > 0.0) || !(floor_frac < 1.0)) {
    throw std::invalid_argument("find_stagnation_points: floor_frac must lie in (0, 1)");
  }
  const Grid& g = j.grid;
  StagnationReport report;
  const double jmax = max_norm(j);
  report.field_norm_floor = floor_frac * jmax;
  if (jmax == 0.0) {
    report.whole_grid_below_floor = true;
    return report;
  }

  const int cx = g.nx - 1;
  const int cp = g.np - 1;
  std::vector<char> flagged(static_cast<size_t>(cx) * cp, 0);
  for (int ix = 0; ix < cx; ++ix) {
    for (int ip = 0; ip < cp; ++ip) {
      const int corners[4] = {g.index(ix, ip), g.index(ix + 1, ip), g.index(ix, ip + 1),
                              g.index(ix + 1, ip + 1)};
      double jx_min = j.jx[corners[0]], jx_max = jx_min;
      double jp_min = j.jp[corners[0]], jp_max = jp_min;
      double norm_min = std::hypot(j.jx[corners[0]], j.jp[corners[0]]);
      for (int c = 1; c < 4; ++c) {
        jx_min = std::min(jx_min, j.jx[corners[c]]);
        jx_max = std::max(jx_max, j.jx[corners[c]]);
        jp_min = std::min(jp_min, j.jp[corners[c]]);
        jp_max = std::max(jp_max, j.jp[corners[c]]);
        norm_min = std::min(norm_min, std::hypot(j.jx[corners[c]], j.jp[corners[c]]));
      }
      const bool sign_change = (jx_min <= 0.0 && jx_max >= 0.0) && (jp_min <= 0.0 && jp_max >= 0.0);
      if (sign_change || norm_min < report.field_norm_floor) {
        flagged[static_cast<size_t>(ix) * cp + ip] = 1;
      }
    }
  }

  std::vector<char> seen(flagged.size(), 0);
  size_t flagged_count = 0;
  for (char f : flagged) flagged_count += f;
  if (flagged_count == flagged.size()) report.whole_grid_below_floor = true;

  const double loop_radius = 3.0 * std::max(g.hx, g.hp);
  for (size_t start = 0; start < flagged.size(); ++start) {
    if (!flagged[start] || seen[start]) continue;
    // BFS over 4-connected flagged cells
    std::deque<int> queue{static_cast<int>(start)};
    seen[start] = 1;
    std::vector<int> cluster;
    bool touches_boundary = false;
    while (!queue.empty()) {
      const int cell = queue.front();
      queue.pop_front();
      cluster.push_back(cell);
      const int ix = cell / cp;
      const int ip = cell % cp;
      if (ix == 0 || ix == cx - 1 || ip == 0 || ip == cp - 1) touches_boundary = true;
      const int neighbors[4][2] = {{ix - 1, ip}, {ix + 1, ip}, {ix, ip - 1}, {ix, ip + 1}};
      for (const auto& nb : neighbors) {
        if (nb[0] < 0 || nb[0] >= cx || nb[1] < 0 || nb[1] >= cp) continue;
        const int nk = nb[0] * cp + nb[1];
        if (flagged[nk] && !seen[nk]) {
          seen[nk] = 1;
          queue.push_back(nk);
        }
      }
    }
    if (touches_boundary) continue;  // decaying tails, not an enclosed stagnation

    double sx = 0.0, sp = 0.0;
    for (int cell : cluster) {
      const int ix = cell / cp;
      const int ip = cell % cp;
      sx += g.x(ix) + 0.5 * g.hx;
      sp += g.p(ip) + 0.5 * g.hp;
    }
    StagnationPoint pt;
    pt.x = sx / cluster.size();
    pt.p = sp / cluster.size();
    try {
      pt.charge = winding_number(j, Loop{Vec2{pt.x, pt.p}, loop_radius, 64});
    } catch (const std::exception&) {
      continue;  // loop leaves the grid or rides another stagnation region
    }
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace wigcur
