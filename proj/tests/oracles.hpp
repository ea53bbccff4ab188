#pragma once

// Test-only oracles, kept independent of the corridor implementation they
// cross-check: lift counting by brute word-ball enumeration, and seeded
// generators for isometry and group-element samples.

#include <cmath>
#include <random>
#include <vector>

#include "gcdual/boundary.hpp"
#include "gcdual/curves.hpp"

namespace oracles {

using namespace gcdual;

// Distinct geodesic translates of axis(root(b)) crossing a fundamental
// segment of axis(a), enumerated over the word ball. Reliable for small
// configurations only (global coordinates lose precision on far
// translates; dedup tolerance is coarse accordingly).
inline long long naive_lift_count(const Group& g, const GroupElement& ga,
                                  const GroupElement& gb, int L, bool right_only = false) {
  auto s = g.best_rotation_for_axis(ga);
  Axis ax = g.axis(s);
  double ell = ax.length;
  Isometry F = frame_for_geodesic(ax.repelling, ax.attracting);
  auto [root, mult] = g.primitive_root(gb);
  auto rb = g.best_rotation_for_axis(root);
  Axis axb = g.axis(rb);
  std::vector<std::pair<double, double>> seen;
  long long count = 0;
  const double t0 = 0.33731;
  g.ball(L, [&](const GroupElement& u) {
    BoundaryPoint e1 = u.iso.apply(axb.repelling), e2 = u.iso.apply(axb.attracting);
    BoundaryPoint f1 = F.apply(e1), f2 = F.apply(e2);
    if (f1.is_inf() || f2.is_inf()) return;
    double v1 = f1.value(), v2 = f2.value();
    if (std::min(std::fabs(v1), std::fabs(v2)) < 1e-5) return;
    if (v1 * v2 >= 0) return;
    if (right_only && !(v2 < 0 && v1 > 0)) return;
    double t = 0.5 * std::log(-v1 * v2);
    double u2 = 0.5 * (std::log(std::fabs(v1)) - std::log(std::fabs(v2)));
    double k = std::floor((t - t0) / ell);
    double tm = t - k * ell;
    for (auto& [pt, pu] : seen)
      if (std::fabs(pt - tm) < 1e-3 && std::fabs(pu - u2) < 1e-3) return;
    seen.push_back({tm, u2});
    count++;
  });
  return count * mult;
}

// Random hyperbolic isometries with bounded translation length.
inline Isometry random_hyperbolic(std::mt19937_64& rng, double max_half_length = 1.5) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (;;) {
    double l = 0.3 + (uni(rng) + 1.0) * max_half_length / 2.0;
    Isometry t(std::exp(l), 0, 0, std::exp(-l));
    double a = uni(rng) * 2, b = uni(rng) * 2, c = uni(rng) * 2;
    double d = (1 + b * c) / (a == 0 ? 1e-3 : a);
    if (!std::isfinite(d) || std::fabs(d) > 20) continue;
    try {
      Isometry k(a, b, c, d);
      return compose(compose(k, t), k.inverse());
    } catch (const GcdError&) {
      continue;
    }
  }
}

struct IsometryPair {
  Isometry g, h;
  PairClass cls;
};

inline IsometryPair random_pair_of_class(std::mt19937_64& rng, bool crossing,
                                         double max_half_length = 1.5) {
  for (;;) {
    Isometry g = random_hyperbolic(rng, max_half_length);
    Isometry h = random_hyperbolic(rng, max_half_length);
    try {
      PairClass c = classify_axes(axis_of(g), axis_of(h));
      if (crossing == is_crossing(c)) return {g, h, c};
    } catch (const GcdError&) {
    }
  }
}

// Nontrivial conjugacy-class representatives of ball(L).
inline std::vector<GroupElement> class_sample(const Group& g, int L) {
  std::vector<GroupElement> out;
  for (const auto& r : g.class_representatives(L))
    if (!r.is_identity()) out.push_back(r);
  return out;
}

}  // namespace oracles
