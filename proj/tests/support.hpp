#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "polyfreq/geometry.hpp"

namespace polyfreq::testing {

/// Convex n-gon inscribed in a random ellipse, randomly rotated and shifted.
/// Consecutive angles are kept at least `min_gap` apart.
inline Polygon random_convex(std::mt19937_64& rng, int n, double min_gap = 0.15) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> ang;
  for (;;) {
    ang.clear();
    for (int i = 0; i < n; ++i) ang.push_back(two_pi * u(rng));
    std::sort(ang.begin(), ang.end());
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? ang[i + 1] - ang[i] : ang[0] + two_pi - ang[i];
      if (gap < min_gap) ok = false;
    }
    if (ok) break;
  }
  const double ax = 0.5 + u(rng), ay = 0.5 + u(rng);
  std::vector<Point> v;
  for (double a : ang) v.emplace_back(ax * std::cos(a), ay * std::sin(a));
  const Polygon p(std::move(v));
  return p.transformed(two_pi * u(rng), 1.0, Point(u(rng) - 0.5, u(rng) - 0.5));
}

/// Triangle with longest side / height at most `max_aspect`.
inline Polygon random_triangle(std::mt19937_64& rng, double max_aspect = 10.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Point> v{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const double a = std::abs(signed_area(v));
    double l = 0.0;
    for (int i = 0; i < 3; ++i) l = std::max(l, (v[(i + 1) % 3] - v[i]).norm());
    if (a < 1e-3) continue;
    if (l * l / (2.0 * a) > max_aspect) continue;
    return Polygon(std::move(v));
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace polyfreq::testing
