#pragma once

#include <cstddef>
#include <vector>

#include "polyfreq/geometry.hpp"

namespace polyfreq {

/// Local frame of a symmetrization step at vertices v1 = P[i], v2 = P[i+1],
/// v3 = P[i+2].
///
/// Frame coordinates put the midpoint m of v1v3 at the origin, the first axis
/// along `axis` (perpendicular to v1v3, toward v2) and the second along `ey`
/// (parallel to v1v3). `ey` is oriented so that v2 sits at (xi, t_star) with
/// t_star >= 0; the endpoint at (0, b/2) is the "upper" one.
struct SymmetrizationFrame {
  std::size_t index = 0;
  Point v1, v2, v3;
  Point m;
  Point axis;
  Point ey;
  double xi = 0.0;
  double b = 0.0;
  double t_star = 0.0;

  Point to_frame(const Point& p) const;
  Point from_frame(double x, double y) const;
  /// Endpoint of the upper (y = b/2) or lower (y = -b/2) segment on line v1v3.
  Point upper_end() const { return from_frame(0.0, 0.5 * b); }
  Point lower_end() const { return from_frame(0.0, -0.5 * b); }
  /// `p` with its vertex index+1 placed at frame position (xi, t).
  Polygon polygon_at(const Polygon& p, double t) const;
};

SymmetrizationFrame make_frame(const Polygon& p, std::size_t i);

/// phi(t) = sqrt((b/2-t)^2+xi^2) + sqrt((b/2+t)^2+xi^2) - 2 sqrt((b/2)^2+xi^2).
double perimeter_change(double b, double xi, double t);

struct StepResult {
  Polygon polygon;
  SymmetrizationFrame frame;
};

/// Replaces vertex i+1 by its symmetric position on the perpendicular
/// bisector of v1v3, keeping the triangle area.
StepResult symmetrize_step(const Polygon& p, std::size_t i);

enum class Schedule { Cyclic, LargestFirst };

struct FlowTrace {
  std::vector<Polygon> polygons;               // P^1 .. P^K
  std::vector<double> offsets;                 // t_k: offset of the step P^k -> P^{k+1}
  std::vector<SymmetrizationFrame> frames;     // frame of each step, built on P^k
  std::vector<bool> skipped;                   // step rejected and skipped
  std::vector<double> perimeters;
  std::vector<double> areas;
  std::vector<double> side_deviation;
  bool converged = false;
  int iterations_to_converge = -1;
};

/// Iterates P^{k+1} = (P^k)* until the maximal relative side deviation drops
/// below `tol` or `max_iter` steps are taken.
FlowTrace run_flow(const Polygon& p, int max_iter = 1000, double tol = 1e-8,
                   Schedule schedule = Schedule::Cyclic);

struct RateMembership {
  std::vector<int> k;            // step index with t_{k-1} > 0
  std::vector<double> ratio;     // sum_{j >= k} t_j^2 / t_{k-1}^2 over the observed trace
  std::vector<bool> member;      // ratio <= alpha_rate
  double tail_bound = 0.0;       // bound on sum of t_j^2 beyond the trace end
  bool all_members = true;
};

/// Tail-sum test sum_{j>=k} t_j^2 <= alpha_rate t_{k-1}^2 along a trace.
///
/// `tail_bound` bounds the unobserved tail by (L(P^K) - L_reg) / c_min, where
/// c_min is the smallest curvature factor phi(t)/t^2 seen along the trace.
RateMembership rate_membership(const FlowTrace& trace, double alpha_rate);

/// s/4 + 4A^2/s acting on squared side lengths.
double triangle_side_map(double s, double a);
double triangle_side_map_derivative(double s, double a);

}  // namespace polyfreq
