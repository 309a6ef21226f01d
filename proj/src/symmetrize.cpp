#include "polyfreq/symmetrize.hpp"

#include <cmath>
#include <limits>

#include "polyfreq/errors.hpp"

namespace polyfreq {

Point SymmetrizationFrame::to_frame(const Point& p) const {
  const Point d = p - m;
  return {d.dot(axis), d.dot(ey)};
}

Point SymmetrizationFrame::from_frame(double x, double y) const { return m + x * axis + y * ey; }

Polygon SymmetrizationFrame::polygon_at(const Polygon& p, double t) const {
  std::vector<Point> v(p.vertices());
  v[(index + 1) % v.size()] = from_frame(xi, t);
  return Polygon(std::move(v));
}

SymmetrizationFrame make_frame(const Polygon& p, std::size_t i) {
  SymmetrizationFrame f;
  f.index = i % p.size();
  f.v1 = p[f.index];
  f.v2 = p[f.index + 1];
  f.v3 = p[f.index + 2];
  const Point d13 = f.v1 - f.v3;
  const double cr = d13.x() * (f.v2 - f.v3).y() - d13.y() * (f.v2 - f.v3).x();
  const double diam = diameter(p);
  if (std::abs(cr) <= 1e-12 * diam * diam)
    throw DegenerateTriangle("vertices " + std::to_string(f.index) + ".." + std::to_string(f.index + 2) +
                             " are collinear");
  f.m = 0.5 * (f.v1 + f.v3);
  f.b = d13.norm();
  const Point u = d13 / f.b;
  const Point rel = f.v2 - f.m;
  const double along = rel.dot(u);
  const Point perp = rel - along * u;
  f.xi = perp.norm();
  f.axis = perp / f.xi;
  f.ey = along >= 0.0 ? u : Point(-u);
  f.t_star = std::abs(along);
  return f;
}

double perimeter_change(double b, double xi, double t) {
  const double h = 0.5 * b;
  return std::hypot(h - t, xi) + std::hypot(h + t, xi) - 2.0 * std::hypot(h, xi);
}

StepResult symmetrize_step(const Polygon& p, std::size_t i) {
  const SymmetrizationFrame f = make_frame(p, i);
  Polygon out;
  try {
    out = f.polygon_at(p, 0.0);
  } catch (const InvalidPolygon& e) {
    throw StepRejected("step at vertex " + std::to_string(f.index) + ": " + e.what());
  }
  if (is_convex(p) && !is_convex(out))
    throw StepRejected("step at vertex " + std::to_string(f.index) + " breaks convexity");
  return {std::move(out), f};
}

FlowTrace run_flow(const Polygon& p, int max_iter, double tol, Schedule schedule) {
  FlowTrace tr;
  tr.polygons.push_back(p);
  tr.perimeters.push_back(perimeter(p));
  tr.areas.push_back(area(p));
  tr.side_deviation.push_back(max_side_deviation(p));
  const std::size_t n = p.size();
  std::size_t i = 0;
  for (int k = 0;; ++k) {
    if (tr.side_deviation.back() < tol) {
      tr.converged = true;
      tr.iterations_to_converge = k;
      break;
    }
    if (k >= max_iter) break;
    const Polygon& cur = tr.polygons.back();
    if (schedule == Schedule::LargestFirst) {
      double best = -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        try {
          const double t = make_frame(cur, j).t_star;
          if (t > best) {
            best = t;
            i = j;
          }
        } catch (const DegenerateTriangle&) {
        }
      }
    }
    try {
      StepResult st = symmetrize_step(cur, i);
      tr.offsets.push_back(st.frame.t_star);
      tr.frames.push_back(st.frame);
      tr.skipped.push_back(false);
      tr.polygons.push_back(std::move(st.polygon));
    } catch (const Error& e) {
      if (!dynamic_cast<const StepRejected*>(&e) && !dynamic_cast<const DegenerateTriangle*>(&e)) throw;
      SymmetrizationFrame f;
      f.index = i;
      tr.offsets.push_back(0.0);
      tr.frames.push_back(f);
      tr.skipped.push_back(true);
      tr.polygons.push_back(cur);
    }
    tr.perimeters.push_back(perimeter(tr.polygons.back()));
    tr.areas.push_back(area(tr.polygons.back()));
    tr.side_deviation.push_back(max_side_deviation(tr.polygons.back()));
    if (schedule == Schedule::Cyclic) i = (i + 1) % n;
  }
  return tr;
}

RateMembership rate_membership(const FlowTrace& trace, double alpha_rate) {
  RateMembership rm;
  const auto& t = trace.offsets;
  const double diam = diameter(trace.polygons.front());
  const double eps = 1e-12 * diam;
  std::vector<double> tail(t.size() + 1, 0.0);
  for (std::size_t j = t.size(); j-- > 0;) tail[j] = tail[j + 1] + t[j] * t[j];
  double c_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] <= eps || trace.skipped[j]) continue;
    const auto& f = trace.frames[j];
    c_min = std::min(c_min, perimeter_change(f.b, f.xi, t[j]) / (t[j] * t[j]));
  }
  for (std::size_t k = 1; k <= t.size(); ++k) {
    if (t[k - 1] <= eps) continue;
    const double r = tail[k] / (t[k - 1] * t[k - 1]);
    rm.k.push_back(static_cast<int>(k));
    rm.ratio.push_back(r);
    rm.member.push_back(r <= alpha_rate);
    rm.all_members = rm.all_members && r <= alpha_rate;
  }
  const Polygon& last = trace.polygons.back();
  const double l_reg = perimeter(regular_polygon_with_area(static_cast<int>(last.size()), area(last)));
  rm.tail_bound = std::isfinite(c_min) ? std::max(0.0, perimeter(last) - l_reg) / c_min : 0.0;
  return rm;
}

double triangle_side_map(double s, double a) {
  if (!(s > 0.0) || !(a > 0.0)) throw DomainError("triangle_side_map needs s > 0 and A > 0");
  return 0.25 * s + 4.0 * a * a / s;
}

double triangle_side_map_derivative(double s, double a) {
  if (!(s > 0.0) || !(a > 0.0)) throw DomainError("triangle_side_map needs s > 0 and A > 0");
  return 0.25 - 4.0 * a * a / (s * s);
}

}  // namespace polyfreq
