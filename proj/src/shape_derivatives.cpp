#include "polyfreq/shape_derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "polyfreq/errors.hpp"

namespace polyfreq {

double velocity_field(const SymmetrizationFrame& frame, Side side, double alpha, double t) {
  const double h = 0.5 * frame.b;
  if (side == Side::Upper) return alpha / std::hypot(frame.xi, h - t);
  return -alpha / std::hypot(frame.xi, h + t);
}

double dlambda_dt(const EigenSolution& sol, const SymmetrizationFrame& frame) {
  const GradientTrace up = boundary_gradient_trace(sol, frame, Side::Upper);
  const GradientTrace lo = boundary_gradient_trace(sol, frame, Side::Lower);
  return (lo.moment(1) - up.moment(1)) / frame.xi;
}

double d2lambda_dt2(const EigenSolution& sol, const SymmetrizationFrame& frame, double t) {
  const double h = 0.5 * frame.b;
  if (!(t >= 0.0 && t < h)) throw DomainError("t must lie in [0, b/2)");
  const GradientTrace up = boundary_gradient_trace(sol, frame, Side::Upper);
  const GradientTrace lo = boundary_gradient_trace(sol, frame, Side::Lower);
  const double xi = frame.xi;
  const double cu = 2.0 * (h - t) / (xi * (xi * xi + (t - h) * (t - h)));
  const double cl = 2.0 * (h + t) / (xi * (xi * xi + (t + h) * (t + h)));
  return cu * up.moment(1) + cl * lo.moment(1);
}

Mesh transport_mesh(const Mesh& mesh, const SymmetrizationFrame& frame, double t, double dt) {
  const Polygon moved = frame.polygon_at(mesh.polygon, t + dt);
  return mesh.transported(moved, [&](const Point& x) {
    const double w = std::clamp(frame.to_frame(x).x() / frame.xi, 0.0, 1.0);
    return Point(dt * w * frame.ey);
  });
}

namespace {

double lambda_of(Mesh mesh) { return solve_lambda1(std::make_shared<const Mesh>(std::move(mesh))).lambda1; }

void fill_errors(DerivativeReport& r, double diam) {
  r.rel_err_1 = std::abs(r.dlambda_dt - r.fd_dlambda) / std::max(std::abs(r.fd_dlambda), 0.1 * r.lambda / diam);
  r.rel_err_2 = std::abs(r.d2lambda_dt2 - r.fd_d2lambda) / std::abs(r.fd_d2lambda);
}

}  // namespace

DerivativeReport derivative_report(const Polygon& p, const SymmetrizationFrame& frame, double t,
                                   const FdOptions& opt, bool fd) {
  const Polygon pt = frame.polygon_at(p, t);
  auto mesh = std::make_shared<const Mesh>(triangulate(pt, opt.level, opt.mesh));
  const EigenSolution sol = solve_lambda1(mesh);
  DerivativeReport r;
  r.lambda = sol.lambda1;
  r.t_eval = t;
  r.dlambda_dt = dlambda_dt(sol, frame);
  r.d2lambda_dt2 = d2lambda_dt2(sol, frame, t);
  if (!fd) return r;
  const double diam = diameter(pt);
  const double h1 = opt.h1_rel * diam, h2 = opt.h2_rel * diam;
  const double lp1 = lambda_of(transport_mesh(*mesh, frame, t, h1));
  const double lm1 = lambda_of(transport_mesh(*mesh, frame, t, -h1));
  const double lp2 = lambda_of(transport_mesh(*mesh, frame, t, h2));
  const double lm2 = lambda_of(transport_mesh(*mesh, frame, t, -h2));
  r.has_fd = true;
  r.fd_dlambda = (lp1 - lm1) / (2.0 * h1);
  r.fd_d2lambda = (lp2 - 2.0 * sol.lambda1 + lm2) / (h2 * h2);
  fill_errors(r, diam);
  return r;
}

Point ShearFrame::to_frame(const Point& p) const {
  const Point d = p - origin;
  return {d.dot(ex), d.dot(ey)};
}

Polygon ShearFrame::polygon_at(double tt) const {
  std::vector<Point> v(4);
  v[0] = origin;
  v[1] = origin + xi * ex - tt * ey;
  v[2] = origin + xi * ex + (half_b - tt) * ey;
  v[3] = origin + half_b * ey;
  return Polygon(std::move(v));
}

ShearFrame make_shear_frame(const Polygon& p) {
  if (p.size() != 4) throw FrameMismatch("shear frame needs a quadrilateral");
  const double diam = diameter(p);
  if ((p[2] - p[1] - (p[3] - p[0])).norm() > 1e-9 * diam)
    throw FrameMismatch("quadrilateral is not a parallelogram");
  for (std::size_t k = 0; k < 4; ++k) {
    ShearFrame f;
    f.first = k;
    f.origin = p[k];
    const Point left = p.vertex(static_cast<long>(k) - 1) - p[k];
    f.half_b = left.norm();
    f.ey = left / f.half_b;
    const Point d = p[k + 1] - p[k];
    const Point perp = d - d.dot(f.ey) * f.ey;
    f.xi = perp.norm();
    f.ex = perp / f.xi;
    f.t = -d.dot(f.ey);
    if (f.t >= -1e-14 * diam) {
      f.t = std::max(f.t, 0.0);
      return f;
    }
  }
  throw FrameMismatch("no admissible shear labeling");
}

namespace {

GradientTrace shear_trace(const EigenSolution& sol, const ShearFrame& f, bool upper) {
  const std::size_t n = sol.mesh->polygon.size();
  const int edge = static_cast<int>(upper ? (f.first + 2) % n : f.first);
  GradientTrace tr;
  for (const auto& e : sol.mesh->boundary_edges) {
    if (e.poly_edge != edge) continue;
    TraceSample s;
    double a0 = f.to_frame(sol.mesh->nodes[e.a]).x(), a1 = f.to_frame(sol.mesh->nodes[e.b]).x();
    if (a0 > a1) std::swap(a0, a1);
    s.alpha_lo = a0;
    s.alpha_hi = a1;
    s.alpha_mid = 0.5 * (a0 + a1);
    s.g = sol.gradient(e.triangle).norm();
    s.length = (sol.mesh->nodes[e.a] - sol.mesh->nodes[e.b]).norm();
    tr.samples.push_back(s);
  }
  if (tr.samples.empty()) throw FrameMismatch("shear segment carries no boundary edges");
  return tr;
}

Mesh shear_transport(const Mesh& mesh, const ShearFrame& f, double t, double dt) {
  return mesh.transported(f.polygon_at(t + dt), [&](const Point& x) {
    const double w = std::clamp(f.to_frame(x).x() / f.xi, 0.0, 1.0);
    return Point(-dt * w * f.ey);
  });
}

}  // namespace

DerivativeReport rhombus_rectangle_derivatives(const EigenSolution& sol, const ShearFrame& f) {
  const double diff = shear_trace(sol, f, true).moment(1) - shear_trace(sol, f, false).moment(1);
  DerivativeReport r;
  r.lambda = sol.lambda1;
  r.t_eval = f.t;
  r.dlambda_dt = diff / f.xi;
  r.d2lambda_dt2 = 2.0 * f.t / (f.xi * (f.xi * f.xi + f.t * f.t)) * diff;
  return r;
}

DerivativeReport rhombus_rectangle_report(const Polygon& p, const FdOptions& opt, bool fd) {
  const ShearFrame f = make_shear_frame(p);
  auto mesh = std::make_shared<const Mesh>(triangulate(f.polygon_at(f.t), opt.level, opt.mesh));
  const EigenSolution sol = solve_lambda1(mesh);
  DerivativeReport r = rhombus_rectangle_derivatives(sol, f);
  if (!fd) return r;
  const double diam = diameter(p);
  const double h1 = opt.h1_rel * diam, h2 = opt.h2_rel * diam;
  const double lp1 = lambda_of(shear_transport(*mesh, f, f.t, h1));
  const double lm1 = lambda_of(shear_transport(*mesh, f, f.t, -h1));
  const double lp2 = lambda_of(shear_transport(*mesh, f, f.t, h2));
  const double lm2 = lambda_of(shear_transport(*mesh, f, f.t, -h2));
  r.has_fd = true;
  r.fd_dlambda = (lp1 - lm1) / (2.0 * h1);
  r.fd_d2lambda = (lp2 - 2.0 * sol.lambda1 + lm2) / (h2 * h2);
  fill_errors(r, diam);
  return r;
}

ShearSweep shear_sweep(const Polygon& rectangle, const std::vector<double>& t_values, int level) {
  const ShearFrame f = make_shear_frame(rectangle);
  const Mesh base = triangulate(f.polygon_at(0.0), level);
  ShearSweep sw;
  sw.lambda_rectangle = lambda_of(base);
  for (double t : t_values) {
    sw.t.push_back(t);
    sw.dlambda.push_back(lambda_of(shear_transport(base, f, 0.0, t)) - sw.lambda_rectangle);
  }
  sw.exponent = loglog_slope(sw.t, sw.dlambda);
  return sw;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace polyfreq
