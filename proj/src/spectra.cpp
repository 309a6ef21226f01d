#include "polyfreq/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "polyfreq/errors.hpp"
#include "polyfreq/parallel.hpp"
#include "polyfreq/shape_derivatives.hpp"

namespace polyfreq {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rectangle_lambda(double L, double l) {
  if (!(L > 0.0) || !(l > 0.0)) throw DomainError("rectangle sides must be positive");
  return kPi * kPi * (1.0 / (L * L) + 1.0 / (l * l));
}

double equilateral_triangle_lambda(double A) {
  if (!(A > 0.0)) throw DomainError("area must be positive");
  return 4.0 * kPi * kPi / (A * std::sqrt(3.0));
}

SeriesReconstruction reconstruct_series(const Polygon& p, int K, const SeriesOptions& opt) {
  const FlowTrace tr = run_flow(p, opt.flow_max_iter, opt.flow_tol);
  if (!tr.converged) throw NoConvergence("flow did not reach the equilateral tolerance");
  SeriesReconstruction rec;
  rec.flow_steps = static_cast<int>(tr.offsets.size());
  rec.direct_lambda = solve_lambda1(p, opt.refine, opt.mesh).lambda1;
  rec.lambda_limit = solve_lambda1(tr.polygons.back(), opt.refine, opt.mesh).lambda1;
  const double diam = diameter(p);
  const int steps = static_cast<int>(tr.offsets.size());
  const int kept = std::min(K, steps);
  for (int j = kept; j < steps; ++j) rec.tail_t2 += tr.offsets[j] * tr.offsets[j];
  rec.terms.resize(kept);
  // terms are independent solves; the partial sums are accumulated afterwards
  parallel_for(static_cast<std::size_t>(kept), opt.jobs, [&](std::size_t idx) {
    const int j = static_cast<int>(idx);
    SeriesTerm& term = rec.terms[idx];
    term.k = j + 2;
    term.t = tr.offsets[j];
    if (tr.skipped[j] || term.t <= opt.negligible_rel * diam) return;
    const SymmetrizationFrame& f = tr.frames[j];
    const Polygon& sym = tr.polygons[j + 1];
    const EigenSolution s0 = solve_lambda1(sym, opt.refine, opt.mesh);
    term.alpha = dlambda_dt(s0, f);
    const double tm = 0.5 * term.t;
    const EigenSolution sm = solve_lambda1(f.polygon_at(sym, tm), opt.refine, opt.mesh);
    term.beta = d2lambda_dt2(sm, f, tm);
  });
  double sum = rec.lambda_limit;
  for (int j = 0; j < kept; ++j) {
    SeriesTerm& term = rec.terms[j];
    if (tr.skipped[j] || term.t <= opt.negligible_rel * diam) ++rec.skipped_negligible;
    else sum += term.alpha * term.t + 0.5 * term.beta * term.t * term.t;
    term.partial_sum = sum;
    term.rel_gap = std::abs(sum - rec.direct_lambda) / rec.direct_lambda;
  }
  rec.lambda_rec = sum;
  rec.rel_gap = std::abs(sum - rec.direct_lambda) / rec.direct_lambda;
  return rec;
}

std::vector<PositivityTerm> positivity_terms(const FlowTrace& tr, int max_steps, double min_t, int refine,
                                             const MeshOptions& mesh) {
  std::vector<PositivityTerm> out;
  const int steps = std::min<int>(max_steps, static_cast<int>(tr.offsets.size()));
  for (int j = 0; j < steps; ++j) {
    const double t = tr.offsets[j];
    if (tr.skipped[j] || t <= min_t) continue;
    const SymmetrizationFrame& f = tr.frames[j];
    const EigenSolution s0 = solve_lambda1(tr.polygons[j + 1], refine, mesh);
    PositivityTerm pt;
    pt.k = j + 2;
    pt.t = t;
    pt.alpha = dlambda_dt(s0, f);
    pt.beta0 = d2lambda_dt2(s0, f, 0.0);
    pt.value = pt.alpha * t + pt.beta0 * t * t / 7.0;
    out.push_back(pt);
  }
  return out;
}

IsoscelesCoefficient isosceles_quadratic_coefficient(const Polygon& tri, int refine, const MeshOptions& mesh) {
  if (tri.size() != 3) throw DomainError("isosceles coefficient needs a triangle");
  std::size_t j = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double l = (tri[k + 1] - tri[k]).norm();
    if (l > best + 1e-14 * l) {
      best = l;
      j = k;
    }
  }
  IsoscelesCoefficient out;
  out.apex = (j + 2) % 3;
  const Point B = tri[out.apex];
  Point A = tri[j], C = tri[j + 1];
  if ((A - B).norm() > (C - B).norm()) std::swap(A, C);
  const double b = (C - A).norm();
  out.t = 0.5 * b - (B - A).dot(C - A) / b;

  const StepResult st = symmetrize_step(tri, (j + 1) % 3);
  out.iso = st.polygon;
  const EigenSolution sol = solve_lambda1(out.iso, refine, mesh);
  out.lambda_iso = sol.lambda1;
  const double rho = area(tri);
  const double xi = 2.0 * rho / b;
  const double denom = 0.25 * b * b + xi * xi;
  const GradientTrace up = boundary_gradient_trace(sol, st.frame, Side::Upper);
  out.alpha1 = b * b / (rho * denom) * up.moment(1);
  out.grad_sup = up.sup();
  out.quick_bound = out.grad_sup * out.grad_sup * 2.0 * rho / denom;
  return out;
}

}  // namespace polyfreq
