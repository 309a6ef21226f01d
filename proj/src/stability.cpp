#include "polyfreq/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyfreq/errors.hpp"
#include "polyfreq/shape_derivatives.hpp"
#include "polyfreq/spectra.hpp"

namespace polyfreq {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);
}  // namespace

TriangleDeficits deficits(const Polygon& t, int refine, Reference ref) {
  if (t.size() != 3) throw DomainError("deficits are defined for triangles");
  const double d = diameter(t);
  const double a = area(t);
  if (a < 1e-10 * d * d) throw Degenerate("triangle area below 1e-10 diam^2");
  TriangleDeficits out;
  out.area = a;
  out.lambda = solve_lambda1(t, refine).lambda1;
  double ref_value = 4.0 * kPi * kPi / kSqrt3;
  if (ref == Reference::Matched) {
    const Polygon eq = regular_polygon_with_area(3, a);
    ref_value = a * solve_lambda1(eq, refine).lambda1;
  }
  out.delta_lambda = a * out.lambda - ref_value;
  const double L = perimeter(t);
  out.delta_p = L * L / (12.0 * kSqrt3 * a) - 1.0;
  return out;
}

StabilityExperiment equivalence_ratio_scan(const std::vector<Polygon>& samples, int refine, bool with_asymmetry) {
  StabilityExperiment ex;
  ex.family = "samples";
  ex.ratio_min = std::numeric_limits<double>::infinity();
  ex.ratio_max = -std::numeric_limits<double>::infinity();
  for (const auto& t : samples) {
    const TriangleDeficits d = deficits(t, refine, Reference::Matched);
    StabilitySample s;
    s.delta_lambda = d.delta_lambda;
    s.delta_p = d.delta_p;
    if (with_asymmetry) s.asymmetry = fraenkel_asymmetry(t, 3).value;
    s.ratio_defined = d.delta_p > 1e-12;
    s.ratio = s.ratio_defined ? d.delta_lambda / d.delta_p : std::numeric_limits<double>::quiet_NaN();
    if (s.ratio_defined) {
      ex.ratio_min = std::min(ex.ratio_min, s.ratio);
      ex.ratio_max = std::max(ex.ratio_max, s.ratio);
    }
    ex.samples.push_back(s);
  }
  return ex;
}

Polygon thin_isosceles(double a) {
  if (!(a > 0.0)) throw DomainError("a must be positive");
  return Polygon({{-a, 0.0}, {a, 0.0}, {0.0, 1.0 / a}});
}

std::vector<FamilyPoint> pi2_over_16_family(const std::vector<double>& a_values, double eps, int refine) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  std::vector<FamilyPoint> out;
  const double c = kPi * kPi / 16.0;
  for (double a : a_values) {
    FamilyPoint fp;
    fp.a = a;
    const Polygon t = thin_isosceles(a);
    auto mesh = std::make_shared<const Mesh>(triangulate(t, refine));
    fp.nodes = mesh->nodes.size();
    fp.lambda = solve_lambda1(mesh).lambda1;
    const double L = perimeter(t);
    fp.ratio = (fp.lambda - 4.0 * kPi * kPi / kSqrt3) / (L * L - 12.0 * kSqrt3);
    fp.bracket_lo = (1.0 - eps) * c;
    fp.bracket_hi = c / ((1.0 - eps) * (1.0 - eps));
    fp.lambda_outer = rectangle_lambda(2.0 * a, 1.0 / a);
    fp.lambda_inner = rectangle_lambda(2.0 * a * eps, (1.0 - eps) / a);
    fp.in_bracket = fp.ratio > fp.bracket_lo && fp.ratio < fp.bracket_hi;
    fp.sandwich = fp.lambda_outer < fp.lambda && fp.lambda < fp.lambda_inner;
    out.push_back(fp);
  }
  return out;
}

Polygon perturbed_equilateral(double t) {
  const Polygon eq = regular_polygon_with_area(3, 1.0, std::numbers::pi / 2.0);
  std::vector<Point> v(eq.vertices());
  const Point dir = (v[2] - v[1]).normalized();
  v[0] += t * dir;
  return Polygon(std::move(v));
}

SharpnessFit sharpness_exponent_fit(const std::vector<double>& t_values, int refine) {
  SharpnessFit fit;
  const Polygon eq = perturbed_equilateral(0.0);
  const double ref = area(eq) * solve_lambda1(eq, refine).lambda1;
  for (double t : t_values) {
    const Polygon p = perturbed_equilateral(t);
    fit.t.push_back(t);
    fit.asymmetry.push_back(fraenkel_asymmetry(p, 3).value);
    fit.delta_lambda.push_back(area(p) * solve_lambda1(p, refine).lambda1 - ref);
  }
  fit.exponent = loglog_slope(fit.asymmetry, fit.delta_lambda);
  fit.asym_slope = loglog_slope(fit.t, fit.asymmetry);
  fit.lambda_slope = loglog_slope(fit.t, fit.delta_lambda);
  return fit;
}

}  // namespace polyfreq
