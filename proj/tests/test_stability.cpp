#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "polyfreq/errors.hpp"
#include "polyfreq/manifold.hpp"
#include "polyfreq/spectra.hpp"
#include "polyfreq/stability.hpp"
#include "support.hpp"

using namespace polyfreq;
using polyfreq::testing::random_triangle;
using polyfreq::testing::rel;

namespace {
const double kPi = std::numbers::pi;
const double kQuarterPi2 = kPi * kPi / 16;
}  // namespace

TEST_CASE("equilateral triangle has zero deficits") {
  const TriangleDeficits d = deficits(regular_polygon_with_area(3, 2.0), 4, Reference::Matched);
  CHECK(std::abs(d.delta_lambda) < 1e-9);
  CHECK(std::abs(d.delta_p) < 1e-12);
}

TEST_CASE("isoperimetric deficit of the 3-4-5 triangle") {
  const TriangleDeficits d = deficits(Polygon({{0, 0}, {4, 0}, {0, 3}}), 2);
  // L^2 / (12 sqrt 3 |T|) - 1 = 144 / (72 sqrt 3) - 1
  CHECK(d.delta_p == doctest::Approx(2 / std::sqrt(3.0) - 1).epsilon(1e-14));
  CHECK(d.area == doctest::Approx(6.0));
}

TEST_CASE("deficits are scale and rigid-motion invariant") {
  const Polygon t({{0, 0}, {1.2, 0}, {0.3, 0.9}});
  const TriangleDeficits a = deficits(t, 4);
  const TriangleDeficits b = deficits(t.transformed(0.0, 3.0, Point::Zero()), 4);
  const TriangleDeficits c = deficits(t.transformed(2.1, 1.0, Point(-4, 7)), 4);
  CHECK(rel(a.delta_lambda, b.delta_lambda) < 1e-6);
  CHECK(rel(a.delta_p, b.delta_p) < 1e-12);
  CHECK(rel(a.delta_lambda, c.delta_lambda) < 1e-6);
  CHECK(rel(a.delta_p, c.delta_p) < 1e-12);
}

TEST_CASE("equilateral samples are flagged, not divided") {
  const StabilityExperiment e = equivalence_ratio_scan({regular_polygon(3)}, 3);
  REQUIRE(e.samples.size() == 1);
  CHECK_FALSE(e.samples[0].ratio_defined);
}

TEST_CASE("equivalence ratio on random triangles") {
  std::mt19937_64 rng(21);
  std::vector<Polygon> tris;
  for (int i = 0; i < 200; ++i) tris.push_back(random_triangle(rng, 10.0));
  const StabilityExperiment e = equivalence_ratio_scan(tris, 4);
  for (const auto& s : e.samples) {
    REQUIRE(s.ratio_defined);
    CHECK(std::isfinite(s.ratio));
    CHECK(s.ratio > 0.0);
  }
  MESSAGE("ratio envelope [" << e.ratio_min << ", " << e.ratio_max << "]");
  CHECK(e.ratio_min > 0.0);
  CHECK(e.ratio_max < 1e3);
}

TEST_CASE("envelopes over disjoint halves overlap") {
  std::mt19937_64 rng(5);
  std::vector<Polygon> a, b;
  for (int i = 0; i < 40; ++i) (i % 2 ? a : b).push_back(random_triangle(rng, 4.0));
  const StabilityExperiment ea = equivalence_ratio_scan(a, 3);
  const StabilityExperiment eb = equivalence_ratio_scan(b, 3);
  CHECK(ea.ratio_min <= eb.ratio_max);
  CHECK(eb.ratio_min <= ea.ratio_max);
}

TEST_CASE("thin isosceles triangles") {
  const Polygon t = thin_isosceles(10.0);
  CHECK(area(t) == doctest::Approx(1.0));
  CHECK(diameter(t) == doctest::Approx(20.0));
  CHECK_THROWS_AS(thin_isosceles(0.0), DomainError);
}

TEST_CASE("thin isosceles ratio at a = 10") {
  const FamilyPoint f = pi2_over_16_family({10.0}, 0.1, 6)[0];
  MESSAGE("ratio " << f.ratio << " against pi^2/16 = " << kQuarterPi2);
  CHECK(f.ratio >= 0.9 * kQuarterPi2);
  CHECK(f.ratio <= 1.2 * kQuarterPi2);
  CHECK(f.bracket_lo == doctest::Approx(0.9 * kQuarterPi2));
  CHECK(f.bracket_hi == doctest::Approx(kQuarterPi2 / 0.81));
}

TEST_CASE("rectangle sandwich and approach to pi^2/16") {
  const auto pts = pi2_over_16_family({5.0, 10.0, 20.0}, 0.1, 5);
  for (const auto& f : pts) {
    CHECK(f.sandwich);
    CHECK(f.lambda_outer < f.lambda);
    CHECK(f.lambda < f.lambda_inner);
    CHECK(f.lambda_outer == doctest::Approx(rectangle_lambda(2 * f.a, 1 / f.a)));
  }
  CHECK(pts[1].ratio < pts[0].ratio);
  CHECK(pts[2].ratio < pts[1].ratio);
  CHECK(pts[2].ratio > kQuarterPi2 * 0.9);
}

TEST_CASE("vertex-perturbation family") {
  const Polygon p0 = perturbed_equilateral(0.0);
  CHECK(max_side_deviation(p0) < 1e-12);
  CHECK(area(p0) == doctest::Approx(1.0));
  for (double t : {0.05, 0.2}) CHECK(area(perturbed_equilateral(t)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sharpness exponent") {
  const SharpnessFit fit = sharpness_exponent_fit({0.02, 0.04, 0.08, 0.16}, 5);
  MESSAGE("exponent " << fit.exponent << " asymmetry slope " << fit.asym_slope << " lambda slope "
                      << fit.lambda_slope);
  CHECK(fit.asym_slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.lambda_slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::abs(fit.exponent - 2.0) <= 0.3);
  for (double d : fit.delta_lambda) CHECK(d > 0.0);
}

TEST_CASE("degenerate triangles are rejected") {
  CHECK_THROWS(deficits(Polygon({{0, 0}, {1, 0}, {2, 0}}, false), 2));
}
