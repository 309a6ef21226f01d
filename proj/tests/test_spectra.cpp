#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyfreq/errors.hpp"
#include "polyfreq/manifold.hpp"
#include "polyfreq/spectra.hpp"
#include "polyfreq/symmetrize.hpp"
#include "support.hpp"

using namespace polyfreq;
using polyfreq::testing::rel;

namespace {
const double kPi = std::numbers::pi;
const Polygon kMildTriangle({{0, 0}, {1, 0}, {0.45, 0.8}});
}  // namespace

TEST_CASE("rectangle eigenvalue") {
  CHECK(rectangle_lambda(1, 1) == doctest::Approx(2 * kPi * kPi));
  CHECK(rectangle_lambda(2, 1) == doctest::Approx(1.25 * kPi * kPi));
  CHECK(rectangle_lambda(3, 1) < rectangle_lambda(2, 1));
  CHECK(rectangle_lambda(2, 1) == doctest::Approx(rectangle_lambda(1, 2)));
  CHECK_THROWS_AS(rectangle_lambda(0, 1), DomainError);
  CHECK_THROWS_AS(rectangle_lambda(1, -1), DomainError);
}

TEST_CASE("equilateral triangle eigenvalue") {
  const double unit_side_area = std::sqrt(3.0) / 4;
  CHECK(equilateral_triangle_lambda(unit_side_area) == doctest::Approx(16 * kPi * kPi / 3));
  CHECK(equilateral_triangle_lambda(1.0) == doctest::Approx(4 * kPi * kPi / std::sqrt(3.0)));
  CHECK(equilateral_triangle_lambda(2.0) == doctest::Approx(0.5 * equilateral_triangle_lambda(1.0)));
  const double fem = solve_lambda1(regular_polygon_with_area(3, 1.0), 6).lambda1;
  CHECK(rel(fem, equilateral_triangle_lambda(1.0)) < 0.005);
}

TEST_CASE("series on a regular polygon has no terms to add") {
  const Polygon p = regular_polygon(6);
  SeriesOptions opt;
  opt.refine = 4;
  const SeriesReconstruction r = reconstruct_series(p, 10, opt);
  CHECK(r.flow_steps == 0);
  CHECK(r.terms.empty());
  CHECK(r.lambda_rec == r.lambda_limit);
  CHECK(rel(r.lambda_rec, r.direct_lambda) < 1e-12);
}

TEST_CASE("series on a mildly scalene triangle") {
  const auto sides = side_lengths(kMildTriangle);
  const auto [lo, hi] = std::minmax_element(sides.begin(), sides.end());
  REQUIRE(*hi / *lo < 1.1);
  SeriesOptions opt;
  opt.refine = 6;
  const SeriesReconstruction r = reconstruct_series(kMildTriangle, 50, opt);
  MESSAGE("direct " << r.direct_lambda << " reconstructed " << r.lambda_rec << " gap " << r.rel_gap);
  CHECK(r.rel_gap <= 0.05);
  REQUIRE(!r.terms.empty());
  // every symmetrized triangle is isosceles in its frame
  for (const auto& t : r.terms) CHECK(std::abs(t.alpha) < 1e-3 * r.direct_lambda / diameter(kMildTriangle));
  for (const auto& t : r.terms)
    if (t.t > 0.0 && t.beta != 0.0) CHECK(t.beta > 0.0);
  // the reported partial sums accumulate the terms in order
  double sum = r.lambda_limit;
  for (const auto& t : r.terms) {
    sum += t.alpha * t.t + 0.5 * t.beta * t.t * t.t;
    CHECK(t.partial_sum == doctest::Approx(sum).epsilon(1e-14));
  }
}

TEST_CASE("series on a near-regular heptagon") {
  const SampleBatch b = sample_near_regular(7, 0.03, 1.0, 42, 1);
  SeriesOptions opt;
  opt.refine = 5;
  const SeriesReconstruction r = reconstruct_series(b.polygons[0], 100, opt);
  MESSAGE("direct " << r.direct_lambda << " reconstructed " << r.lambda_rec << " gap " << r.rel_gap
                    << " steps " << r.flow_steps);
  CHECK(r.rel_gap <= 0.05);
}

TEST_CASE("parallel series terms match the serial ones") {
  SeriesOptions opt;
  opt.refine = 4;
  const SeriesReconstruction a = reconstruct_series(kMildTriangle, 12, opt);
  opt.jobs = 3;
  const SeriesReconstruction b = reconstruct_series(kMildTriangle, 12, opt);
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].beta == b.terms[i].beta);
    CHECK(a.terms[i].partial_sum == b.terms[i].partial_sum);
  }
}

TEST_CASE("series truncation keeps the tail") {
  SeriesOptions opt;
  opt.refine = 3;
  const SeriesReconstruction r = reconstruct_series(kMildTriangle, 3, opt);
  CHECK(r.terms.size() == 3);
  CHECK(r.flow_steps > 3);
  CHECK(r.tail_t2 > 0.0);
}

TEST_CASE("series needs a converged flow") {
  SeriesOptions opt;
  opt.refine = 2;
  opt.flow_max_iter = 2;
  CHECK_THROWS_AS(reconstruct_series(Polygon({{0, 0}, {3, 0}, {0.4, 1}}), 10, opt), NoConvergence);
}

TEST_CASE("frequency and eigenvalue round trip") {
  SeriesOptions opt;
  opt.refine = 3;
  const SeriesReconstruction r = reconstruct_series(kMildTriangle, 20, opt);
  const double freq = std::sqrt(r.lambda_rec);
  CHECK(std::abs(freq * freq - r.lambda_rec) <= 4 * std::numeric_limits<double>::epsilon() * r.lambda_rec);
}

TEST_CASE("positivity terms on a triangle flow") {
  const FlowTrace tr = run_flow(kMildTriangle, 200, 1e-10);
  const double min_t = 1e-6;
  const auto terms = positivity_terms(tr, 8, min_t, 4);
  REQUIRE(!terms.empty());
  CHECK(terms.size() <= 8);
  for (const auto& pt : terms) {
    CHECK(pt.t > min_t);
    CHECK(pt.k >= 2);
    CHECK(pt.beta0 > 0.0);
    CHECK(pt.value == doctest::Approx(pt.alpha * pt.t + pt.beta0 * pt.t * pt.t / 7));
  }
}

TEST_CASE("isosceles offset") {
  SUBCASE("equilateral input") {
    const IsoscelesCoefficient c = isosceles_quadratic_coefficient(regular_polygon(3), 3);
    CHECK(std::abs(c.t) < 1e-12);
  }
  SUBCASE("3-4-5 triangle") {
    // longest side AC from (0,3) to (4,0), apex B at the origin; the foot of the
    // perpendicular from B sits 0.7 from the midpoint of AC
    const Polygon tri({{0, 3}, {0, 0}, {4, 0}});
    const IsoscelesCoefficient c = isosceles_quadratic_coefficient(tri, 3);
    const Point A(0, 3), B(0, 0), C(4, 0);
    const double b = (C - A).norm();
    CHECK(c.t == doctest::Approx(b / 2 - (B - A).dot(C - A) / b));
    CHECK(c.t == doctest::Approx(0.7));
    CHECK(c.apex == 1);
    CHECK(area(c.iso) == doctest::Approx(6.0));
    const Point apex = c.iso[c.apex];
    CHECK((apex - A).norm() == doctest::Approx((apex - C).norm()));
  }
  SUBCASE("non-triangle") { CHECK_THROWS_AS(isosceles_quadratic_coefficient(regular_polygon(4), 2), DomainError); }
}

TEST_CASE("isosceles coefficient quick bound") {
  for (const Polygon& tri : {Polygon({{0, 0}, {1, 0}, {0.56, 0.85}}), Polygon({{0, 0}, {1.2, 0}, {0.3, 0.9}})}) {
    const IsoscelesCoefficient c = isosceles_quadratic_coefficient(tri, 5);
    CHECK(c.alpha1 > 0.0);
    CHECK(c.alpha1 <= c.quick_bound * (1 + 1e-12));
  }
}

TEST_CASE("isosceles coefficient against a fitted quadratic") {
  const Polygon tri({{0, 0}, {1, 0}, {0.56, 0.85}});
  const int level = 6;
  const IsoscelesCoefficient c = isosceles_quadratic_coefficient(tri, level);
  const SymmetrizationFrame f = make_frame(c.iso, (c.apex + 2) % 3);
  double num = 0.0, den = 0.0;
  for (double t : {0.01, 0.02, 0.04}) {
    const double d = solve_lambda1(f.polygon_at(c.iso, t), level, MeshOptions{true}).lambda1 - c.lambda_iso;
    num += d * t * t;
    den += t * t * t * t;
  }
  const double fitted = num / den;
  MESSAGE("alpha1 " << c.alpha1 << " fitted " << fitted);
  CHECK(rel(c.alpha1, fitted) <= 0.15);
}
