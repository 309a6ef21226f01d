#include "doctest.h"

#include <cmath>
#include <numbers>

#include "polyfreq/errors.hpp"
#include "polyfreq/manifold.hpp"
#include "polyfreq/shape_derivatives.hpp"
#include "support.hpp"

using namespace polyfreq;
using polyfreq::testing::rel;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("velocity field") {
  SymmetrizationFrame f;
  f.xi = 1.0;
  f.b = 2.0;
  CHECK(velocity_field(f, Side::Upper, 0.0, 0.0) == 0.0);
  CHECK(velocity_field(f, Side::Lower, 0.0, 0.3) == 0.0);
  CHECK(velocity_field(f, Side::Upper, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (double t : {0.0, 0.2, 0.6}) {
    CHECK(velocity_field(f, Side::Upper, 0.5, t) > 0.0);
    CHECK(velocity_field(f, Side::Lower, 0.5, t) < 0.0);
  }
}

TEST_CASE("first derivative vanishes on symmetric frames") {
  SUBCASE("isosceles triangle") {
    const Polygon tri({{0, 0}, {1.2, 0}, {0.6, 0.9}});
    const SymmetrizationFrame f = make_frame(tri, 0);
    FdOptions opt;
    opt.level = 5;
    const DerivativeReport r = derivative_report(tri, f, 0.0, opt, false);
    CHECK(std::abs(r.dlambda_dt) < 1e-3 * r.lambda / diameter(tri));
  }
  SUBCASE("regular polygons at every frame") {
    for (int n : {4, 6, 7}) {
      const Polygon p = regular_polygon(n);
      FdOptions opt;
      opt.level = 4;
      for (int i = 0; i < n; i += 2) {
        const DerivativeReport r = derivative_report(p, make_frame(p, i), 0.0, opt, false);
        CHECK(std::abs(r.dlambda_dt) < 1e-3 * r.lambda / diameter(p));
      }
    }
  }
}

TEST_CASE("both second-derivative terms agree on a symmetric frame") {
  const Polygon p = regular_polygon(6);
  const SymmetrizationFrame f = make_frame(p, 0);
  auto mesh = std::make_shared<const Mesh>(triangulate(p, 5, MeshOptions{true}));
  const EigenSolution s = solve_lambda1(mesh);
  const GradientTrace up = boundary_gradient_trace(s, f, Side::Upper);
  const GradientTrace lo = boundary_gradient_trace(s, f, Side::Lower);
  CHECK(rel(up.moment(1), lo.moment(1)) < 1e-6);
}

TEST_CASE("first derivative against central differences on a scalene triangle") {
  const Polygon tri({{0, 0}, {1.2, 0}, {0.3, 0.9}});
  const SymmetrizationFrame f = make_frame(tri, 0);
  FdOptions opt;
  opt.level = 6;
  const DerivativeReport r = derivative_report(tri, f, f.t_star, opt, true);
  MESSAGE("formula " << r.dlambda_dt << " fd " << r.fd_dlambda);
  CHECK(rel(r.dlambda_dt, r.fd_dlambda) < 0.05);
}

TEST_CASE("first derivative against central differences on near-regular pentagons and hexagons") {
  for (int n : {5, 6}) {
    const SampleBatch b = sample_near_regular(n, 0.1, regular_polygon_area(n, 1.0), 2 + n, 3);
    for (const auto& p : b.polygons) {
      const SymmetrizationFrame f = make_frame(p, 0);
      FdOptions opt;
      opt.level = 6;
      const DerivativeReport r = derivative_report(p, f, f.t_star, opt, true);
      CHECK(r.rel_err_1 <= 0.05);
    }
  }
}

TEST_CASE("second derivative against central differences on a near-regular hexagon") {
  const SampleBatch b = sample_near_regular(6, 0.1, regular_polygon_area(6, 1.0), 8, 1);
  const Polygon& p = b.polygons[0];
  const SymmetrizationFrame f = make_frame(p, 0);
  FdOptions opt;
  opt.level = 5;
  const DerivativeReport r = derivative_report(p, f, 0.0, opt, true);
  MESSAGE("formula " << r.d2lambda_dt2 << " fd " << r.fd_d2lambda);
  CHECK(r.rel_err_2 <= 0.10);
}

TEST_CASE("second derivative is positive") {
  const std::vector<Polygon> tris{Polygon({{0, 0}, {1.2, 0}, {0.3, 0.9}}), Polygon({{0, 0}, {1, 0}, {0.9, 0.4}}),
                                  Polygon({{0, 0}, {3, 0}, {1.0, 0.5}})};
  for (const auto& p : tris) {
    const SymmetrizationFrame f = make_frame(p, 0);
    for (double frac : {0.0, 0.3, 0.6, 0.9}) {
      const double t = frac * 0.5 * f.b;
      const EigenSolution s = solve_lambda1(f.polygon_at(p, t), 4, MeshOptions{true});
      CHECK(d2lambda_dt2(s, f, t) > 0.0);
    }
  }
}

TEST_CASE("derivatives scale as s^-3 and s^-4") {
  const Polygon p({{0, 0}, {1.2, 0}, {0.3, 0.9}});
  const double s = 1.7;
  const Polygon q = p.transformed(0.0, s, Point::Zero());
  FdOptions opt;
  opt.level = 4;
  const DerivativeReport a = derivative_report(p, make_frame(p, 0), make_frame(p, 0).t_star, opt, false);
  const DerivativeReport b = derivative_report(q, make_frame(q, 0), make_frame(q, 0).t_star, opt, false);
  CHECK(rel(b.dlambda_dt, a.dlambda_dt / (s * s * s)) < 0.01);
  CHECK(rel(b.d2lambda_dt2, a.d2lambda_dt2 / (s * s * s * s)) < 0.01);
}

TEST_CASE("offset outside the frame is rejected") {
  const Polygon p({{0, 0}, {1.2, 0}, {0.3, 0.9}});
  const SymmetrizationFrame f = make_frame(p, 0);
  const EigenSolution s = solve_lambda1(p, 2);
  CHECK_THROWS_AS(d2lambda_dt2(s, f, 0.5 * f.b), DomainError);
  CHECK_THROWS_AS(d2lambda_dt2(s, f, -0.1), DomainError);
}

TEST_CASE("rectangle: both shear derivatives vanish") {
  const Polygon rect({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  FdOptions opt;
  opt.level = 5;
  const DerivativeReport r = rhombus_rectangle_report(rect, opt, false);
  CHECK(std::abs(r.dlambda_dt) <= 1e-4 * r.lambda);
  CHECK(std::abs(r.d2lambda_dt2) <= 1e-4 * r.lambda);
}

TEST_CASE("square as a degenerate rhombus") {
  const Polygon sq({{0, 0}, {1.5, 0}, {1.5, 1.5}, {0, 1.5}});
  FdOptions opt;
  opt.level = 6;
  const DerivativeReport r = rhombus_rectangle_report(sq, opt, false);
  CHECK(rel(r.lambda, 2 * kPi * kPi / (1.5 * 1.5)) < 0.005);
}

TEST_CASE("non-parallelogram is rejected by the shear frame") {
  CHECK_THROWS_AS(make_shear_frame(Polygon({{0, 0}, {2, 0}, {2.5, 1}, {0, 1}})), FrameMismatch);
}

TEST_CASE("slightly sheared rectangle: eigenvalue change is o(t^2)") {
  const Polygon rect({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  const ShearSweep sw = shear_sweep(rect, {0.02, 0.01, 0.005}, 6);
  for (std::size_t i = 0; i < sw.t.size(); ++i) MESSAGE("t " << sw.t[i] << " dlambda " << sw.dlambda[i]);
  MESSAGE("fitted exponent " << sw.exponent);
  CHECK(sw.exponent > 2.0);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
}
