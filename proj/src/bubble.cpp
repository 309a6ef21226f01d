#include "polyfreq/bubble.hpp"

#include <cmath>
#include <numbers>

#include "polyfreq/errors.hpp"
#include "polyfreq/fem.hpp"
#include "polyfreq/geometry.hpp"

namespace polyfreq {

namespace {

void check(const BubbleParams& p) {
  if (!(p.psi > 0.0) || !(p.sigma > 0.0)) throw DomainError("psi and sigma must be positive");
  if (!(p.lambda_pn > 0.0) || !(p.perim_pn > 0.0)) throw DomainError("lambda and perimeter must be positive");
  if (p.pressure < 0.0 && !p.allow_negative_pressure) throw DomainError("negative pressure requires opting in");
}

struct Bracket {
  double lo, hi;
};

Bracket bracket(const BubbleParams& p) {
  check(p);
  const double sh = p.sigma * p.perim_pn;
  const double c = p.psi * p.lambda_pn / sh;
  const double k = 2.0 * p.pressure * p.area_pn / sh;
  if (k >= 0.0) return {0.0, std::cbrt(2.0 * c)};
  // g is increasing up to its maximum at -3/(4k) and decreasing afterwards.
  const double top = -3.0 / (4.0 * k);
  if (equilibrium_polynomial(p, top) < 0.0) throw NoEquilibrium("negative pressure too strong for a positive root");
  return {0.0, top};
}

}  // namespace

double energy(const BubbleParams& p, double a) {
  if (!(a > 0.0)) throw DomainError("scale must be positive");
  return p.psi * p.lambda_pn / (a * a) + p.sigma * p.perim_pn * a + p.pressure * p.area_pn * a * a;
}

double energy_derivative(const BubbleParams& p, double a) {
  if (!(a > 0.0)) throw DomainError("scale must be positive");
  return -2.0 * p.psi * p.lambda_pn / (a * a * a) + p.sigma * p.perim_pn + 2.0 * p.pressure * p.area_pn * a;
}

double equilibrium_polynomial(const BubbleParams& p, double a) {
  const double sh = p.sigma * p.perim_pn;
  return -2.0 * p.psi * p.lambda_pn / sh + a * a * a + 2.0 * p.pressure * p.area_pn / sh * a * a * a * a;
}

Equilibrium equilibrium_scale(const BubbleParams& p) {
  Bracket br = bracket(p);
  const double sh = p.sigma * p.perim_pn;
  const double k = 2.0 * p.pressure * p.area_pn / sh;
  Equilibrium eq;
  double a = br.hi;
  for (int it = 0; it < 200; ++it) {
    const double g = equilibrium_polynomial(p, a);
    if (g == 0.0) break;
    if (g < 0.0)
      br.lo = a;
    else
      br.hi = a;
    const double dg = 3.0 * a * a + 4.0 * k * a * a * a;
    double next = dg > 0.0 ? a - g / dg : 0.5 * (br.lo + br.hi);
    if (!(next > br.lo && next < br.hi)) next = 0.5 * (br.lo + br.hi);
    ++eq.newton_steps;
    const bool done = std::abs(next - a) <= 4e-16 * a;
    a = next;
    if (done) break;
  }
  eq.a = a;
  eq.energy = energy(p, a);
  eq.residual = std::abs(equilibrium_polynomial(p, a));
  eq.h_prime = energy_derivative(p, a);
  return eq;
}

double equilibrium_scale_bisection(const BubbleParams& p, double tol) {
  Bracket br = bracket(p);
  if (equilibrium_polynomial(p, br.hi) == 0.0) return br.hi;
  while (br.hi - br.lo > tol * br.hi) {
    const double mid = 0.5 * (br.lo + br.hi);
    if (mid <= br.lo || mid >= br.hi) break;
    if (equilibrium_polynomial(p, mid) < 0.0)
      br.lo = mid;
    else
      br.hi = mid;
  }
  return 0.5 * (br.lo + br.hi);
}

BubbleParams bubble_params(double psi, double sigma, double pressure, int n, int refine) {
  BubbleParams p;
  p.psi = psi;
  p.sigma = sigma;
  p.pressure = pressure;
  p.n = n;
  const Polygon reg = regular_polygon_with_area(n, std::numbers::pi);
  p.lambda_pn = solve_lambda1(reg, refine).lambda1;
  p.perim_pn = perimeter(reg);
  p.area_pn = area(reg);
  return p;
}

}  // namespace polyfreq
