#pragma once

namespace polyfreq {

/// Energy h(a) = psi lambda / a^2 + sigma perim a + pressure area a^2 of the
/// regular n-gon of area pi dilated by a.
struct BubbleParams {
  double psi = 1.0;
  double sigma = 1.0;
  double pressure = 0.0;
  int n = 0;
  double lambda_pn = 0.0;  // eigenvalue of the regular n-gon of area pi
  double perim_pn = 0.0;   // its perimeter
  double area_pn = 3.141592653589793;
  bool allow_negative_pressure = false;
};

double energy(const BubbleParams& p, double scale);
double energy_derivative(const BubbleParams& p, double scale);

/// Quartic -2 psi lambda / (sigma perim) + a^3 + (2 pressure area / (sigma perim)) a^4.
double equilibrium_polynomial(const BubbleParams& p, double a);

struct Equilibrium {
  double a = 0.0;
  double energy = 0.0;
  double residual = 0.0;    // |quartic(a)|
  double h_prime = 0.0;     // h'(a)
  int newton_steps = 0;
};

/// Positive root of the quartic by safeguarded Newton inside a sign-change bracket.
Equilibrium equilibrium_scale(const BubbleParams& p);
/// Same root by plain bisection on the same bracket.
double equilibrium_scale_bisection(const BubbleParams& p, double tol = 1e-15);

/// Eigenvalue and perimeter of the regular n-gon of area pi; the eigenvalue is
/// taken from a finite element solve at the given level.
BubbleParams bubble_params(double psi, double sigma, double pressure, int n, int refine);

}  // namespace polyfreq
