#pragma once

#include <vector>

#include "polyfreq/fem.hpp"
#include "polyfreq/geometry.hpp"
#include "polyfreq/symmetrize.hpp"

namespace polyfreq {

/// First Dirichlet eigenvalue of an L x l rectangle.
double rectangle_lambda(double L, double l);
/// First Dirichlet eigenvalue of the equilateral triangle of area A.
double equilateral_triangle_lambda(double A);
/// First zero of the Bessel function J0.
inline constexpr double kBesselJ0Zero = 2.404825557695773;

struct SeriesTerm {
  int k = 0;              // term index; pairs with the offset t_{k-1}
  double t = 0.0;         // t_{k-1}
  double alpha = 0.0;     // dlambda/dt at t = 0 on P^k
  double beta = 0.0;      // d2lambda/dt2 at t = t_{k-1}/2
  double partial_sum = 0.0;
  double rel_gap = 0.0;   // |partial_sum - direct| / direct
};

struct SeriesReconstruction {
  double lambda_limit = 0.0;  // FEM eigenvalue of the last polygon of the flow
  double direct_lambda = 0.0;
  std::vector<SeriesTerm> terms;
  double lambda_rec = 0.0;    // partial sum after the last computed term
  double rel_gap = 0.0;
  double tail_t2 = 0.0;       // sum of t_j^2 over the steps beyond the truncation
  int skipped_negligible = 0; // steps whose offset is below the negligible threshold
  int flow_steps = 0;
};

struct SeriesOptions {
  int refine = 6;
  MeshOptions mesh{true};
  double flow_tol = 1e-8;
  int flow_max_iter = 5000;
  /// offsets below this multiple of the diameter contribute nothing and are skipped
  double negligible_rel = 1e-9;
  int jobs = 1;
};

/// lambda(P) = lambda(P^inf) + sum alpha_k t_{k-1} + sum beta_k t_{k-1}^2 / 2, truncated after K terms.
SeriesReconstruction reconstruct_series(const Polygon& p, int K, const SeriesOptions& opt = {});

struct PositivityTerm {
  int k = 0;
  double t = 0.0;
  double alpha = 0.0;
  double beta0 = 0.0;   // d2lambda/dt2 at t = 0
  double value = 0.0;   // alpha t + beta0 t^2 / 7
};

/// Per-step test alpha_k t_{k-1} + beta_k(0) t_{k-1}^2 / 7 over the first
/// `max_steps` steps of a flow whose offset exceeds `min_t`.
std::vector<PositivityTerm> positivity_terms(const FlowTrace& trace, int max_steps, double min_t, int refine,
                                             const MeshOptions& mesh = {true});

struct IsoscelesCoefficient {
  double t = 0.0;          // b/2 - (AB . AC) / b
  double alpha1 = 0.0;     // b^2 / (rho ((b/2)^2 + (2 rho/b)^2)) int alpha |grad u(y+)|^2
  double lambda_iso = 0.0;
  double grad_sup = 0.0;   // sup of |grad u| over the integration segment
  double quick_bound = 0.0;  // sup^2 * 2 rho / ((b/2)^2 + (2 rho/b)^2)
  Polygon iso;
  std::size_t apex = 0;    // index of B
};

/// Quadratic coefficient of lambda(T) - lambda(T_iso) in the offset t, where
/// T_iso symmetrizes T at the vertex B opposite the longest side AC and A is
/// the endpoint with |AB| <= |BC|.
IsoscelesCoefficient isosceles_quadratic_coefficient(const Polygon& t, int refine = 6, const MeshOptions& mesh = {true});

}  // namespace polyfreq
