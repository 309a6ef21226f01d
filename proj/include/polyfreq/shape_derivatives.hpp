#pragma once

#include <vector>

#include "polyfreq/fem.hpp"
#include "polyfreq/geometry.hpp"
#include "polyfreq/symmetrize.hpp"

namespace polyfreq {

struct DerivativeReport {
  double lambda = 0.0;
  double dlambda_dt = 0.0;
  double d2lambda_dt2 = 0.0;
  double t_eval = 0.0;
  bool has_fd = false;
  double fd_dlambda = 0.0;
  double fd_d2lambda = 0.0;
  /// |formula - fd| / max(|fd|, 0.1 lambda / diam)
  double rel_err_1 = 0.0;
  /// |formula - fd| / |fd|
  double rel_err_2 = 0.0;
};

/// Normal velocity of the moving segments: +alpha / sqrt(xi^2 + (b/2 - t)^2)
/// on the upper segment, -alpha / sqrt(xi^2 + (b/2 + t)^2) on the lower one.
double velocity_field(const SymmetrizationFrame& frame, Side side, double alpha, double t);

/// (1/xi) [ int alpha |grad u(y-)|^2 - int alpha |grad u(y+)|^2 ] over [0, xi].
double dlambda_dt(const EigenSolution& sol, const SymmetrizationFrame& frame);

/// 2(b/2-t) / (xi (xi^2 + (t-b/2)^2)) int alpha |grad u(y+)|^2
///   + 2(b/2+t) / (xi (xi^2 + (t+b/2)^2)) int alpha |grad u(y-)|^2.
double d2lambda_dt2(const EigenSolution& sol, const SymmetrizationFrame& frame, double t);

struct FdOptions {
  int level = 6;
  MeshOptions mesh{true};
  double h1_rel = 1e-3;  // step of the first central difference, relative to the diameter
  double h2_rel = 5e-3;  // step of the second central difference
};

/// Mesh of `p` transported to the polygon whose vertex frame.index+1 sits at
/// frame position (xi, t + dt). Nodes move by dt * clamp(x/xi, 0, 1) along ey.
Mesh transport_mesh(const Mesh& mesh, const SymmetrizationFrame& frame, double t, double dt);

/// Formula values on frame.polygon_at(p, t) and, when `fd`, central
/// differences of FEM eigenvalues on transported meshes.
DerivativeReport derivative_report(const Polygon& p, const SymmetrizationFrame& frame, double t,
                                   const FdOptions& opt = {}, bool fd = true);

/// Parallelogram frame (0,0) -> (xi,-t) -> (xi, b/2 - t) -> (0, b/2): the left
/// side is fixed, the right side slides by -t, the top and bottom shear.
struct ShearFrame {
  std::size_t first = 0;  // polygon index of the (0,0) corner
  Point origin;
  Point ex, ey;
  double xi = 0.0;
  double half_b = 0.0;
  double t = 0.0;

  Point to_frame(const Point& p) const;
  /// Parallelogram with the same left side and shear t.
  Polygon polygon_at(double t) const;
};

ShearFrame make_shear_frame(const Polygon& parallelogram);

/// Shear derivatives: dlambda/dt = (1/xi)(int alpha g+^2 - int alpha g-^2) and
/// d2lambda/dt2 = 2t / (xi (xi^2 + t^2)) times the same difference.
DerivativeReport rhombus_rectangle_derivatives(const EigenSolution& sol, const ShearFrame& frame);

/// Formula values plus central differences along the shear.
DerivativeReport rhombus_rectangle_report(const Polygon& parallelogram, const FdOptions& opt = {}, bool fd = true);

struct ShearSweep {
  std::vector<double> t;
  std::vector<double> dlambda;  // lambda(sheared) - lambda(rectangle)
  double exponent = 0.0;        // log-log slope of dlambda against t
  double lambda_rectangle = 0.0;
};

/// lambda of the rectangle sheared by each t, on one mesh topology transported across t.
ShearSweep shear_sweep(const Polygon& rectangle, const std::vector<double>& t_values, int level);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace polyfreq
