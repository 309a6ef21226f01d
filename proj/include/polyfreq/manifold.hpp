#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polyfreq/geometry.hpp"

namespace polyfreq {

struct JacobianReport {
  int n = 0;
  int matrix_rows = 0;
  int matrix_cols = 0;
  std::vector<double> singular_values;  // descending
  int rank = 0;
  int nullity = 0;
};

/// Singular values and numerical nullity of a dense matrix; a singular value
/// counts toward the rank when it exceeds rank_tol * sigma_max.
JacobianReport analyze_matrix(const Eigen::MatrixXd& a, double rank_tol = 1e-10);

/// Constraint map Q(x; r) = (sum x - 2 pi, sum r_i r_{i+1} sin x_i - n sin(2 pi/n),
/// sum r_i cos theta_i, sum r_i sin theta_i) with theta_i = x_1 + ... + x_{i-1}.
Eigen::Vector4d q_map(const Eigen::VectorXd& x, const Eigen::VectorXd& r);
/// Analytic 4 x 2n Jacobian of q_map at an arbitrary point.
Eigen::MatrixXd q_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r);

/// Equilateral constraint map Psi(x; r; s): angle sum, the n squared-side
/// equations r_{i+1}^2 + r_i^2 - 2 r_i r_{i+1} cos x_i - s, area, centroid.
Eigen::VectorXd psi_map(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double s);
Eigen::MatrixXd psi_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double s);

/// DQ at the regular point assembled from the block formulas E and J.
/// With `as_printed` the sin-row of J starts with 1 instead of sin 0 = 0.
Eigen::MatrixXd dq_matrix_at_regular(int n, bool as_printed = false);
/// DPsi at the regular point assembled from the block formulas N and O.
Eigen::MatrixXd dpsi_matrix_at_regular(int n, bool as_printed = false);

JacobianReport dq_at_regular(int n, double rank_tol = 1e-10);
JacobianReport dpsi_at_regular(int n, double rank_tol = 1e-10);

struct SampleBatch {
  std::vector<Polygon> polygons;
  /// Set when radius exceeds the convexity radius mu_n; samples are still filtered.
  bool convexity_not_guaranteed = false;
  double mu_n = 0.0;
  std::size_t rejected = 0;
};

/// Quarter of the side length of the regular n-gon of the given area.
double convexity_radius(int n, double alpha);

/// Random convex n-gons whose vertices lie within `radius` of the vertices of
/// the regular n-gon of area `alpha`, dilated about the barycenter to area
/// exactly `alpha`. Deterministic in (seed, count).
SampleBatch sample_near_regular(int n, double radius, double alpha, std::uint64_t seed, int count);

}  // namespace polyfreq
