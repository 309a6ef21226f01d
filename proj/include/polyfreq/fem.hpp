#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "polyfreq/geometry.hpp"

namespace polyfreq {

struct SymmetrizationFrame;

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int poly_edge = 0;  // polygon edge (vertex poly_edge -> poly_edge+1) containing this edge
  int triangle = -1;  // adjacent triangle
};

struct Mesh {
  Polygon polygon;
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<char> on_boundary;
  int refinement_level = 0;

  /// Same connectivity with every node displaced by `disp(node)`; the
  /// polygon is replaced by `moved`.
  Mesh transported(const Polygon& moved, const std::function<Point(const Point&)>& disp) const;
};

struct MeshOptions {
  bool grade_vertices = false;
  double grade_exponent = 1.5;
  /// Triangles with longest side / height above this use the column mesh.
  double thin_aspect = 10.0;
};

/// Fan from the vertex barycenter for convex polygons, ear clipping
/// otherwise, then `level` uniform red refinements.
///
/// Thin triangles get a column mesh instead: the longest side is the base,
/// every column perpendicular to it carries 2^level cells, and the number of
/// columns is 2^level * ceil(sqrt(aspect)).
Mesh triangulate(const Polygon& p, int level, const MeshOptions& opt = {});

struct MeshCheck {
  bool positive_orientation = true;
  bool conforming = true;
  bool boundary_closed = true;
  bool ok() const { return positive_orientation && conforming && boundary_closed; }
};

MeshCheck validate_mesh(const Mesh& mesh);

struct EigenSolution {
  double lambda1 = 0.0;
  Eigen::VectorXd u;           // interior degrees of freedom
  std::vector<int> dof;        // node -> dof, -1 on the boundary
  std::shared_ptr<const Mesh> mesh;
  double residual = 0.0;       // ||K u - lambda M u|| / ||K u||
  int iterations = 0;

  /// Nodal values including the zero boundary values.
  Eigen::VectorXd nodal() const;
  /// Constant gradient of u on triangle `tri`.
  Point gradient(int tri) const;
};

/// Stiffness and consistent mass matrices on the interior nodes.
void assemble(const Mesh& mesh, const std::vector<int>& dof, Eigen::SparseMatrix<double>& k,
              Eigen::SparseMatrix<double>& m);

/// Smallest eigenpair of K u = lambda M u, u^T M u = 1, positive at the
/// interior node nearest the vertex barycenter.
EigenSolution solve_lambda1(std::shared_ptr<const Mesh> mesh, double tol = 1e-11, int max_iter = 500);
EigenSolution solve_lambda1(const Polygon& p, int level, const MeshOptions& opt = {});

enum class Side { Upper, Lower };

struct TraceSample {
  double alpha_lo = 0.0;  // frame x-coordinate (distance from line v1v3) at the ends of the sub-edge
  double alpha_hi = 0.0;
  double alpha_mid = 0.0;
  double g = 0.0;         // |grad u| on the adjacent triangle
  double length = 0.0;    // sub-edge length
};

struct GradientTrace {
  Side side = Side::Upper;
  std::vector<TraceSample> samples;  // sorted by alpha

  /// integral over [0, xi] of alpha^p g(alpha)^2 d alpha, exact for piecewise-constant g.
  double moment(int p) const;
  double sup() const;
};

/// |grad u| along the segment y+ (upper end of v1v3 to v2) or y- (lower end to v2).
GradientTrace boundary_gradient_trace(const EigenSolution& sol, const SymmetrizationFrame& frame, Side side);
/// |grad u| along the polygon edge from vertex `edge` to `edge + 1`, in arclength from the first vertex.
GradientTrace edge_gradient_trace(const EigenSolution& sol, int edge);

/// Observed convergence order log2((l0 - l1) / (l1 - l2)) for three successive levels.
double observed_order(double l0, double l1, double l2);

}  // namespace polyfreq
