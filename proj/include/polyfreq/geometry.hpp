#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace polyfreq {

using Point = Eigen::Vector2d;

/// Simple polygon with counterclockwise vertex order.
///
/// Construction validates the vertex list: at least three vertices,
/// consecutive vertices distinct relative to the diameter, and (unless
/// disabled) no self-intersections. Clockwise input is reversed so the
/// signed area is always positive.
class Polygon {
public:
  Polygon() = default;
  explicit Polygon(std::vector<Point> vertices, bool check_simple = true);

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& operator[](std::size_t i) const { return vertices_[i % vertices_.size()]; }

  /// Vertex with cyclic indexing; negative indices wrap.
  const Point& vertex(long i) const;

  bool simple() const noexcept { return simple_; }

  /// Same polygon with every vertex transformed by p -> s * R(theta) p + shift.
  Polygon transformed(double theta, double scale, const Point& shift) const;
  Polygon translated(const Point& shift) const { return transformed(0.0, 1.0, shift); }
  /// Mirror image across the vertical axis through the vertex barycenter.
  Polygon reflected() const;
  /// Dilation by `scale` about the vertex barycenter.
  Polygon scaled_about_barycenter(double scale) const;
  /// Drops vertices that are collinear with their neighbours.
  Polygon simplified(double rel_tol = 1e-12) const;

private:
  std::vector<Point> vertices_;
  bool simple_ = false;
};

double signed_area(std::span<const Point> pts);
double area(const Polygon& p);
double perimeter(const Polygon& p);
std::vector<double> side_lengths(const Polygon& p);
double diameter(const Polygon& p);
/// Arithmetic mean of the vertices.
Point vertex_barycenter(const Polygon& p);
Point area_centroid(const Polygon& p);
bool is_convex(const Polygon& p, double rel_tol = 1e-12);
bool is_simple(std::span<const Point> pts);
/// Largest |l_i - mean| / mean over the side lengths.
double max_side_deviation(const Polygon& p);

/// Regular n-gon with circumradius `r`, first vertex at angle `phase`.
Polygon regular_polygon(int n, double circumradius = 1.0, double phase = 0.0);
/// Regular n-gon of the given area centred at the origin.
Polygon regular_polygon_with_area(int n, double area, double phase = 0.0);
double regular_polygon_area(int n, double circumradius);

/// Barycentric angle/radius coordinates of a polygon about its vertex barycenter.
struct ManifoldPoint {
  std::vector<double> x;  // angle between OA_i and OA_{i+1}
  std::vector<double> r;  // |OA_i|
  double alpha = 0.0;     // area
};

struct ManifoldResiduals {
  double angle_sum = 0.0;     // sum x_i - 2 pi
  double area = 0.0;          // relative: (1/2 sum r_i r_{i+1} sin x_i - alpha) / alpha
  double centroid_cos = 0.0;  // sum r_i cos(x_1 + ... + x_{i-1})
  double centroid_sin = 0.0;  // sum r_i sin(x_1 + ... + x_{i-1})
  bool pass = false;
};

ManifoldPoint to_manifold(const Polygon& p);
/// Polygon with first vertex on the positive x axis and vertex barycenter at the origin.
Polygon to_polygon(const ManifoldPoint& m);
ManifoldResiduals validate_manifold(const ManifoldPoint& m, double tol = 1e-8);

struct DeficitReport {
  double deficit_delta = 0.0;  // L^2 - 2n tan(pi/n) sum r_i r_{i+1} sin x_i
  double sigma_a2 = 0.0;       // variance of barycentric angles
  double sigma_r2 = 0.0;       // variance of radii
  double sigma_s2 = 0.0;       // variance of side lengths
  double v = 0.0;              // sigma_s2 + sigma_r2
  /// (v + |P| sigma_a2) / deficit; NaN when the deficit vanishes.
  double stability_ratio = 0.0;
  std::optional<double> asymmetry;  // Fraenkel asymmetry against the regular n-gon
};

DeficitReport deficit_and_variances(const Polygon& p, bool with_asymmetry = false);

/// Area of the symmetric difference of two convex polygons.
double symmetric_difference_area(const Polygon& p, const Polygon& q);
/// Intersection of two convex polygons; empty vector when disjoint.
std::vector<Point> convex_intersection(const Polygon& p, const Polygon& q);

struct AsymmetryResult {
  double value = 0.0;   // |R(P) delta ref| / |P|
  double rotation = 0.0;
  Point translation = Point::Zero();
  bool reflected = false;
};

/// Fraenkel asymmetry of a convex polygon against the regular `n_ref`-gon of
/// equal area, minimised over rotations, translations and reflections.
AsymmetryResult fraenkel_asymmetry(const Polygon& p, int n_ref);

}  // namespace polyfreq
