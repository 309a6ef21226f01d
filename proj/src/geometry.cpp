#include "polyfreq/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyfreq/errors.hpp"

namespace polyfreq {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); }

bool on_segment(const Point& a, const Point& b, const Point& p, double eps) {
  return std::abs(orient(a, b, p)) <= eps * (b - a).norm() &&
         p.x() >= std::min(a.x(), b.x()) - eps && p.x() <= std::max(a.x(), b.x()) + eps &&
         p.y() >= std::min(a.y(), b.y()) - eps && p.y() <= std::max(a.y(), b.y()) + eps;
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d, double eps) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  const double s1 = eps * (d - c).norm(), s2 = eps * (b - a).norm();
  if (((d1 > s1 && d2 < -s1) || (d1 < -s1 && d2 > s1)) &&
      ((d3 > s2 && d4 < -s2) || (d3 < -s2 && d4 > s2)))
    return true;
  return on_segment(c, d, a, eps) || on_segment(c, d, b, eps) || on_segment(a, b, c, eps) ||
         on_segment(a, b, d, eps);
}

double diameter_of(std::span<const Point> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

double variance(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double s2 = 0.0;
  for (double x : v) s2 += (x - mean) * (x - mean);
  return s2 / n;
}

}  // namespace

bool is_simple(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  const double eps = 1e-12 * std::max(diameter_of(pts), 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point& c = pts[j];
      const Point& d = pts[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share exactly one endpoint; they must not fold back.
        const Point& shared = (j == i + 1) ? b : a;
        const Point& pa = (j == i + 1) ? a : b;
        const Point& pd = (j == i + 1) ? d : c;
        if (std::abs(orient(pa, shared, pd)) <= eps * (pd - pa).norm() &&
            (pa - shared).dot(pd - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d, eps)) return false;
    }
  }
  return true;
}

Polygon::Polygon(std::vector<Point> vertices, bool check_simple) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw InvalidPolygon("a polygon needs at least 3 vertices");
  for (const auto& v : vertices_)
    if (!std::isfinite(v.x()) || !std::isfinite(v.y())) throw InvalidPolygon("non-finite vertex");
  const double diam = diameter_of(vertices_);
  if (!(diam > 0.0)) throw InvalidPolygon("all vertices coincide");
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if ((vertices_[i] - vertices_[(i + 1) % vertices_.size()]).norm() <= 1e-12 * diam)
      throw InvalidPolygon("consecutive vertices " + std::to_string(i) + " coincide");
  if (signed_area(vertices_) < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  if (check_simple) {
    if (!is_simple(vertices_)) throw InvalidPolygon("polygon is self-intersecting");
    if (!(signed_area(vertices_) > 0.0)) throw InvalidPolygon("polygon has zero area");
    simple_ = true;
  }
}

const Point& Polygon::vertex(long i) const {
  const long n = static_cast<long>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
}

Polygon Polygon::transformed(double theta, double scale, const Point& shift) const {
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<Point> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_)
    out.emplace_back(scale * (c * v.x() - s * v.y()) + shift.x(),
                     scale * (s * v.x() + c * v.y()) + shift.y());
  return Polygon(std::move(out), simple_);
}

Polygon Polygon::reflected() const {
  const Point c = vertex_barycenter(*this);
  std::vector<Point> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) out.emplace_back(2.0 * c.x() - v.x(), v.y());
  return Polygon(std::move(out), simple_);
}

Polygon Polygon::scaled_about_barycenter(double scale) const {
  const Point c = vertex_barycenter(*this);
  std::vector<Point> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) out.push_back(c + scale * (v - c));
  return Polygon(std::move(out), simple_);
}

Polygon Polygon::simplified(double rel_tol) const {
  const double diam = diameter(*this);
  std::vector<Point> kept;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = vertices_[(i + n - 1) % n];
    const Point& cur = vertices_[i];
    const Point& next = vertices_[(i + 1) % n];
    if (std::abs(orient(prev, cur, next)) > rel_tol * diam * diam) kept.push_back(cur);
  }
  return Polygon(std::move(kept), simple_);
}

double signed_area(std::span<const Point> pts) {
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) a += cross(pts[i], pts[(i + 1) % pts.size()]);
  return 0.5 * a;
}

double area(const Polygon& p) {
  if (!p.simple()) throw InvalidPolygon("area requires a simple polygon");
  return signed_area(p.vertices());
}

std::vector<double> side_lengths(const Polygon& p) {
  std::vector<double> l(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) l[i] = (p[i + 1] - p[i]).norm();
  return l;
}

double perimeter(const Polygon& p) {
  double s = 0.0;
  for (double l : side_lengths(p)) s += l;
  return s;
}

double diameter(const Polygon& p) { return diameter_of(p.vertices()); }

Point vertex_barycenter(const Polygon& p) {
  Point c = Point::Zero();
  for (const auto& v : p.vertices()) c += v;
  return c / static_cast<double>(p.size());
}

Point area_centroid(const Polygon& p) {
  Point c = Point::Zero();
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = cross(p[i], p[i + 1]);
    a += w;
    c += w * (p[i] + p[i + 1]);
  }
  return c / (3.0 * a);
}

bool is_convex(const Polygon& p, double rel_tol) {
  const double d = diameter(p);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (orient(p[i], p[i + 1], p[i + 2]) < -rel_tol * d * d) return false;
  return true;
}

double max_side_deviation(const Polygon& p) {
  const auto l = side_lengths(p);
  double mean = 0.0;
  for (double x : l) mean += x;
  mean /= static_cast<double>(l.size());
  double dev = 0.0;
  for (double x : l) dev = std::max(dev, std::abs(x - mean) / mean);
  return dev;
}

Polygon regular_polygon(int n, double circumradius, double phase) {
  if (n < 3) throw InvalidPolygon("regular polygon needs n >= 3");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2.0 * kPi * k / n;
    v.emplace_back(circumradius * std::cos(a), circumradius * std::sin(a));
  }
  return Polygon(std::move(v));
}

double regular_polygon_area(int n, double circumradius) {
  return 0.5 * n * circumradius * circumradius * std::sin(2.0 * kPi / n);
}

Polygon regular_polygon_with_area(int n, double area, double phase) {
  return regular_polygon(n, std::sqrt(area / regular_polygon_area(n, 1.0)), phase);
}

ManifoldPoint to_manifold(const Polygon& p) {
  const Point o = vertex_barycenter(p);
  const double diam = diameter(p);
  ManifoldPoint m;
  const std::size_t n = p.size();
  m.x.resize(n);
  m.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = p[i] - o;
    m.r[i] = a.norm();
    if (m.r[i] <= 1e-12 * diam)
      throw DegenerateRadius("vertex " + std::to_string(i) + " coincides with the barycenter");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = p[i] - o, b = p[i + 1] - o;
    m.x[i] = std::atan2(cross(a, b), a.dot(b));
  }
  m.alpha = signed_area(p.vertices());
  return m;
}

Polygon to_polygon(const ManifoldPoint& m) {
  const std::size_t n = m.r.size();
  if (n < 3 || m.x.size() != n) throw InvalidPolygon("manifold point needs matching x and r of size >= 3");
  std::vector<Point> v(n);
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = Point(m.r[i] * std::cos(theta), m.r[i] * std::sin(theta));
    theta += m.x[i];
  }
  return Polygon(std::move(v));
}

ManifoldResiduals validate_manifold(const ManifoldPoint& m, double tol) {
  ManifoldResiduals res;
  const std::size_t n = m.r.size();
  double sx = 0.0, a = 0.0, cx = 0.0, cy = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += m.x[i];
    a += m.r[i] * m.r[(i + 1) % n] * std::sin(m.x[i]);
    cx += m.r[i] * std::cos(theta);
    cy += m.r[i] * std::sin(theta);
    theta += m.x[i];
  }
  res.angle_sum = sx - 2.0 * kPi;
  res.area = (0.5 * a - m.alpha) / (m.alpha != 0.0 ? std::abs(m.alpha) : 1.0);
  res.centroid_cos = cx;
  res.centroid_sin = cy;
  // Centroid sums are lengths; judge them relative to the mean radius.
  double rmean = 0.0;
  for (double r : m.r) rmean += r;
  rmean = n ? rmean / static_cast<double>(n) : 1.0;
  res.pass = std::abs(res.angle_sum) < tol && std::abs(res.area) < tol &&
             std::abs(cx) < tol * std::max(rmean, 1.0) && std::abs(cy) < tol * std::max(rmean, 1.0);
  return res;
}

DeficitReport deficit_and_variances(const Polygon& p, bool with_asymmetry) {
  const ManifoldPoint m = to_manifold(p);
  const std::size_t n = m.r.size();
  std::vector<double> sides(n);
  double L = 0.0, twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = m.r[i], rj = m.r[(i + 1) % n];
    sides[i] = std::sqrt(std::max(0.0, rj * rj + ri * ri - 2.0 * rj * ri * std::cos(m.x[i])));
    L += sides[i];
    twice_area += ri * rj * std::sin(m.x[i]);
  }
  DeficitReport rep;
  const double dn = static_cast<double>(n);
  rep.deficit_delta = L * L - 2.0 * dn * std::tan(kPi / dn) * twice_area;
  rep.sigma_a2 = variance(m.x);
  rep.sigma_r2 = variance(m.r);
  rep.sigma_s2 = variance(sides);
  rep.v = rep.sigma_s2 + rep.sigma_r2;
  const double lhs = rep.v + 0.5 * twice_area * rep.sigma_a2;
  const double scale = L * L;
  rep.stability_ratio = rep.deficit_delta > 1e-14 * scale ? lhs / rep.deficit_delta
                                                           : std::numeric_limits<double>::quiet_NaN();
  if (with_asymmetry) rep.asymmetry = fraenkel_asymmetry(p, static_cast<int>(n)).value;
  return rep;
}

std::vector<Point> convex_intersection(const Polygon& p, const Polygon& q) {
  std::vector<Point> out(p.vertices());
  std::vector<Point> in;
  for (std::size_t e = 0; e < q.size() && !out.empty(); ++e) {
    const Point a = q[e], b = q[e + 1];
    in.swap(out);
    out.clear();
    const std::size_t m = in.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point& cur = in[i];
      const Point& nxt = in[(i + 1) % m];
      const double sc = orient(a, b, cur), sn = orient(a, b, nxt);
      if (sc >= 0.0) out.push_back(cur);
      if ((sc >= 0.0) != (sn >= 0.0)) {
        const double w = sc / (sc - sn);
        out.push_back(cur + w * (nxt - cur));
      }
    }
  }
  return out;
}

double symmetric_difference_area(const Polygon& p, const Polygon& q) {
  if (!is_convex(p) || !is_convex(q))
    throw Unsupported("symmetric difference is only implemented for convex polygons");
  const auto inter = convex_intersection(p, q);
  const double ai = inter.size() >= 3 ? signed_area(inter) : 0.0;
  return std::max(0.0, area(p) + area(q) - 2.0 * ai);
}

namespace {

// Plain Nelder-Mead on R^2.
template <class F>
std::pair<Point, double> nelder_mead_2d(F&& f, Point x0, double step, double xtol, int max_iter) {
  std::array<Point, 3> s{x0, x0 + Point(step, 0.0), x0 + Point(0.0, step)};
  std::array<double, 3> fs{f(s[0]), f(s[1]), f(s[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const Point best = s[idx[0]], mid = s[idx[1]], worst = s[idx[2]];
    const double fb = fs[idx[0]], fm = fs[idx[1]], fw = fs[idx[2]];
    s = {best, mid, worst};
    fs = {fb, fm, fw};
    const double size = std::max((mid - best).norm(), (worst - best).norm());
    if (size < xtol) break;
    const Point c = 0.5 * (best + mid);
    const Point xr = c + (c - worst);
    const double fr = f(xr);
    if (fr < fb) {
      const Point xe = c + 2.0 * (c - worst);
      const double fe = f(xe);
      if (fe < fr) {
        s[2] = xe;
        fs[2] = fe;
      } else {
        s[2] = xr;
        fs[2] = fr;
      }
    } else if (fr < fm) {
      s[2] = xr;
      fs[2] = fr;
    } else {
      const Point xc = fr < fw ? Point(c + 0.5 * (xr - c)) : Point(c + 0.5 * (worst - c));
      const double fc = f(xc);
      if (fc < std::min(fr, fw)) {
        s[2] = xc;
        fs[2] = fc;
      } else {
        s[1] = best + 0.5 * (mid - best);
        s[2] = best + 0.5 * (worst - best);
        fs[1] = f(s[1]);
        fs[2] = f(s[2]);
      }
    }
  }
  int ib = 0;
  for (int i = 1; i < 3; ++i)
    if (fs[i] < fs[ib]) ib = i;
  return {s[ib], fs[ib]};
}

}  // namespace

AsymmetryResult fraenkel_asymmetry(const Polygon& p, int n_ref) {
  if (!is_convex(p)) throw Unsupported("Fraenkel asymmetry requires a convex polygon");
  const double a = area(p);
  const Polygon ref = regular_polygon_with_area(n_ref, a);
  const double diam = diameter(p);
  const double period = 2.0 * kPi / n_ref;

  AsymmetryResult best{std::numeric_limits<double>::infinity(), 0.0, Point::Zero(), false};
  for (bool refl : {false, true}) {
    const Polygon base = refl ? p.reflected() : p;
    const Polygon centred = base.translated(-vertex_barycenter(base));
    auto inner = [&](double theta) {
      const Polygon rot = centred.transformed(theta, 1.0, Point::Zero());
      auto f = [&](const Point& c) { return symmetric_difference_area(rot.translated(c), ref) / a; };
      return nelder_mead_2d(f, Point::Zero(), 0.05 * diam, 1e-10 * diam, 400);
    };
    // Coarse scan over one period; golden section refines the three lowest
    // local minima of the scan, since the objective is not unimodal.
    const int coarse = 36;
    std::vector<double> scan(coarse);
    for (int k = 0; k < coarse; ++k) scan[k] = inner(period * k / coarse).second;
    std::vector<int> minima;
    for (int k = 0; k < coarse; ++k)
      if (scan[k] <= scan[(k + coarse - 1) % coarse] && scan[k] <= scan[(k + 1) % coarse]) minima.push_back(k);
    std::sort(minima.begin(), minima.end(), [&](int i, int j) { return scan[i] < scan[j]; });
    if (minima.size() > 3) minima.resize(3);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int k : minima) {
      const double centre = period * k / coarse;
      double lo = centre - period / coarse, hi = centre + period / coarse;
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = inner(x1).second, f2 = inner(x2).second;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = inner(x1).second;
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = inner(x2).second;
        }
      }
      for (double th : {centre, 0.5 * (lo + hi)}) {
        const auto [c, v] = inner(th);
        if (v < best.value) best = {v, th, c, refl};
      }
    }
  }
  best.value = std::max(0.0, best.value);
  return best;
}

}  // namespace polyfreq
