#include "polyfreq/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include <Eigen/SparseCholesky>

#include "polyfreq/errors.hpp"
#include "polyfreq/symmetrize.hpp"

namespace polyfreq {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double tri_area(const Point& a, const Point& b, const Point& c) { return 0.5 * cross(b - a, c - a); }

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::vector<std::array<int, 3>> ear_clip(const Polygon& p) {
  const int n = static_cast<int>(p.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::array<int, 3>> tris;
  auto inside = [](const Point& q, const Point& a, const Point& b, const Point& c) {
    return tri_area(a, b, q) >= 0.0 && tri_area(b, c, q) >= 0.0 && tri_area(c, a, q) >= 0.0;
  };
  int guard = 0;
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < m; ++k) {
      const int ia = idx[(k + m - 1) % m], ib = idx[k], ic = idx[(k + 1) % m];
      const Point &a = p[ia], &b = p[ib], &c = p[ic];
      if (tri_area(a, b, c) <= 0.0) continue;
      bool ear = true;
      for (int j = 0; j < m && ear; ++j) {
        const int q = idx[j];
        if (q == ia || q == ib || q == ic) continue;
        if (inside(p[q], a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 4 * n) throw InvalidPolygon("ear clipping failed");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

void red_refine(Mesh& mesh) {
  std::unordered_map<std::uint64_t, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    mid.emplace(key, id);
    return id;
  };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    tris.push_back({t[0], ab, ca});
    tris.push_back({ab, t[1], bc});
    tris.push_back({ca, bc, t[2]});
    tris.push_back({ab, bc, ca});
  }
  mesh.triangles = std::move(tris);
  std::vector<BoundaryEdge> be;
  be.reserve(2 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint(e.a, e.b);
    be.push_back({e.a, m, e.poly_edge, -1});
    be.push_back({m, e.b, e.poly_edge, -1});
  }
  mesh.boundary_edges = std::move(be);
  ++mesh.refinement_level;
}

void finalize(Mesh& mesh) {
  mesh.on_boundary.assign(mesh.nodes.size(), 0);
  std::unordered_map<std::uint64_t, int> owner;
  owner.reserve(3 * mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    for (int j = 0; j < 3; ++j) owner[edge_key(mesh.triangles[t][j], mesh.triangles[t][(j + 1) % 3])] = t;
  for (auto& e : mesh.boundary_edges) {
    mesh.on_boundary[e.a] = mesh.on_boundary[e.b] = 1;
    auto it = owner.find(edge_key(e.a, e.b));
    e.triangle = it == owner.end() ? -1 : it->second;
  }
}

double aspect_ratio(const Polygon& tri, int& base) {
  double best = -1.0;
  for (int j = 0; j < 3; ++j) {
    const double l = (tri[j + 1] - tri[j]).norm();
    if (l > best) {
      best = l;
      base = j;
    }
  }
  return best * best / (2.0 * area(tri));
}

Mesh column_mesh(const Polygon& p, int level, int base, double aspect) {
  Mesh mesh;
  mesh.polygon = p;
  mesh.refinement_level = level;
  const Point a = p[base], b = p[base + 1], c = p[base + 2];
  const double len = (b - a).norm();
  const Point e = (b - a) / len;
  const Point nrm(-e.y(), e.x());
  const double height = (c - a).dot(nrm);
  const double s_apex = std::clamp((c - a).dot(e) / len, 0.0, 1.0);
  const int rows = 1 << level;
  const int cols = rows * static_cast<int>(std::ceil(std::sqrt(aspect)));
  std::vector<double> s(cols + 1);
  for (int j = 0; j <= cols; ++j) s[j] = static_cast<double>(j) / cols;
  int snap = static_cast<int>(std::lround(s_apex * cols));
  if (snap == 0 && s_apex > 0.0) snap = 1;
  if (snap == cols && s_apex < 1.0) snap = cols - 1;
  s[snap] = s_apex;
  auto col_height = [&](double sv) {
    if (sv <= s_apex) return s_apex > 0.0 ? height * sv / s_apex : height;
    return s_apex < 1.0 ? height * (1.0 - sv) / (1.0 - s_apex) : height;
  };
  // first node id of each column; columns of zero height hold a single node
  std::vector<int> first(cols + 1);
  std::vector<char> single(cols + 1);
  for (int j = 0; j <= cols; ++j) {
    first[j] = static_cast<int>(mesh.nodes.size());
    const double h = (j == snap) ? height : col_height(s[j]);
    single[j] = h <= 1e-14 * height;
    const Point foot = j == cols ? b : Point(a + s[j] * len * e);
    if (single[j]) {
      mesh.nodes.push_back(j == 0 ? a : (j == cols ? b : foot));
    } else {
      for (int k = 0; k <= rows; ++k)
        mesh.nodes.push_back(k == rows && j == snap ? c : Point(foot + (h * k / rows) * nrm));
    }
  }
  auto node = [&](int j, int k) { return single[j] ? first[j] : first[j] + k; };
  const int nv = static_cast<int>(p.size());
  const int e_base = base, e_right = (base + 1) % nv, e_left = (base + 2) % nv;
  for (int j = 0; j < cols; ++j) {
    for (int k = 0; k < rows; ++k) {
      if (single[j] && single[j + 1]) continue;
      if (single[j]) {
        mesh.triangles.push_back({node(j, 0), node(j + 1, k), node(j + 1, k + 1)});
      } else if (single[j + 1]) {
        mesh.triangles.push_back({node(j, k), node(j + 1, 0), node(j, k + 1)});
      } else {
        mesh.triangles.push_back({node(j, k), node(j + 1, k), node(j + 1, k + 1)});
        mesh.triangles.push_back({node(j, k), node(j + 1, k + 1), node(j, k + 1)});
      }
    }
    mesh.boundary_edges.push_back({node(j, 0), node(j + 1, 0), e_base, -1});
    const int top_edge = (j + 1 <= snap) ? e_left : e_right;
    mesh.boundary_edges.push_back({node(j + 1, rows), node(j, rows), top_edge, -1});
  }
  if (!single[0])
    for (int k = 0; k < rows; ++k) mesh.boundary_edges.push_back({node(0, k + 1), node(0, k), e_left, -1});
  if (!single[cols])
    for (int k = 0; k < rows; ++k) mesh.boundary_edges.push_back({node(cols, k), node(cols, k + 1), e_right, -1});
  return mesh;
}

void grade(Mesh& mesh, double gamma) {
  const Polygon& p = mesh.polygon;
  const std::size_t n = p.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Point v = p[j];
    double r = 0.25 * std::min((p[j + 1] - v).norm(), (p.vertex(static_cast<long>(j) - 1) - v).norm());
    for (std::size_t e = 0; e < n; ++e) {
      if (e == j || (e + 1) % n == j) continue;
      const Point a = p[e], b = p[e + 1];
      const double s = std::clamp((v - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
      r = std::min(r, 0.5 * (a + s * (b - a) - v).norm());
    }
    for (auto& x : mesh.nodes) {
      const double d = (x - v).norm();
      if (d > 0.0 && d < r) x = v + (x - v) * std::pow(d / r, gamma - 1.0);
    }
  }
  for (const auto& t : mesh.triangles)
    if (tri_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) <= 0.0)
      throw InvalidPolygon("vertex grading inverted an element");
}

}  // namespace

Mesh Mesh::transported(const Polygon& moved, const std::function<Point(const Point&)>& disp) const {
  Mesh out(*this);
  out.polygon = moved;
  for (auto& x : out.nodes) x += disp(x);
  return out;
}

Mesh triangulate(const Polygon& p, int level, const MeshOptions& opt) {
  if (!p.simple() || !is_simple(p.vertices())) throw InvalidPolygon("triangulate requires a simple polygon");
  if (level < 0) throw DomainError("refinement level must be non-negative");
  if (p.size() == 3) {
    int base = 0;
    const double asp = aspect_ratio(p, base);
    if (asp > opt.thin_aspect) {
      Mesh m = column_mesh(p, level, base, asp);
      finalize(m);
      return m;
    }
  }
  Mesh mesh;
  mesh.polygon = p;
  const int n = static_cast<int>(p.size());
  mesh.nodes = p.vertices();
  if (is_convex(p)) {
    mesh.nodes.push_back(vertex_barycenter(p));
    for (int i = 0; i < n; ++i) mesh.triangles.push_back({i, (i + 1) % n, n});
  } else {
    mesh.triangles = ear_clip(p);
  }
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({i, (i + 1) % n, i, -1});
  for (int l = 0; l < level; ++l) red_refine(mesh);
  if (opt.grade_vertices) grade(mesh, opt.grade_exponent);
  finalize(mesh);
  return mesh;
}

MeshCheck validate_mesh(const Mesh& mesh) {
  MeshCheck chk;
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : mesh.triangles) {
    if (!(tri_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) > 0.0)) chk.positive_orientation = false;
    for (int j = 0; j < 3; ++j) ++count[edge_key(t[j], t[(j + 1) % 3])];
  }
  std::unordered_map<std::uint64_t, int> bcount;
  for (const auto& e : mesh.boundary_edges) ++bcount[edge_key(e.a, e.b)];
  for (const auto& [key, c] : count) {
    if (c > 2) chk.conforming = false;
    const bool is_b = bcount.count(key) > 0;
    if ((c == 1) != is_b) chk.conforming = false;
  }
  // Boundary edges lie on their polygon edge and every boundary node has degree two.
  const double diam = diameter(mesh.polygon);
  std::unordered_map<int, int> degree;
  for (const auto& e : mesh.boundary_edges) {
    ++degree[e.a];
    ++degree[e.b];
    const Point a = mesh.polygon[e.poly_edge], b = mesh.polygon[e.poly_edge + 1];
    for (int v : {e.a, e.b}) {
      const Point& x = mesh.nodes[v];
      if (std::abs(cross(b - a, x - a)) / (b - a).norm() > 1e-12 * diam) chk.boundary_closed = false;
    }
  }
  for (const auto& [v, d] : degree)
    if (d != 2) chk.boundary_closed = false;
  return chk;
}

void assemble(const Mesh& mesh, const std::vector<int>& dof, Eigen::SparseMatrix<double>& k,
              Eigen::SparseMatrix<double>& m) {
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(9 * mesh.triangles.size());
  tm.reserve(9 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Point& p0 = mesh.nodes[t[0]];
    const Point& p1 = mesh.nodes[t[1]];
    const Point& p2 = mesh.nodes[t[2]];
    const double a = tri_area(p0, p1, p2);
    std::array<Point, 3> g;
    const std::array<const Point*, 3> p{&p0, &p1, &p2};
    for (int i = 0; i < 3; ++i) {
      const Point d = *p[(i + 2) % 3] - *p[(i + 1) % 3];
      g[i] = Point(-d.y(), d.x()) / (2.0 * a);
    }
    for (int i = 0; i < 3; ++i) {
      const int di = dof[t[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof[t[j]];
        if (dj < 0) continue;
        tk.emplace_back(di, dj, a * g[i].dot(g[j]));
        tm.emplace_back(di, dj, a / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  int nd = 0;
  for (int d : dof) nd = std::max(nd, d + 1);
  k.resize(nd, nd);
  m.resize(nd, nd);
  k.setFromTriplets(tk.begin(), tk.end());
  m.setFromTriplets(tm.begin(), tm.end());
}

Eigen::VectorXd EigenSolution::nodal() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof.size()));
  for (std::size_t i = 0; i < dof.size(); ++i)
    if (dof[i] >= 0) v[static_cast<Eigen::Index>(i)] = u[dof[i]];
  return v;
}

Point EigenSolution::gradient(int tri) const {
  const auto& t = mesh->triangles[tri];
  const Point& p0 = mesh->nodes[t[0]];
  const Point& p1 = mesh->nodes[t[1]];
  const Point& p2 = mesh->nodes[t[2]];
  const double a = tri_area(p0, p1, p2);
  const std::array<const Point*, 3> p{&p0, &p1, &p2};
  Point g = Point::Zero();
  for (int i = 0; i < 3; ++i) {
    if (dof[t[i]] < 0) continue;
    const Point d = *p[(i + 2) % 3] - *p[(i + 1) % 3];
    g += u[dof[t[i]]] * Point(-d.y(), d.x()) / (2.0 * a);
  }
  return g;
}

EigenSolution solve_lambda1(std::shared_ptr<const Mesh> mesh, double tol, int max_iter) {
  EigenSolution sol;
  sol.mesh = mesh;
  sol.dof.assign(mesh->nodes.size(), -1);
  int nd = 0;
  for (std::size_t i = 0; i < mesh->nodes.size(); ++i)
    if (!mesh->on_boundary[i]) sol.dof[i] = nd++;
  if (nd == 0) throw SolverError("mesh has no interior nodes; increase the refinement level");
  Eigen::SparseMatrix<double> k, m;
  assemble(*mesh, sol.dof, k, m);

  using Llt = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>;
  Eigen::VectorXd u = Eigen::VectorXd::Ones(nd);
  u /= std::sqrt(u.dot(m * u));
  double rq = u.dot(k * u);
  auto residual = [&](const Eigen::VectorXd& v, double lam) {
    const Eigen::VectorXd ku = k * v;
    return (ku - lam * (m * v)).norm() / ku.norm();
  };

  // Plain inverse iteration until the Rayleigh quotient settles.
  Llt llt(k);
  if (llt.info() != Eigen::Success) throw SolverError("stiffness factorization failed");
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::VectorXd x = llt.solve(m * u);
    x /= std::sqrt(x.dot(m * x));
    const double rq_new = x.dot(k * x);
    const double change = std::abs(rq_new - rq) / rq_new;
    u = std::move(x);
    rq = rq_new;
    if (it >= 2 && change < 1e-6) break;
  }
  // Shifted inverse iteration with the shift safely below lambda1.
  double shift = 0.99 * rq;
  Llt shifted;
  for (int attempt = 0; attempt < 8; ++attempt) {
    shifted.compute(k - shift * m);
    if (shifted.info() == Eigen::Success) break;
    shift *= 0.9;
  }
  if (shifted.info() != Eigen::Success) throw SolverError("shifted factorization failed");
  double res = residual(u, rq);
  for (int j = 0; j < max_iter && res > tol; ++j, ++it) {
    Eigen::VectorXd x = shifted.solve(m * u);
    x /= std::sqrt(x.dot(m * x));
    u = std::move(x);
    rq = u.dot(k * u);
    res = residual(u, rq);
  }
  if (res > 1e-8) throw NoConvergence("eigen iteration residual " + std::to_string(res));

  const Point c = vertex_barycenter(mesh->polygon);
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh->nodes.size(); ++i) {
    if (sol.dof[i] < 0) continue;
    const double d = (mesh->nodes[i] - c).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  if (u[sol.dof[best]] < 0.0) u = -u;
  sol.u = std::move(u);
  sol.lambda1 = rq;
  sol.residual = res;
  sol.iterations = it;
  return sol;
}

EigenSolution solve_lambda1(const Polygon& p, int level, const MeshOptions& opt) {
  return solve_lambda1(std::make_shared<const Mesh>(triangulate(p, level, opt)));
}

double GradientTrace::moment(int p) const {
  double s = 0.0;
  for (const auto& x : samples)
    s += x.g * x.g * (std::pow(x.alpha_hi, p + 1) - std::pow(x.alpha_lo, p + 1)) / (p + 1);
  return s;
}

double GradientTrace::sup() const {
  double s = 0.0;
  for (const auto& x : samples) s = std::max(s, x.g);
  return s;
}

namespace {

GradientTrace collect(const EigenSolution& sol, int edge, const std::function<double(const Point&)>& coord) {
  GradientTrace tr;
  for (const auto& e : sol.mesh->boundary_edges) {
    if (e.poly_edge != edge) continue;
    if (e.triangle < 0) throw FrameMismatch("boundary edge without an adjacent triangle");
    TraceSample s;
    double a0 = coord(sol.mesh->nodes[e.a]), a1 = coord(sol.mesh->nodes[e.b]);
    if (a0 > a1) std::swap(a0, a1);
    s.alpha_lo = a0;
    s.alpha_hi = a1;
    s.alpha_mid = 0.5 * (a0 + a1);
    s.g = sol.gradient(e.triangle).norm();
    s.length = (sol.mesh->nodes[e.a] - sol.mesh->nodes[e.b]).norm();
    tr.samples.push_back(s);
  }
  std::sort(tr.samples.begin(), tr.samples.end(),
            [](const TraceSample& a, const TraceSample& b) { return a.alpha_mid < b.alpha_mid; });
  return tr;
}

}  // namespace

GradientTrace boundary_gradient_trace(const EigenSolution& sol, const SymmetrizationFrame& frame, Side side) {
  const Polygon& p = sol.mesh->polygon;
  const double tol = 1e-9 * diameter(p);
  const std::size_t i = frame.index;
  if (std::abs(frame.to_frame(p[i + 1]).x() - frame.xi) > tol)
    throw FrameMismatch("vertex " + std::to_string(i + 1) + " is not at frame height xi");
  const Point end = side == Side::Upper ? frame.upper_end() : frame.lower_end();
  int edge;
  if ((p[i] - end).norm() <= tol)
    edge = static_cast<int>(i % p.size());
  else if ((p[i + 2] - end).norm() <= tol)
    edge = static_cast<int>((i + 1) % p.size());
  else
    throw FrameMismatch("segment endpoint is not a vertex of the solution polygon");
  GradientTrace tr = collect(sol, edge, [&](const Point& x) { return frame.to_frame(x).x(); });
  tr.side = side;
  if (tr.samples.empty()) throw FrameMismatch("segment carries no boundary edges");
  return tr;
}

GradientTrace edge_gradient_trace(const EigenSolution& sol, int edge) {
  const Polygon& p = sol.mesh->polygon;
  const Point a = p[static_cast<std::size_t>(edge)];
  const Point dir = (p[static_cast<std::size_t>(edge) + 1] - a).normalized();
  return collect(sol, static_cast<int>(edge % p.size()), [&](const Point& x) { return (x - a).dot(dir); });
}

double observed_order(double l0, double l1, double l2) { return std::log2((l0 - l1) / (l1 - l2)); }

}  // namespace polyfreq
