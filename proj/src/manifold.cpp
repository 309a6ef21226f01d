#include "polyfreq/manifold.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "polyfreq/errors.hpp"

namespace polyfreq {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd partial_angles(const Eigen::VectorXd& x) {
  Eigen::VectorXd theta(x.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    theta[i] = acc;
    acc += x[i];
  }
  return theta;
}

// Rows 3 and 4 of DQ (centroid equations) written into rows r0, r0+1.
void centroid_rows(Eigen::MatrixXd& d, Eigen::Index r0, const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd theta = partial_angles(x);
  for (Eigen::Index j = 0; j < n; ++j) {
    double sc = 0.0, ss = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      sc += r[i] * std::sin(theta[i]);
      ss += r[i] * std::cos(theta[i]);
    }
    d(r0, j) = -sc;
    d(r0 + 1, j) = ss;
    d(r0, n + j) = std::cos(theta[j]);
    d(r0 + 1, n + j) = std::sin(theta[j]);
  }
}

void area_row(Eigen::MatrixXd& d, Eigen::Index row, const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index ip = (i + 1) % n, im = (i + n - 1) % n;
    d(row, i) = r[i] * r[ip] * std::cos(x[i]);
    d(row, n + i) = r[ip] * std::sin(x[i]) + r[im] * std::sin(x[im]);
  }
}

}  // namespace

JacobianReport analyze_matrix(const Eigen::MatrixXd& a, double rank_tol) {
  JacobianReport rep;
  rep.matrix_rows = static_cast<int>(a.rows());
  rep.matrix_cols = static_cast<int>(a.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  rep.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s[0] : 0.0;
  for (double v : rep.singular_values)
    if (v > rank_tol * smax) ++rep.rank;
  rep.nullity = rep.matrix_cols - rep.rank;
  return rep;
}

Eigen::Vector4d q_map(const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd theta = partial_angles(x);
  Eigen::Vector4d q = Eigen::Vector4d::Zero();
  q[0] = x.sum() - 2.0 * kPi;
  q[1] = -static_cast<double>(n) * std::sin(2.0 * kPi / n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q[1] += r[i] * r[(i + 1) % n] * std::sin(x[i]);
    q[2] += r[i] * std::cos(theta[i]);
    q[3] += r[i] * std::sin(theta[i]);
  }
  return q;
}

Eigen::MatrixXd q_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 2 * n);
  d.row(0).head(n).setOnes();
  area_row(d, 1, x, r);
  centroid_rows(d, 2, x, r);
  return d;
}

Eigen::VectorXd psi_map(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double s) {
  const Eigen::Index n = x.size();
  const Eigen::Vector4d q = q_map(x, r);
  Eigen::VectorXd p(n + 4);
  p[0] = q[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = r[i], b = r[(i + 1) % n];
    p[1 + i] = b * b + a * a - 2.0 * a * b * std::cos(x[i]) - s;
  }
  p.tail(3) = q.tail(3);
  return p;
}

Eigen::MatrixXd psi_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double /*s*/) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 4, 2 * n + 1);
  d.row(0).head(n).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index ip = (i + 1) % n;
    d(1 + i, i) = 2.0 * r[i] * r[ip] * std::sin(x[i]);
    d(1 + i, n + i) += 2.0 * r[i] - 2.0 * r[ip] * std::cos(x[i]);
    d(1 + i, n + ip) += 2.0 * r[ip] - 2.0 * r[i] * std::cos(x[i]);
    d(1 + i, 2 * n) = -1.0;
  }
  area_row(d, n + 1, x, r);
  centroid_rows(d, n + 2, x, r);
  return d;
}

Eigen::MatrixXd dq_matrix_at_regular(int n, bool as_printed) {
  const double c = std::cos(2.0 * kPi / n), s = std::sin(2.0 * kPi / n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 2 * n);
  for (int j = 0; j < n; ++j) {
    // r_{j,n} and t_{j,n}: tails of the sine and cosine sums.
    double rj = 0.0, tj = 0.0;
    for (int i = j + 1; i < n; ++i) {
      rj -= std::sin(2.0 * kPi * i / n);
      tj += std::cos(2.0 * kPi * i / n);
    }
    d(0, j) = 1.0;
    d(1, j) = c;
    d(2, j) = rj;
    d(3, j) = tj;
    d(1, n + j) = 2.0 * s;
    d(2, n + j) = std::cos(2.0 * kPi * j / n);
    d(3, n + j) = std::sin(2.0 * kPi * j / n);
  }
  if (as_printed) d(3, n) = 1.0;
  return d;
}

Eigen::MatrixXd dpsi_matrix_at_regular(int n, bool as_printed) {
  const double s2 = 2.0 * std::sin(2.0 * kPi / n);
  const double w = 2.0 * (1.0 - std::cos(2.0 * kPi / n));
  const Eigen::MatrixXd dq = dq_matrix_at_regular(n, as_printed);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 4, 2 * n + 1);
  d.row(0).head(n).setOnes();
  for (int i = 0; i < n; ++i) {
    d(1 + i, i) = s2;
    d(1 + i, n + i) = w;
    d(1 + i, n + (i + 1) % n) = w;
    d(1 + i, 2 * n) = -1.0;
  }
  d.block(n + 1, 0, 3, 2 * n) = dq.bottomRows(3);
  return d;
}

JacobianReport dq_at_regular(int n, double rank_tol) {
  if (n < 3) throw DomainError("n must be at least 3");
  JacobianReport rep = analyze_matrix(dq_matrix_at_regular(n), rank_tol);
  rep.n = n;
  return rep;
}

JacobianReport dpsi_at_regular(int n, double rank_tol) {
  if (n < 3) throw DomainError("n must be at least 3");
  JacobianReport rep = analyze_matrix(dpsi_matrix_at_regular(n), rank_tol);
  rep.n = n;
  return rep;
}

double convexity_radius(int n, double alpha) {
  const Polygon reg = regular_polygon_with_area(n, alpha);
  return 0.25 * (reg[1] - reg[0]).norm();
}

SampleBatch sample_near_regular(int n, double radius, double alpha, std::uint64_t seed, int count) {
  if (n < 3) throw DomainError("n must be at least 3");
  if (!(radius >= 0.0)) throw DomainError("radius must be non-negative");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  SampleBatch batch;
  batch.mu_n = convexity_radius(n, alpha);
  batch.convexity_not_guaranteed = radius > batch.mu_n;
  const Polygon reg = regular_polygon_with_area(n, alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t max_attempts = 1000 * static_cast<std::size_t>(std::max(count, 1)) + 1000;
  std::size_t attempts = 0;
  while (static_cast<int>(batch.polygons.size()) < count) {
    if (++attempts > max_attempts)
      throw NoConvergence("sampler rejected too many candidates; reduce the radius");
    std::vector<Point> v(reg.vertices());
    for (auto& p : v) {
      const double rho = radius * std::sqrt(unif(rng));
      const double phi = 2.0 * kPi * unif(rng);
      p += Point(rho * std::cos(phi), rho * std::sin(phi));
    }
    if (!is_simple(v) || signed_area(v) <= 0.0) {
      ++batch.rejected;
      continue;
    }
    Polygon cand(std::move(v));
    if (!is_convex(cand)) {
      ++batch.rejected;
      continue;
    }
    cand = cand.scaled_about_barycenter(std::sqrt(alpha / area(cand)));
    bool inside = true;
    for (std::size_t i = 0; i < cand.size() && inside; ++i)
      inside = (cand[i] - reg[i]).norm() <= radius * (1.0 + 1e-12) + 1e-12 * reg[i].norm();
    if (!inside || !is_convex(cand)) {
      ++batch.rejected;
      continue;
    }
    batch.polygons.push_back(std::move(cand));
  }
  return batch;
}

}  // namespace polyfreq
