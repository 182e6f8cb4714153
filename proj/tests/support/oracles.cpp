#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace teamcomp::oracle {

using Eigen::Index;

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

double squared_distance(const Eigen::MatrixXd& a, Index i, const Eigen::MatrixXd& b, Index j) {
  double s = 0.0;
  for (Index c = 0; c < a.cols(); ++c) {
    const double d = a(i, c) - b(j, c);
    s += d * d;
  }
  return s;
}

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: size mismatch");
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += choose2(count);
  for (const auto& [key, count] : rows) sum_rows += choose2(count);
  for (const auto& [key, count] : cols) sum_cols += choose2(count);
  const double expected = sum_rows * sum_cols / choose2(static_cast<double>(a.size()));
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

double silhouette(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const Index n = points.rows();
  std::map<int, double> sizes;
  for (const int l : labels) sizes[l] += 1.0;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    std::map<int, double> sums;
    for (Index j = 0; j < n; ++j) {
      if (j != i) sums[labels[static_cast<std::size_t>(j)]] += std::sqrt(squared_distance(points, i, points, j));
    }
    const int own = labels[static_cast<std::size_t>(i)];
    if (sizes[own] <= 1.0) continue;
    const double a = sums[own] / (sizes[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, size] : sizes) {
      if (label != own) b = std::min(b, sums[label] / size);
    }
    total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

std::vector<int> brute_assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points, i, centroids, c);
      if (d < best) {
        best = d;
        labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
      }
    }
  }
  return labels;
}

double brute_distortion(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centroids.rows(); ++c) best = std::min(best, squared_distance(points, i, centroids, c));
    total += best;
  }
  return total;
}

double best_two_partition_distortion(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  if (n < 2 || n > 20) throw std::invalid_argument("best_two_partition_distortion: need 2..20 rows");
  double best = std::numeric_limits<double>::infinity();
  // Row 0 always sits in group 0, so each split is visited once.
  for (unsigned long mask = 1; mask < (1UL << (n - 1)); ++mask) {
    Eigen::RowVectorXd sum0 = Eigen::RowVectorXd::Zero(points.cols());
    Eigen::RowVectorXd sum1 = Eigen::RowVectorXd::Zero(points.cols());
    double n0 = 0.0, n1 = 0.0;
    for (Index i = 0; i < n; ++i) {
      const bool second = i > 0 && ((mask >> (i - 1)) & 1UL);
      (second ? sum1 : sum0) += points.row(i);
      (second ? n1 : n0) += 1.0;
    }
    const Eigen::RowVectorXd mean0 = sum0 / n0;
    const Eigen::RowVectorXd mean1 = sum1 / n1;
    double cost = 0.0;
    for (Index i = 0; i < n; ++i) {
      const bool second = i > 0 && ((mask >> (i - 1)) & 1UL);
      cost += (points.row(i) - (second ? mean1 : mean0)).squaredNorm();
    }
    best = std::min(best, cost);
  }
  return best;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  const Index d = points.cols();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (Index c = 0; c < d; ++c) {
    for (Index i = 0; i < n; ++i) mean[static_cast<std::size_t>(c)] += points(i, c);
    mean[static_cast<std::size_t>(c)] /= static_cast<double>(n);
  }
  Eigen::MatrixXd cov(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) {
        s += (points(i, a) - mean[static_cast<std::size_t>(a)]) * (points(i, b) - mean[static_cast<std::size_t>(b)]);
      }
      cov(a, b) = s / static_cast<double>(n - 1);
    }
  }
  return cov;
}

EigenPairs power_iteration(const Eigen::MatrixXd& symmetric, int count, int max_iter, double tol) {
  const Index d = symmetric.rows();
  EigenPairs out;
  out.values.resize(count);
  out.vectors.resize(d, count);
  Eigen::MatrixXd deflated = symmetric;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(d) / std::sqrt(static_cast<double>(d));
    for (Index j = 0; j < d; ++j) v(j) += 1e-3 * static_cast<double>(j + 1);  // avoid orthogonal starts
    v.normalize();
    for (int it = 0; it < max_iter; ++it) {
      Eigen::VectorXd next = deflated * v;
      next.normalize();
      if (next.dot(v) < 0.0) next = -next;
      const double change = (next - v).norm();
      v = next;
      if (change < tol) break;
    }
    const double lambda = v.dot(deflated * v);
    out.values(k) = lambda;
    out.vectors.col(k) = v;
    deflated -= lambda * v * v.transpose();
  }
  return out;
}

Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& v, const Eigen::VectorXd& y, double c) {
  const auto clipped = [&](double nu) {
    return (v - nu * y).cwiseMax(0.0).cwiseMin(c).eval();
  };
  // g(nu) = y . clip(v - nu y) is non-increasing in nu.
  double lo = -1.0, hi = 1.0;
  while (y.dot(clipped(lo)) < 0.0) lo *= 2.0;
  while (y.dot(clipped(hi)) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (y.dot(clipped(mid)) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clipped(0.5 * (lo + hi));
}

SvmSolution svm_dual_qp(const Eigen::MatrixXd& x, std::span<const int> labels, double c, int iterations) {
  const Index n = x.rows();
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
  const Eigen::MatrixXd yx = y.asDiagonal() * x;
  const Eigen::MatrixXd q = yx * yx.transpose();
  const double lipschitz = std::max(q.operatorNorm(), 1e-12);

  // Minimize 0.5 a'Qa - 1'a.
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = a;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = q * z - Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd next = project_box_hyperplane(z - grad / lipschitz, y, c);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / t_next) * (next - a);
    a = next;
    t = t_next;
  }

  SvmSolution out;
  out.alphas = a;
  out.w = yx.transpose() * a;
  // Hinge loss in b is convex and piecewise linear with kinks at
  // b = y_i - w.x_i; its minimizers form an interval between two kinks.
  std::vector<double> kinks(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) kinks[static_cast<std::size_t>(i)] = y(i) - x.row(i).dot(out.w);
  const auto loss = [&](double b) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += std::max(0.0, 1.0 - y(i) * (x.row(i).dot(out.w) + b));
    return s;
  };
  double best = std::numeric_limits<double>::infinity();
  for (const double k : kinks) best = std::min(best, loss(k));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const double k : kinks) {
    if (loss(k) <= best + 1e-9) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  out.bias = 0.5 * (lo + hi);
  return out;
}

std::pair<double, double> lambda_window(const Eigen::MatrixXd& points, std::span<const int> labels) {
  double within = 0.0;
  double between = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = i + 1; j < points.rows(); ++j) {
      const double d = std::sqrt(squared_distance(points, i, points, j));
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        within = std::max(within, d);
      } else {
        between = std::min(between, d);
      }
    }
  }
  return {within, between};
}

double chi_square_uniform(std::span<const int> categories, int n_categories) {
  std::vector<double> counts(static_cast<std::size_t>(n_categories), 0.0);
  for (const int c : categories) counts[static_cast<std::size_t>(c)] += 1.0;
  const double expected = static_cast<double>(categories.size()) / n_categories;
  double stat = 0.0;
  for (const double o : counts) stat += (o - expected) * (o - expected) / expected;
  return stat;
}

}  // namespace teamcomp::oracle
