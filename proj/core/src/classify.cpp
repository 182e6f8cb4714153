#include "teamcomp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include <Eigen/Cholesky>

#include "teamcomp/error.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/seed.hpp"

namespace teamcomp {

namespace {

using Eigen::Index;

void require_both_labels(const Dataset& data, const char* op) {
  if (data.size() == 0) throw ValidationError(std::string(op) + ": no samples");
  if (static_cast<Index>(data.y.size()) != data.size()) {
    throw DimensionError(std::string(op) + ": label count does not match sample count");
  }
  bool seen[2] = {false, false};
  for (const int label : data.y) {
    if (label != 0 && label != 1) throw ValidationError(std::string(op) + ": labels must be 0 or 1");
    seen[label] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw ValidationError(std::string(op) + ": training data contains a single class");
  }
}

void require_dim(Index expected, Index got, const char* op) {
  if (expected != got) {
    throw DimensionError(std::string(op) + ": expected " + std::to_string(expected) +
                         " features, got " + std::to_string(got));
  }
}

double linear_score(const Eigen::VectorXd& theta, const RowRef& x) {
  const Index d = x.size();
  return x.dot(theta.head(d).transpose()) + theta(d);
}

}  // namespace

Dataset to_dataset(std::span<const CompositionSample> samples) {
  Dataset data;
  if (samples.empty()) return data;
  const auto width = static_cast<Index>(samples.front().x.size());
  data.x.resize(static_cast<Index>(samples.size()), width);
  data.y.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (static_cast<Index>(samples[i].x.size()) != width) {
      throw DimensionError("to_dataset: samples have differing widths");
    }
    for (Index j = 0; j < width; ++j) {
      data.x(static_cast<Index>(i), j) = samples[i].x[static_cast<std::size_t>(j)];
    }
    data.y.push_back(samples[i].y);
  }
  return data;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.x.resize(static_cast<Index>(indices.size()), data.dim());
  out.y.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.x.row(static_cast<Index>(r)) = data.x.row(static_cast<Index>(indices[r]));
    out.y.push_back(data.y[indices[r]]);
  }
  return out;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic:
      return "lr";
    case ModelKind::kGda:
      return "gda";
    case ModelKind::kSvm:
      return "svm";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lr") return ModelKind::kLogistic;
  if (name == "gda") return ModelKind::kGda;
  if (name == "svm") return ModelKind::kSvm;
  throw ValidationError("unknown model kind '" + name + "' (expected lr, gda or svm)");
}

// ---------------------------------------------------------------- logistic

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LrModel lr_train(const Dataset& data, const LrOptions& options, std::uint64_t seed) {
  require_both_labels(data, "lr_train");
  if (!(options.learning_rate > 0.0)) throw ValidationError("lr_train: learning rate must be positive");
  if (options.epochs < 1) throw ValidationError("lr_train: epochs must be at least 1");

  const Index d = data.dim();
  LrModel model;
  model.theta = Eigen::VectorXd::Zero(d + 1);
  Rng rng(seed);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (const std::size_t i : rng.permutation(static_cast<std::size_t>(data.size()))) {
      const auto row = data.x.row(static_cast<Index>(i));
      const double step = options.learning_rate * (data.y[i] - sigmoid(linear_score(model.theta, row)));
      model.theta.head(d) += step * row.transpose();
      model.theta(d) += step;
    }
    ++model.epochs_run;
  }
  if (!model.theta.allFinite()) throw NumericalError("lr_train: parameters diverged");
  model.final_log_likelihood = lr_log_likelihood(model, data);
  return model;
}

double lr_predict(const LrModel& model, const RowRef& x) {
  require_dim(model.theta.size() - 1, x.size(), "lr_predict");
  return sigmoid(linear_score(model.theta, x));
}

int lr_label(const LrModel& model, const RowRef& x) { return lr_predict(model, x) >= 0.5 ? 1 : 0; }

double lr_log_likelihood(const Eigen::VectorXd& theta, const Dataset& data) {
  require_dim(theta.size() - 1, data.dim(), "lr_log_likelihood");
  constexpr double kEps = 1e-12;
  double total = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const double h = std::clamp(sigmoid(linear_score(theta, data.x.row(i))), kEps, 1.0 - kEps);
    total += data.y[static_cast<std::size_t>(i)] == 1 ? std::log(h) : std::log(1.0 - h);
  }
  return total;
}

double lr_log_likelihood(const LrModel& model, const Dataset& data) {
  return lr_log_likelihood(model.theta, data);
}

Eigen::VectorXd lr_gradient(const Eigen::VectorXd& theta, const Dataset& data) {
  require_dim(theta.size() - 1, data.dim(), "lr_gradient");
  const Index d = data.dim();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(d + 1);
  for (Index i = 0; i < data.size(); ++i) {
    const auto row = data.x.row(i);
    const double residual = data.y[static_cast<std::size_t>(i)] - sigmoid(linear_score(theta, row));
    grad.head(d) += residual * row.transpose();
    grad(d) += residual;
  }
  return grad;
}

// ---------------------------------------------------------------------- GDA

namespace {

// Factorization counts as failed when a pivot is negligible next to the
// largest diagonal entry, not only when LLT reports a negative pivot.
bool factorizes(const Eigen::MatrixXd& a, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(a);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal().array().square();
  const double scale = std::max(a.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return pivots.allFinite() && pivots.minCoeff() > 1e-12 * scale;
}

Eigen::LLT<Eigen::MatrixXd> factor_with_ridge(const GdaModel& model) {
  const Index d = model.sigma.rows();
  Eigen::LLT<Eigen::MatrixXd> llt;
  const Eigen::MatrixXd a = model.sigma + model.ridge * Eigen::MatrixXd::Identity(d, d);
  if (!factorizes(a, llt)) throw NumericalError("GDA covariance is not positive definite");
  return llt;
}

}  // namespace

void gda_refresh(GdaModel& model) {
  const auto llt = factor_with_ridge(model);
  model.weights = llt.solve(model.mu1 - model.mu0);
  const double quad1 = model.mu1.dot(llt.solve(model.mu1));
  const double quad0 = model.mu0.dot(llt.solve(model.mu0));
  model.offset = -0.5 * (quad1 - quad0) + std::log(model.phi / (1.0 - model.phi));
}

GdaModel gda_fit(const Dataset& data, double ridge) {
  require_both_labels(data, "gda_fit");
  if (!(ridge > 0.0)) throw ValidationError("gda_fit: ridge must be positive");
  const Index m = data.size();
  const Index d = data.dim();

  GdaModel model;
  model.mu0 = Eigen::VectorXd::Zero(d);
  model.mu1 = Eigen::VectorXd::Zero(d);
  Index positives = 0;
  for (Index i = 0; i < m; ++i) {
    if (data.y[static_cast<std::size_t>(i)] == 1) {
      model.mu1 += data.x.row(i).transpose();
      ++positives;
    } else {
      model.mu0 += data.x.row(i).transpose();
    }
  }
  model.phi = static_cast<double>(positives) / static_cast<double>(m);
  model.mu1 /= static_cast<double>(positives);
  model.mu0 /= static_cast<double>(m - positives);

  Eigen::MatrixXd centered(m, d);
  for (Index i = 0; i < m; ++i) {
    const auto& mu = data.y[static_cast<std::size_t>(i)] == 1 ? model.mu1 : model.mu0;
    centered.row(i) = data.x.row(i) - mu.transpose();
  }
  model.sigma = (centered.transpose() * centered) / static_cast<double>(m);
  model.sigma = 0.5 * (model.sigma + model.sigma.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt;
  model.ridge = 0.0;
  if (!factorizes(model.sigma, llt)) {
    double applied = ridge;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    while (!factorizes(model.sigma + applied * eye, llt)) {
      applied *= 2.0;
      if (!std::isfinite(applied)) throw NumericalError("gda_fit: covariance cannot be regularized");
    }
    model.ridge = applied;
  }
  gda_refresh(model);
  return model;
}

GdaPrediction gda_predict(const GdaModel& model, const RowRef& x) {
  require_dim(model.weights.size(), x.size(), "gda_predict");
  GdaPrediction out;
  out.posterior = sigmoid(x.dot(model.weights.transpose()) + model.offset);
  out.label = out.posterior >= 0.5 ? 1 : 0;
  return out;
}

double gda_log_likelihood(const GdaModel& model, const Dataset& data) {
  require_dim(model.mu0.size(), data.dim(), "gda_log_likelihood");
  const auto llt = factor_with_ridge(model);
  const Index d = data.dim();
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double norm = -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det);
  double total = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const int y = data.y[static_cast<std::size_t>(i)];
    const Eigen::VectorXd diff = data.x.row(i).transpose() - (y == 1 ? model.mu1 : model.mu0);
    total += norm - 0.5 * diff.dot(llt.solve(diff)) + (y == 1 ? std::log(model.phi) : std::log(1.0 - model.phi));
  }
  return total;
}

// ---------------------------------------------------------------------- SVM

namespace {

// Pair-wise SMO in the form of Keerthi et al. / Fan, Chen and Lin: each step
// takes the maximal-violating first index and the second index with the
// largest second-order gain, then solves the two-variable subproblem
// analytically. With a linear kernel w is explicit and v = X w is cached.
//
// Stopping gap: with F_t = y_t - w.x_t, m = max F over I_up and M = min F
// over I_low, any bias in [M, m] leaves every KKT violation below m - M.
//
// Shrinking: a bound variable that can only move in a direction its F value
// rules out is dropped from the active set. Since w is explicit, restoring
// the full set only needs v = X w.
class SmoSolver {
 public:
  SmoSolver(const Dataset& data, const SvmOptions& options, std::uint64_t seed,
            const Eigen::VectorXd* initial_alphas)
      : xt_(data.x.transpose()), c_(options.c), tol_(options.tol), record_(options.record_dual_trace),
        rng_(seed) {
    const Index n = data.size();
    y_.resize(n);
    for (Index i = 0; i < n; ++i) y_(i) = data.y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    alpha_ = initial_alphas != nullptr ? *initial_alphas : Eigen::VectorXd::Zero(n);
    w_ = xt_ * alpha_.cwiseProduct(y_);
    v_ = xt_.transpose() * w_;
    sum_alpha_ = alpha_.sum();
    norms_ = xt_.colwise().squaredNorm().transpose();
    k_i_.resize(n);
    restore_all();
  }

  SvmModel run(int max_passes) {
    const Index n = y_.size();
    const long long max_steps = static_cast<long long>(max_passes) * static_cast<long long>(n);
    const long long shrink_every = std::min<long long>(n, 1000);
    long long steps = 0;
    long long until_shrink = shrink_every;
    bool converged = false;
    while (steps < max_steps) {
      if (--until_shrink == 0) {
        shrink();
        until_shrink = shrink_every;
      }
      const Extremes e = extremes();
      if (e.up < 0 || e.low < 0 || e.m - e.big_m <= tol_) {
        // Converged on the active set; confirm on all samples with exact v.
        v_.noalias() = xt_.transpose() * w_;
        restore_all();
        const Extremes full = extremes();
        if (full.up < 0 || full.low < 0 || full.m - full.big_m <= tol_) {
          converged = true;
          break;
        }
        shrink();
        until_shrink = shrink_every;
        continue;
      }
      step(e.up, e.m);
      ++steps;
    }
    v_.noalias() = xt_.transpose() * w_;
    restore_all();

    SvmModel model;
    model.converged = converged;
    model.passes = static_cast<int>((steps + n - 1) / std::max<Index>(n, 1));
    model.alphas = alpha_;
    model.bias = bias();
    model.c = c_;
    for (Index t = 0; t < n; ++t) {
      if (alpha_(t) > 0.0) model.support.push_back(static_cast<std::size_t>(t));
    }
    model.support_vectors.resize(static_cast<Index>(model.support.size()), xt_.rows());
    model.support_coef.resize(static_cast<Index>(model.support.size()));
    for (std::size_t s = 0; s < model.support.size(); ++s) {
      const auto t = static_cast<Index>(model.support[s]);
      model.support_vectors.row(static_cast<Index>(s)) = xt_.col(t).transpose();
      model.support_coef(static_cast<Index>(s)) = alpha_(t) * y_(t);
    }
    model.dual_trace = std::move(trace_);
    return model;
  }

 private:
  struct Extremes {
    Index up = -1;  // argmax F over active I_up
    Index low = -1;
    double m = -std::numeric_limits<double>::infinity();
    double big_m = std::numeric_limits<double>::infinity();
  };

  double f(Index t) const { return y_(t) - v_(t); }

  bool in_up(Index t) const { return y_(t) > 0.0 ? alpha_(t) < c_ : alpha_(t) > 0.0; }
  bool in_low(Index t) const { return y_(t) > 0.0 ? alpha_(t) > 0.0 : alpha_(t) < c_; }

  void restore_all() {
    active_.resize(static_cast<std::size_t>(y_.size()));
    std::iota(active_.begin(), active_.end(), Index{0});
  }

  // Active indices in scan order: a rotation by the seeded offset drawn in
  // extremes(), so ties go to the first index in that order.
  template <typename Visit>
  void scan(Visit&& visit) const {
    const std::size_t a = active_.size();
    for (std::size_t s = offset_; s < a; ++s) visit(active_[s]);
    for (std::size_t s = 0; s < offset_; ++s) visit(active_[s]);
  }

  Extremes extremes() {
    Extremes e;
    offset_ = active_.empty() ? 0 : rng_.index(active_.size());
    scan([&](Index t) {
      const double ft = f(t);
      if (in_up(t) && ft > e.m) {
        e.m = ft;
        e.up = t;
      }
      if (in_low(t) && ft < e.big_m) {
        e.big_m = ft;
        e.low = t;
      }
    });
    return e;
  }

  void shrink() {
    const Extremes e = extremes();
    if (e.up < 0 || e.low < 0) return;
    std::size_t kept = 0;
    for (const Index t : active_) {
      const bool up = in_up(t);
      const bool low = in_low(t);
      const bool drop = (up && !low && f(t) < e.big_m) || (low && !up && f(t) > e.m);
      if (!drop) active_[kept++] = t;
    }
    active_.resize(kept);
  }

  // Free samples pin the bias exactly; without any, the midpoint of the
  // feasible interval.
  double bias() const {
    double sum = 0.0;
    Index free = 0;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < y_.size(); ++t) {
      if (alpha_(t) > 0.0 && alpha_(t) < c_) {
        sum += f(t);
        ++free;
      }
      if (in_up(t)) hi = std::max(hi, f(t));
      if (in_low(t)) lo = std::min(lo, f(t));
    }
    if (free > 0) return sum / static_cast<double>(free);
    if (!std::isfinite(hi)) return lo;
    if (!std::isfinite(lo)) return hi;
    return 0.5 * (hi + lo);
  }

  void step(Index i, double m) {
    const auto xi = xt_.col(i);
    for (const Index t : active_) k_i_(t) = xt_.col(t).dot(xi);

    // Second index: largest (m - F_t)^2 / a_it over active I_low with F_t < m.
    Index j = -1;
    double best_gain = 0.0;
    scan([&](Index t) {
      if (!in_low(t)) return;
      const double diff = m - f(t);
      if (!(diff > 0.0)) return;
      const double gain = diff * diff / curvature(i, t);
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    });

    const double room_i = y_(i) > 0.0 ? c_ - alpha_(i) : alpha_(i);
    const double room_j = y_(j) > 0.0 ? alpha_(j) : c_ - alpha_(j);
    const double delta = std::min({(m - f(j)) / curvature(i, j), room_i, room_j});

    // alpha_i moves by y_i delta and alpha_j by -y_j delta, keeping
    // sum alpha y fixed. A step that uses up a sample's room lands exactly on
    // the bound.
    const double old_i = alpha_(i);
    const double old_j = alpha_(j);
    alpha_(i) = delta == room_i ? (y_(i) > 0.0 ? c_ : 0.0) : old_i + y_(i) * delta;
    alpha_(j) = delta == room_j ? (y_(j) > 0.0 ? 0.0 : c_) : old_j - y_(j) * delta;
    const double d_i = (alpha_(i) - old_i) * y_(i);
    const double d_j = (alpha_(j) - old_j) * y_(j);
    const auto xj = xt_.col(j);
    w_ += d_i * xi + d_j * xj;
    for (const Index t : active_) v_(t) += d_i * k_i_(t) + d_j * xt_.col(t).dot(xj);
    sum_alpha_ += (alpha_(i) - old_i) + (alpha_(j) - old_j);
    if (record_) trace_.push_back(sum_alpha_ - 0.5 * w_.squaredNorm());
  }

  double curvature(Index i, Index t) const {
    const double a = norms_(i) + norms_(t) - 2.0 * k_i_(t);
    return a > kCurvatureFloor ? a : kCurvatureFloor;
  }

  static constexpr double kCurvatureFloor = 1e-12;

  const Eigen::MatrixXd xt_;  // one sample per column, for contiguous dot products
  Eigen::VectorXd y_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd w_;
  Eigen::VectorXd v_;  // X w; exact on the active set up to rounding
  Eigen::VectorXd norms_;
  Eigen::VectorXd k_i_;
  std::vector<Index> active_;
  std::size_t offset_ = 0;
  double sum_alpha_ = 0.0;
  double c_;
  double tol_;
  bool record_;
  Rng rng_;
  std::vector<double> trace_;
};

}  // namespace

namespace {

SvmModel train_smo(const Dataset& data, const SvmOptions& options, std::uint64_t seed,
                   const Eigen::VectorXd* initial_alphas) {
  require_both_labels(data, "svm_train");
  if (!(options.c > 0.0) || !std::isfinite(options.c)) throw ValidationError("svm_train: C must be positive");
  if (!(options.tol > 0.0)) throw ValidationError("svm_train: tol must be positive");
  if (options.max_passes < 1) throw ValidationError("svm_train: max_passes must be at least 1");
  SmoSolver solver(data, options, seed, initial_alphas);
  SvmModel model = solver.run(options.max_passes);
  model.max_kkt_violation = svm_kkt_violation(model, data);
  return model;
}

}  // namespace

SvmModel svm_train(const Dataset& data, const SvmOptions& options, std::uint64_t seed) {
  return train_smo(data, options, seed, nullptr);
}

SvmModel svm_train(const Dataset& data, const SvmOptions& options, std::uint64_t seed,
                   const Eigen::VectorXd& initial_alphas) {
  if (initial_alphas.size() != data.size()) {
    throw DimensionError("svm_train: " + std::to_string(initial_alphas.size()) + " initial alphas for " +
                         std::to_string(data.size()) + " samples");
  }
  double balance = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const double a = initial_alphas(i);
    if (!(a >= 0.0 && a <= options.c)) throw ValidationError("svm_train: initial alphas must lie in [0, C]");
    balance += data.y[static_cast<std::size_t>(i)] == 1 ? a : -a;
  }
  if (std::abs(balance) > kAlphaBalanceTolerance * std::max(1.0, options.c * static_cast<double>(data.size()))) {
    throw ValidationError("svm_train: initial alphas violate sum alpha_i y_i = 0");
  }
  return train_smo(data, options, seed, &initial_alphas);
}

double svm_decision(const SvmModel& model, const RowRef& x) {
  if (model.support_vectors.rows() == 0) return model.bias;
  require_dim(model.support_vectors.cols(), x.size(), "svm_decision");
  return (model.support_vectors * x.transpose()).dot(model.support_coef) + model.bias;
}

int svm_label(const SvmModel& model, const RowRef& x) { return svm_decision(model, x) >= 0.0 ? 1 : 0; }

Eigen::VectorXd svm_weights(const SvmModel& model) {
  return model.support_vectors.transpose() * model.support_coef;
}

double svm_dual_objective(const SvmModel& model) {
  return model.support_coef.cwiseAbs().sum() - 0.5 * svm_weights(model).squaredNorm();
}

double svm_kkt_violation(const SvmModel& model, const Dataset& data) {
  if (model.alphas.size() != data.size()) {
    throw DimensionError("svm_kkt_violation: model was not trained on this dataset");
  }
  const Eigen::VectorXd w = svm_weights(model);
  double worst = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const double y = data.y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    const double margin = y * (data.x.row(i).dot(w.transpose()) + model.bias);
    const double a = model.alphas(i);
    double violation = 0.0;
    if (a <= 0.0) {
      violation = std::max(0.0, 1.0 - margin);
    } else if (a >= model.c) {
      violation = std::max(0.0, margin - 1.0);
    } else {
      violation = std::abs(margin - 1.0);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

namespace {

// alpha * (to / from), with samples at the old upper bound placed exactly on
// the new one.
Eigen::VectorXd rescale_alphas(const Eigen::VectorXd& alphas, double from, double to) {
  Eigen::VectorXd out(alphas.size());
  const double ratio = to / from;
  for (Index i = 0; i < alphas.size(); ++i) {
    out(i) = alphas(i) >= from ? to : std::min(alphas(i) * ratio, to);
  }
  return out;
}

}  // namespace

SvmModel svm_train_select_c(const Dataset& data, std::span<const double> grid, const SvmOptions& options,
                            std::uint64_t seed, double validation_fraction) {
  if (grid.empty()) throw ValidationError("svm_train_select_c: empty C grid");
  if (grid.size() == 1) {
    SvmOptions single = options;
    single.c = grid.front();
    return svm_train(data, single, seed);
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ValidationError("svm_train_select_c: validation fraction must be in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(data.size());
  const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(validation_fraction * n)));
  if (n_val >= n) throw ValidationError("svm_train_select_c: too few samples to hold out a validation set");

  Rng rng(derive_seed(seed, 0));
  auto order = rng.permutation(n);
  const Dataset validation = subset(data, std::span(order).first(n_val));
  const Dataset fit_part = subset(data, std::span(order).subspan(n_val));

  // C values are visited in increasing order, each solve starting from the
  // previous solution scaled to the new box; the final fit starts from the
  // chosen solution with the validation samples at zero. Starting points only
  // change the path, not the optimum.
  std::vector<std::size_t> visit(grid.size());
  std::iota(visit.begin(), visit.end(), std::size_t{0});
  std::stable_sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  std::size_t best = visit.front();
  double best_acc = -1.0;
  Eigen::VectorXd best_alphas;
  Eigen::VectorXd previous;
  double previous_c = 0.0;
  for (const std::size_t g : visit) {
    SvmOptions trial = options;
    trial.c = grid[g];
    if (!(trial.c > 0.0)) throw ValidationError("svm_train_select_c: C values must be positive");
    const SvmModel model = previous.size() == 0
                               ? svm_train(fit_part, trial, derive_seed(seed, g + 1))
                               : svm_train(fit_part, trial, derive_seed(seed, g + 1),
                                           rescale_alphas(previous, previous_c, trial.c));
    Index correct = 0;
    for (Index i = 0; i < validation.size(); ++i) {
      correct += svm_label(model, validation.x.row(i)) == validation.y[static_cast<std::size_t>(i)];
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(validation.size());
    // Visiting in increasing C means a strict improvement is needed to move
    // away from a smaller C.
    if (acc > best_acc) {
      best_acc = acc;
      best = g;
      best_alphas = model.alphas;
    }
    previous = model.alphas;
    previous_c = trial.c;
  }
  SvmOptions final_options = options;
  final_options.c = grid[best];
  Eigen::VectorXd start = Eigen::VectorXd::Zero(data.size());
  for (std::size_t r = n_val; r < n; ++r) {
    start(static_cast<Index>(order[r])) = best_alphas(static_cast<Index>(r - n_val));
  }
  return svm_train(data, final_options, seed, start);
}

}  // namespace teamcomp

namespace teamcomp {

Classifier train_classifier(ModelKind kind, const Dataset& train, const ClassifierConfig& config,
                            std::uint64_t seed) {
  switch (kind) {
    case ModelKind::kLogistic:
      return lr_train(train, config.lr, seed);
    case ModelKind::kGda:
      return gda_fit(train, config.gda_ridge);
    case ModelKind::kSvm:
      return svm_train_select_c(train, config.c_grid, config.svm, seed);
  }
  throw ValidationError("train_classifier: unknown model kind");
}

ModelKind kind_of(const Classifier& model) {
  if (std::holds_alternative<LrModel>(model)) return ModelKind::kLogistic;
  if (std::holds_alternative<GdaModel>(model)) return ModelKind::kGda;
  return ModelKind::kSvm;
}

int predict_label(const Classifier& model, const RowRef& x) {
  if (const auto* lr = std::get_if<LrModel>(&model)) return lr_label(*lr, x);
  if (const auto* gda = std::get_if<GdaModel>(&model)) return gda_predict(*gda, x).label;
  return svm_label(std::get<SvmModel>(model), x);
}

}  // namespace teamcomp
