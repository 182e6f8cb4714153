#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/cluster.hpp"
#include "teamcomp/features.hpp"

namespace teamcomp {

/// Real-valued design matrix with 0/1 labels.
struct Dataset {
  Eigen::MatrixXd x;
  std::vector<int> y;

  Eigen::Index size() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
};

Dataset to_dataset(std::span<const CompositionSample> samples);

/// Rows `indices` of `data`, in that order.
Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

enum class ModelKind { kLogistic, kGda, kSvm };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// ---------------------------------------------------------------- logistic

double sigmoid(double z);

struct LrOptions {
  double learning_rate = 0.05;
  int epochs = 30;
};

/// theta has dim + 1 entries; the last one multiplies a constant-1 feature.
struct LrModel {
  Eigen::VectorXd theta;
  int epochs_run = 0;
  double final_log_likelihood = 0.0;
};

/// Stochastic gradient ascent on the log-likelihood from theta = 0:
/// theta += eta * (y - h(x)) * [x; 1], visiting samples in a fresh seeded
/// order every epoch.
LrModel lr_train(const Dataset& data, const LrOptions& options, std::uint64_t seed);

/// P(y = 1 | x).
double lr_predict(const LrModel& model, const RowRef& x);
int lr_label(const LrModel& model, const RowRef& x);

/// Sum of y log h + (1 - y) log(1 - h), with h clipped into [1e-12, 1 - 1e-12].
double lr_log_likelihood(const Eigen::VectorXd& theta, const Dataset& data);
double lr_log_likelihood(const LrModel& model, const Dataset& data);

/// Gradient of lr_log_likelihood with respect to theta (unclipped).
Eigen::VectorXd lr_gradient(const Eigen::VectorXd& theta, const Dataset& data);

// ---------------------------------------------------------------------- GDA

struct GdaModel {
  double phi = 0.5;
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
  Eigen::MatrixXd sigma;  // maximum-likelihood pooled covariance, without ridge
  double ridge = 0.0;     // multiple of I added before factorizing

  // Linear discriminant implied by the shared covariance:
  // log-odds(y = 1 | x) = weights . x + offset.
  Eigen::VectorXd weights;
  double offset = 0.0;
};

struct GdaPrediction {
  int label = 0;
  double posterior = 0.5;  // P(y = 1 | x)
};

/// Closed-form maximum-likelihood fit. If sigma is not numerically positive
/// definite, `ridge` * I is added and doubled until the factorization holds.
GdaModel gda_fit(const Dataset& data, double ridge = 1e-6);

GdaPrediction gda_predict(const GdaModel& model, const RowRef& x);

/// Joint log-likelihood sum_i log p(x_i, y_i) under the given parameters
/// (sigma + ridge * I is used as the covariance).
double gda_log_likelihood(const GdaModel& model, const Dataset& data);

/// Recomputes the discriminant fields after editing phi, mu0, mu1, sigma or ridge.
void gda_refresh(GdaModel& model);

// ---------------------------------------------------------------------- SVM

inline constexpr double kAlphaBalanceTolerance = 1e-9;

struct SvmOptions {
  double c = 1.0;
  double tol = 1e-3;
  // Update budget, in multiples of the sample count.
  int max_passes = 1000;
  bool record_dual_trace = false;
};

/// Linear-kernel soft-margin SVM with labels mapped to -1 / +1.
struct SvmModel {
  Eigen::VectorXd alphas;           // per training sample, in [0, C]
  double bias = 0.0;
  double c = 1.0;
  std::vector<std::size_t> support;  // training indices with alpha > 0
  Eigen::MatrixXd support_vectors;   // rows of the support set
  Eigen::VectorXd support_coef;      // alpha_i * y_i for the support set

  bool converged = false;
  int passes = 0;
  double max_kkt_violation = 0.0;
  std::vector<double> dual_trace;  // dual objective after each accepted update
};

/// Sequential minimal optimization on the dual: maximal-violating first
/// index, second-order second index, analytic two-variable step. Index scans
/// start at a seeded offset, so ties resolve by seed. Stops once the KKT gap
/// is at most tol, or after max_passes * n pair updates.
SvmModel svm_train(const Dataset& data, const SvmOptions& options, std::uint64_t seed);

/// Same, starting from `initial_alphas`, which must lie in [0, C] and satisfy
/// sum alpha_i y_i = 0 to kAlphaBalanceTolerance * max(1, C n).
SvmModel svm_train(const Dataset& data, const SvmOptions& options, std::uint64_t seed,
                   const Eigen::VectorXd& initial_alphas);

/// sum_i alpha_i y_i <x_i, x> + b over the support set.
double svm_decision(const SvmModel& model, const RowRef& x);
int svm_label(const SvmModel& model, const RowRef& x);

/// Explicit weight vector w = sum_i alpha_i y_i x_i.
Eigen::VectorXd svm_weights(const SvmModel& model);

/// Dual objective sum(alpha) - 1/2 ||w||^2.
double svm_dual_objective(const SvmModel& model);

/// Largest KKT violation over `data` (the training set of `model`).
double svm_kkt_violation(const SvmModel& model, const Dataset& data);

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid{0.01, 0.1, 1.0, 10.0};
  return grid;
}

/// Holds out `validation_fraction` of `data`, picks C from `grid` by
/// validation accuracy (smallest C on ties) and retrains on all of `data`.
SvmModel svm_train_select_c(const Dataset& data, std::span<const double> grid,
                            const SvmOptions& options, std::uint64_t seed,
                            double validation_fraction = 0.1);

}  // namespace teamcomp

namespace teamcomp {

struct ClassifierConfig {
  LrOptions lr;
  double gda_ridge = 1e-6;
  SvmOptions svm;
  std::vector<double> c_grid = default_c_grid();
};

using Classifier = std::variant<LrModel, GdaModel, SvmModel>;

/// Trains the requested model. SVM picks C from config.c_grid.
Classifier train_classifier(ModelKind kind, const Dataset& train, const ClassifierConfig& config,
                            std::uint64_t seed);

ModelKind kind_of(const Classifier& model);
int predict_label(const Classifier& model, const RowRef& x);

}  // namespace teamcomp
