#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "teamcomp/classify.hpp"
#include "teamcomp/error.hpp"
#include "teamcomp/rng.hpp"

namespace teamcomp {
namespace {

Dataset make_dataset(Eigen::MatrixXd x, std::vector<int> y) { return Dataset{std::move(x), std::move(y)}; }

// Two Gaussian classes in `dim` dimensions, means offset by `shift` along
// every axis, with labels alternating so both are always present.
Dataset gaussian_classes(int n, int dim, double shift, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d{Eigen::MatrixXd(n, dim), std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    const int y = i % 2;
    d.y[static_cast<std::size_t>(i)] = y;
    for (int j = 0; j < dim; ++j) d.x(i, j) = rng.normal() + (y == 1 ? shift : 0.0);
  }
  return d;
}

double sign_label(int y) { return y == 1 ? 1.0 : -1.0; }

// ---------------------------------------------------------------- logistic

TEST(Sigmoid, KnownValues) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(40.0), 1.0, 1e-15);
  EXPECT_LT(sigmoid(10.0), sigmoid(20.0));
  EXPECT_GT(sigmoid(-800.0), -1e-300);
}

TEST(LrPredict, ZeroWeightsGiveHalf) {
  LrModel model;
  model.theta = Eigen::VectorXd::Zero(4);
  const Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(3, 7.0);
  EXPECT_EQ(lr_predict(model, x), 0.5);
  EXPECT_EQ(lr_label(model, x), 1);
}

TEST(LrPredict, MatchesHandSigmoid) {
  LrModel model;
  model.theta.resize(3);
  model.theta << 0.5, -1.25, 0.1;
  const double xs[3][2] = {{1.0, 2.0}, {-3.0, 0.5}, {0.0, 0.0}};
  for (const auto& row : xs) {
    Eigen::RowVectorXd x(2);
    x << row[0], row[1];
    const double z = 0.5 * row[0] - 1.25 * row[1] + 0.1;
    EXPECT_NEAR(lr_predict(model, x), 1.0 / (1.0 + std::exp(-z)), 1e-12);
  }
  EXPECT_THROW(lr_predict(model, Eigen::RowVectorXd::Zero(3)), DimensionError);
}

TEST(LrLogLikelihood, HalfEverywhere) {
  const Dataset d = gaussian_classes(10, 3, 1.0, 1);
  EXPECT_NEAR(lr_log_likelihood(Eigen::VectorXd::Zero(4), d), 10 * std::log(0.5), 1e-12);
}

TEST(LrLogLikelihood, ConfidentCorrectIsNearZero) {
  Eigen::MatrixXd x(2, 1);
  x << -1, 1;
  const Dataset d = make_dataset(x, {0, 1});
  Eigen::VectorXd theta(2);
  theta << 100.0, 0.0;
  const double ll = lr_log_likelihood(theta, d);
  EXPECT_LE(ll, 0.0);
  EXPECT_GT(ll, -1e-11);
}

TEST(LrLogLikelihood, MatchesProductThenLog) {
  const Dataset d = gaussian_classes(10, 4, 0.5, 2);
  Rng rng(3);
  Eigen::VectorXd theta(5);
  for (Eigen::Index j = 0; j < 5; ++j) theta(j) = 0.3 * rng.normal();
  double product = 1.0;
  for (Eigen::Index i = 0; i < 10; ++i) {
    double z = theta(4);
    for (Eigen::Index j = 0; j < 4; ++j) z += theta(j) * d.x(i, j);
    const double h = 1.0 / (1.0 + std::exp(-z));
    product *= d.y[static_cast<std::size_t>(i)] == 1 ? h : 1.0 - h;
  }
  EXPECT_NEAR(lr_log_likelihood(theta, d), std::log(product), 1e-10);
}

TEST(LrGradient, MatchesCenteredFiniteDifferences) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = gaussian_classes(2, 5, 0.0, 100 + static_cast<std::uint64_t>(trial));
    const Dataset one = make_dataset(d.x.topRows(1), {static_cast<int>(rng.index(2))});
    Eigen::VectorXd theta(6);
    for (Eigen::Index j = 0; j < 6; ++j) theta(j) = rng.normal();
    const Eigen::VectorXd g = lr_gradient(theta, one);
    constexpr double kStep = 1e-6;
    Eigen::VectorXd fd(6);
    for (Eigen::Index j = 0; j < 6; ++j) {
      Eigen::VectorXd up = theta, down = theta;
      up(j) += kStep;
      down(j) -= kStep;
      fd(j) = (lr_log_likelihood(up, one) - lr_log_likelihood(down, one)) / (2 * kStep);
    }
    EXPECT_LE((g - fd).norm() / std::max(g.norm(), 1e-8), 1e-5) << "trial " << trial;
  }
}

TEST(LrGradient, FullBatchAscentNeverDecreases) {
  const Dataset d = gaussian_classes(200, 4, 0.7, 5);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(5);
  double previous = lr_log_likelihood(theta, d);
  for (int step = 0; step < 200; ++step) {
    theta += 1e-3 * lr_gradient(theta, d);
    const double ll = lr_log_likelihood(theta, d);
    ASSERT_GE(ll, previous - 1e-12) << "step " << step;
    previous = ll;
  }
}

TEST(LrTrain, SeparableOneDimensional) {
  Eigen::MatrixXd x(40, 1);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = (i - 19.5) / 10.0;
    y[static_cast<std::size_t>(i)] = x(i, 0) > 0 ? 1 : 0;
  }
  const Dataset d = make_dataset(x, y);
  const LrModel model = lr_train(d, LrOptions{0.05, 50}, 1);
  EXPECT_EQ(model.epochs_run, 50);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(lr_label(model, d.x.row(i)), y[static_cast<std::size_t>(i)]);
  EXPECT_DOUBLE_EQ(model.final_log_likelihood, lr_log_likelihood(model, d));
}

TEST(LrTrain, RecoversPlantedBoundary) {
  Rng rng(6);
  Eigen::VectorXd truth(4);
  truth << 2.0, -1.5, 1.0, 0.25;
  auto draw = [&](int n) {
    Dataset d{Eigen::MatrixXd(n, 3), std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) {
      double z = truth(3);
      for (int j = 0; j < 3; ++j) {
        d.x(i, j) = rng.normal();
        z += truth(j) * d.x(i, j);
      }
      d.y[static_cast<std::size_t>(i)] = rng.bernoulli(sigmoid(z)) ? 1 : 0;
    }
    return d;
  };
  const Dataset train = draw(20000);
  const Dataset fresh = draw(5000);
  const LrModel model = lr_train(train, LrOptions{0.01, 30}, 2);
  LrModel oracle_model;
  oracle_model.theta = truth;
  int agree = 0;
  for (Eigen::Index i = 0; i < fresh.size(); ++i) agree += lr_label(model, fresh.x.row(i)) == lr_label(oracle_model, fresh.x.row(i));
  EXPECT_GE(agree / 5000.0, 0.98);
}

TEST(LrTrain, Errors) {
  const Dataset single = make_dataset(Eigen::MatrixXd::Ones(3, 2), {1, 1, 1});
  EXPECT_THROW(lr_train(single, {}, 0), ValidationError);
  const Dataset d = gaussian_classes(10, 2, 1.0, 7);
  EXPECT_THROW(lr_train(d, LrOptions{0.0, 5}, 0), ValidationError);
  EXPECT_THROW(lr_train(d, LrOptions{0.1, 0}, 0), ValidationError);
}

TEST(LrTrain, DeterministicAndSeedSensitive) {
  const Dataset d = gaussian_classes(100, 3, 0.5, 8);
  EXPECT_EQ(lr_train(d, {}, 3).theta, lr_train(d, {}, 3).theta);
  EXPECT_NE(lr_train(d, {}, 3).theta, lr_train(d, {}, 4).theta);
}

// ---------------------------------------------------------------------- GDA

TEST(Gda, FourPointClosedForm) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 2, 0, 4, 4, 4, 6;
  const GdaModel model = gda_fit(make_dataset(x, {0, 0, 1, 1}));
  EXPECT_EQ(model.phi, 0.5);
  EXPECT_EQ(model.mu0, Eigen::Vector2d(1, 0));
  EXPECT_EQ(model.mu1, Eigen::Vector2d(4, 5));
  // Residuals (-1,0), (1,0), (0,-1), (0,1): sigma = diag(2, 2) / 4.
  Eigen::Matrix2d expected;
  expected << 0.5, 0, 0, 0.5;
  EXPECT_LE((model.sigma - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(model.ridge, 0.0);
}

TEST(Gda, MomentsMatchBruteForce) {
  const Dataset d = gaussian_classes(101, 5, 0.8, 9);
  const GdaModel model = gda_fit(d);
  int positives = 0;
  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(5), s1 = Eigen::VectorXd::Zero(5);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d.y[static_cast<std::size_t>(i)] == 1) {
      ++positives;
      for (int j = 0; j < 5; ++j) s1(j) += d.x(i, j);
    } else {
      for (int j = 0; j < 5; ++j) s0(j) += d.x(i, j);
    }
  }
  const Eigen::VectorXd mu1 = s1 / positives;
  const Eigen::VectorXd mu0 = s0 / (101 - positives);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(5, 5);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Eigen::VectorXd& mu = d.y[static_cast<std::size_t>(i)] == 1 ? mu1 : mu0;
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) sigma(a, b) += (d.x(i, a) - mu(a)) * (d.x(i, b) - mu(b));
    }
  }
  sigma /= 101.0;
  EXPECT_DOUBLE_EQ(model.phi * 101, positives);
  EXPECT_LE((model.mu0 - mu0).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((model.mu1 - mu1).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((model.sigma - sigma).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((model.sigma - model.sigma.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Gda, LikelihoodBeatsPerturbations) {
  const Dataset d = gaussian_classes(300, 4, 0.6, 10);
  const GdaModel fit = gda_fit(d);
  const double best = gda_log_likelihood(fit, d);
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    GdaModel p = fit;
    const double scale = 0.05 * rng.uniform();
    p.phi = std::clamp(p.phi + scale * rng.normal(), 0.01, 0.99);
    for (int j = 0; j < 4; ++j) {
      p.mu0(j) += scale * rng.normal();
      p.mu1(j) += scale * rng.normal();
    }
    Eigen::MatrixXd noise(4, 4);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) noise(a, b) = scale * rng.normal();
    }
    p.sigma += 0.5 * (noise + noise.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.sigma);
    if (eig.eigenvalues().minCoeff() <= 1e-6) continue;
    EXPECT_LE(gda_log_likelihood(p, d), best) << "trial " << trial;
  }
}

TEST(Gda, PosteriorMatchesDensityRatio) {
  const Dataset d = gaussian_classes(200, 3, 1.0, 12);
  const GdaModel model = gda_fit(d);
  const Eigen::MatrixXd inv = model.sigma.inverse();
  const Dataset probe = gaussian_classes(20, 3, 0.5, 13);
  for (Eigen::Index i = 0; i < probe.size(); ++i) {
    const Eigen::VectorXd x = probe.x.row(i).transpose();
    const double q0 = (x - model.mu0).dot(inv * (x - model.mu0));
    const double q1 = (x - model.mu1).dot(inv * (x - model.mu1));
    const double p1 = model.phi * std::exp(-0.5 * q1);
    const double p0 = (1 - model.phi) * std::exp(-0.5 * q0);
    EXPECT_NEAR(gda_predict(model, probe.x.row(i)).posterior, p1 / (p0 + p1), 1e-10);
  }
}

TEST(Gda, PosteriorAtClassMeanAndOnBoundary) {
  GdaModel model;
  model.phi = 0.5;
  model.mu0 = Eigen::Vector2d(-10, 0);
  model.mu1 = Eigen::Vector2d(10, 0);
  model.sigma = Eigen::Matrix2d::Identity();
  gda_refresh(model);
  const GdaPrediction at_mu1 = gda_predict(model, model.mu1.transpose());
  EXPECT_EQ(at_mu1.label, 1);
  EXPECT_GT(at_mu1.posterior, 0.99);
  EXPECT_NEAR(gda_predict(model, Eigen::RowVector2d(0, 3.7)).posterior, 0.5, 1e-9);
}

TEST(Gda, SingularCovarianceGetsRidge) {
  // Third column is identical for all rows, so sigma is singular.
  Dataset d = gaussian_classes(50, 3, 1.0, 14);
  d.x.col(2).setConstant(1.0);
  const GdaModel model = gda_fit(d);
  EXPECT_GT(model.ridge, 0.0);
  EXPECT_TRUE(model.weights.allFinite());
}

TEST(Gda, SingleClassRejected) {
  EXPECT_THROW(gda_fit(make_dataset(Eigen::MatrixXd::Ones(3, 2), {0, 0, 0})), ValidationError);
}

TEST(Gda, InvariantToRowOrder) {
  const Dataset d = gaussian_classes(60, 3, 0.5, 15);
  std::vector<std::size_t> order(60);
  for (std::size_t i = 0; i < 60; ++i) order[i] = (i * 7) % 60;
  const GdaModel a = gda_fit(d);
  const GdaModel b = gda_fit(subset(d, order));
  EXPECT_LE((a.weights - b.weights).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(a.offset, b.offset, 1e-10);
}

// ---------------------------------------------------------------------- SVM

void expect_feasible(const SvmModel& model, const Dataset& d) {
  double balance = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    EXPECT_GE(model.alphas(i), 0.0);
    EXPECT_LE(model.alphas(i), model.c);
    balance += model.alphas(i) * sign_label(d.y[static_cast<std::size_t>(i)]);
  }
  EXPECT_LE(std::abs(balance), 1e-8);
}

TEST(Svm, TwoPointsGivePerpendicularBisector) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 1, 3, 2;
  const Dataset d = make_dataset(x, {0, 1});
  SvmOptions options;
  options.c = 1000.0;
  const SvmModel model = svm_train(d, options, 1);
  ASSERT_TRUE(model.converged);
  const Eigen::VectorXd w = svm_weights(model);
  // w is parallel to x1 - x0 and the midpoint scores zero.
  EXPECT_NEAR(w(0) * 1.0 - w(1) * 2.0, 0.0, 1e-9);
  EXPECT_NEAR(svm_decision(model, Eigen::RowVector2d(2.0, 1.5)), 0.0, 1e-6);
  EXPECT_NEAR(svm_decision(model, x.row(1)), 1.0, 1e-6);
  EXPECT_NEAR(svm_decision(model, x.row(0)), -1.0, 1e-6);
}

TEST(Svm, FeasibleAndKktAtConvergence) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = gaussian_classes(80, 4, 0.8, 20 + seed);
    for (const double c : {0.1, 1.0, 10.0}) {
      SvmOptions options;
      options.c = c;
      const SvmModel model = svm_train(d, options, seed);
      ASSERT_TRUE(model.converged);
      expect_feasible(model, d);
      EXPECT_LE(model.max_kkt_violation, options.tol) << "seed " << seed << " C " << c;
      EXPECT_EQ(model.max_kkt_violation, svm_kkt_violation(model, d));
    }
  }
}

TEST(Svm, FreeSupportVectorsSitOnTheMargin) {
  const Dataset d = gaussian_classes(60, 3, 1.0, 30);
  SvmOptions options;
  options.c = 1.0;
  const SvmModel model = svm_train(d, options, 2);
  int free = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (model.alphas(i) > 0.0 && model.alphas(i) < model.c) {
      ++free;
      EXPECT_NEAR(std::abs(svm_decision(model, d.x.row(i))), 1.0, options.tol);
    }
  }
  EXPECT_GT(free, 0);
}

TEST(Svm, DecisionEqualsExplicitWeights) {
  const Dataset d = gaussian_classes(50, 5, 0.7, 31);
  const SvmModel model = svm_train(d, {}, 3);
  const Eigen::VectorXd w = svm_weights(model);
  const Dataset probe = gaussian_classes(20, 5, 0.0, 32);
  for (Eigen::Index i = 0; i < probe.size(); ++i) {
    double manual = model.bias;
    for (int j = 0; j < 5; ++j) manual += w(j) * probe.x(i, j);
    EXPECT_NEAR(svm_decision(model, probe.x.row(i)), manual, 1e-10);
  }
  EXPECT_EQ(svm_decision(model, Eigen::RowVectorXd::Zero(5)), model.bias);
}

TEST(Svm, DualObjectiveNeverDecreases) {
  const Dataset d = gaussian_classes(100, 4, 0.5, 33);
  SvmOptions options;
  options.c = 1.0;
  options.record_dual_trace = true;
  const SvmModel model = svm_train(d, options, 4);
  ASSERT_FALSE(model.dual_trace.empty());
  for (std::size_t i = 1; i < model.dual_trace.size(); ++i) {
    ASSERT_GE(model.dual_trace[i], model.dual_trace[i - 1] - 1e-12) << "update " << i;
  }
  EXPECT_NEAR(model.dual_trace.back(), svm_dual_objective(model), 1e-9);
}

TEST(Svm, MatchesDenseQpOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = gaussian_classes(11 + static_cast<int>(seed), 3, 0.6, 40 + seed);
    SvmOptions options;
    options.c = 1.0;
    options.tol = 1e-6;
    const SvmModel model = svm_train(d, options, seed);
    const oracle::SvmSolution ref = oracle::svm_dual_qp(d.x, d.y, options.c);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double expected = d.x.row(i).dot(ref.w.transpose()) + ref.bias;
      EXPECT_NEAR(svm_decision(model, d.x.row(i)), expected, 1e-3) << "seed " << seed << " row " << i;
    }
  }
}

TEST(Svm, WarmStartReachesSameOptimum) {
  const Dataset d = gaussian_classes(80, 3, 0.6, 50);
  SvmOptions options;
  options.c = 1.0;
  options.tol = 1e-6;
  const SvmModel cold = svm_train(d, options, 1);
  SvmOptions smaller = options;
  smaller.c = 0.1;
  const SvmModel from = svm_train(d, smaller, 1);
  const SvmModel warm = svm_train(d, options, 1, from.alphas * 10.0);
  EXPECT_NEAR(svm_dual_objective(warm), svm_dual_objective(cold), 1e-6);
  EXPECT_LE((svm_weights(warm) - svm_weights(cold)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Svm, WarmStartValidation) {
  const Dataset d = gaussian_classes(10, 2, 1.0, 51);
  EXPECT_THROW(svm_train(d, {}, 0, Eigen::VectorXd::Zero(9)), DimensionError);
  EXPECT_THROW(svm_train(d, {}, 0, Eigen::VectorXd::Constant(10, 2.0)), ValidationError);
  Eigen::VectorXd unbalanced = Eigen::VectorXd::Zero(10);
  unbalanced(0) = 0.5;
  EXPECT_THROW(svm_train(d, {}, 0, unbalanced), ValidationError);
}

TEST(Svm, Errors) {
  const Dataset d = gaussian_classes(10, 2, 1.0, 52);
  SvmOptions bad;
  bad.c = 0.0;
  EXPECT_THROW(svm_train(d, bad, 0), ValidationError);
  EXPECT_THROW(svm_train(make_dataset(Eigen::MatrixXd::Ones(3, 2), {1, 1, 1}), {}, 0), ValidationError);
  EXPECT_THROW(svm_train_select_c(d, std::vector<double>{}, {}, 0), ValidationError);
}

TEST(Svm, BudgetExhaustionIsReported) {
  const Dataset d = gaussian_classes(200, 4, 0.3, 53);
  SvmOptions options;
  options.c = 10.0;
  options.max_passes = 1;
  options.tol = 1e-9;
  const SvmModel model = svm_train(d, options, 0);
  EXPECT_FALSE(model.converged);
  EXPECT_GT(model.max_kkt_violation, options.tol);
  expect_feasible(model, d);
}

TEST(Svm, DeterministicGivenSeed) {
  const Dataset d = gaussian_classes(120, 4, 0.5, 54);
  const SvmModel a = svm_train(d, {}, 9);
  const SvmModel b = svm_train(d, {}, 9);
  EXPECT_EQ(a.alphas, b.alphas);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Svm, SelectCPicksFromGridAndIsDeterministic) {
  const Dataset d = gaussian_classes(200, 4, 0.8, 55);
  const auto& grid = default_c_grid();
  const SvmModel a = svm_train_select_c(d, grid, {}, 5);
  const SvmModel b = svm_train_select_c(d, grid, {}, 5);
  EXPECT_NE(std::find(grid.begin(), grid.end(), a.c), grid.end());
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.alphas, b.alphas);
  EXPECT_TRUE(a.converged);
  expect_feasible(a, d);
}

TEST(TrainClassifier, DispatchesByKind) {
  const Dataset d = gaussian_classes(100, 3, 1.0, 56);
  const ClassifierConfig config;
  for (const auto kind : {ModelKind::kLogistic, ModelKind::kGda, ModelKind::kSvm}) {
    const Classifier model = train_classifier(kind, d, config, 1);
    EXPECT_EQ(kind_of(model), kind);
    int correct = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) correct += predict_label(model, d.x.row(i)) == d.y[static_cast<std::size_t>(i)];
    EXPECT_GT(correct, 70) << to_string(kind);
  }
  EXPECT_EQ(model_kind_from_string("svm"), ModelKind::kSvm);
  EXPECT_THROW(model_kind_from_string("tree"), ValidationError);
}

}  // namespace
}  // namespace teamcomp
