#include "teamcomp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teamcomp/error.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/seed.hpp"

namespace teamcomp {

namespace {

using Eigen::Index;

void require_nonempty(const StatMatrix& m, const char* op) {
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError(std::string(op) + ": empty matrix");
}

void require_dims(const StatMatrix& m, const ClusterModel& model, const char* op) {
  if (model.k() < 1) throw ValidationError(std::string(op) + ": model has no centroids");
  if (m.cols() != model.dim()) {
    throw DimensionError(std::string(op) + ": matrix has " + std::to_string(m.cols()) +
                         " columns, model has " + std::to_string(model.dim()));
  }
}

// Nearest-centroid labels for every row; returns the summed squared distance.
double assign_all(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& labels,
                  std::vector<double>* distances = nullptr) {
  labels.resize(static_cast<std::size_t>(x.rows()));
  if (distances) distances->resize(static_cast<std::size_t>(x.rows()));
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    double d = 0.0;
    labels[static_cast<std::size_t>(i)] = nearest_centroid(centroids, x.row(i), &d);
    if (distances) (*distances)[static_cast<std::size_t>(i)] = d;
    total += d;
  }
  return total;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = x.row(static_cast<Index>(rows[r]));
  return out;
}

std::vector<std::size_t> init_random(std::size_t n, int k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> chosen;
  for (int c = 0; c < k; ++c) {
    const std::size_t j = static_cast<std::size_t>(c) + rng.index(n - static_cast<std::size_t>(c));
    std::swap(pool[static_cast<std::size_t>(c)], pool[j]);
    chosen.push_back(pool[static_cast<std::size_t>(c)]);
  }
  return chosen;
}

std::vector<std::size_t> init_plus_plus(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> chosen{rng.index(n)};
  std::vector<char> taken(n, 0);
  taken[chosen[0]] = 1;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = (x.row(static_cast<Index>(i)) - x.row(static_cast<Index>(chosen[0]))).squaredNorm();
  }
  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += taken[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || d2[i] == 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining row duplicates a chosen one; take any untaken row.
      std::size_t skip = rng.index(n - chosen.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (skip-- == 0) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
    taken[pick] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(static_cast<Index>(i)) - x.row(static_cast<Index>(pick))).squaredNorm());
    }
  }
  return chosen;
}

// Moves each empty centroid onto the row farthest from its nearest centroid.
void reseed_empty(const Eigen::MatrixXd& x, Eigen::MatrixXd& centroids, std::vector<int>& labels) {
  const Index k = centroids.rows();
  std::vector<double> dist;
  assign_all(x, centroids, labels, &dist);
  for (Index j = 0; j < k; ++j) {
    if (std::find(labels.begin(), labels.end(), static_cast<int>(j)) != labels.end()) continue;
    const auto far = std::max_element(dist.begin(), dist.end());
    if (*far <= 0.0) return;
    centroids.row(j) = x.row(static_cast<Index>(far - dist.begin()));
    assign_all(x, centroids, labels, &dist);
  }
}

void update_means(const Eigen::MatrixXd& x, Eigen::MatrixXd& centroids, const std::vector<int>& labels) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centroids.rows(), centroids.cols());
  std::vector<Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
  for (Index i = 0; i < x.rows(); ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    sums.row(c) += x.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (Index j = 0; j < centroids.rows(); ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      centroids.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
    }
  }
}

}  // namespace

std::string to_string(ClusterAlgorithm algorithm) {
  return algorithm == ClusterAlgorithm::kKMeans ? "kmeans" : "dpmeans";
}

ClusterAlgorithm cluster_algorithm_from_string(const std::string& name) {
  if (name == "kmeans") return ClusterAlgorithm::kKMeans;
  if (name == "dpmeans") return ClusterAlgorithm::kDPMeans;
  throw ValidationError("unknown clustering algorithm '" + name + "'");
}

int nearest_centroid(const Eigen::Ref<const Eigen::MatrixXd>& centroids,
                     const RowRef& x,
                     double* squared_distance) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < centroids.rows(); ++j) {
    const double d = (x - centroids.row(j)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  if (squared_distance) *squared_distance = best_d;
  return best;
}

Assignment assign_nearest(const StatMatrix& m, const Eigen::MatrixXd& centroids) {
  if (centroids.rows() < 1 || centroids.cols() != m.cols()) {
    throw DimensionError("assign_nearest: centroid dimension mismatch");
  }
  Assignment a;
  assign_all(m.values, centroids, a.labels);
  return a;
}

double distortion(const StatMatrix& m, const ClusterModel& model) {
  require_dims(m, model, "distortion");
  std::vector<int> labels;
  return assign_all(m.values, model.centroids, labels);
}

double dp_objective(const StatMatrix& m, const ClusterModel& model) {
  if (model.algorithm != ClusterAlgorithm::kDPMeans) {
    throw ValidationError("dp_objective: model was not fit with DP-means");
  }
  const double penalty = static_cast<double>(model.k() - 1) * model.param * model.param;
  return distortion(m, model) + penalty;
}

double model_objective(const StatMatrix& m, const ClusterModel& model) {
  return model.algorithm == ClusterAlgorithm::kDPMeans ? dp_objective(m, model) : distortion(m, model);
}

FitResult kmeans_fit(const StatMatrix& m, int k, std::uint64_t seed, int max_iter, KMeansInit init) {
  require_nonempty(m, "kmeans_fit");
  if (k < 1) throw ValidationError("kmeans_fit: k must be at least 1");
  if (k > m.rows()) {
    throw ValidationError("kmeans_fit: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(m.rows()) + " observations");
  }
  if (max_iter < 1) throw ValidationError("kmeans_fit: max_iter must be at least 1");

  const Eigen::MatrixXd& x = m.values;
  Rng rng(seed);
  const auto starts = init == KMeansInit::kPlusPlus
                          ? init_plus_plus(x, k, rng)
                          : init_random(static_cast<std::size_t>(x.rows()), k, rng);

  FitResult result;
  ClusterModel& model = result.model;
  model.algorithm = ClusterAlgorithm::kKMeans;
  model.param = k;
  model.seed = seed;
  model.centroids = take_rows(x, starts);

  std::vector<int> labels;
  result.objective_trace.push_back(assign_all(x, model.centroids, labels));
  std::vector<int> next;
  for (int iter = 1; iter <= max_iter; ++iter) {
    reseed_empty(x, model.centroids, labels);
    update_means(x, model.centroids, labels);
    result.objective_trace.push_back(assign_all(x, model.centroids, next));
    model.iterations = iter;
    if (next == labels) {
      model.converged = true;
      break;
    }
    labels.swap(next);
  }
  result.assignment.labels = std::move(next);
  model.final_objective = result.objective_trace.back();
  return result;
}

FitResult dpmeans_fit(const StatMatrix& m, double lambda, std::uint64_t seed, int max_iter) {
  require_nonempty(m, "dpmeans_fit");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("dpmeans_fit: lambda must be positive and finite");
  }
  if (max_iter < 1) throw ValidationError("dpmeans_fit: max_iter must be at least 1");

  const Eigen::MatrixXd& x = m.values;
  const auto n = static_cast<std::size_t>(x.rows());
  const double threshold = lambda * lambda;
  Rng rng(seed);

  FitResult result;
  ClusterModel& model = result.model;
  model.algorithm = ClusterAlgorithm::kDPMeans;
  model.param = lambda;
  model.seed = seed;
  model.centroids = x.row(static_cast<Index>(rng.index(n)));

  std::vector<int> scratch;
  result.objective_trace.push_back(assign_all(x, model.centroids, scratch));

  std::vector<int> labels(n);
  std::vector<int> previous;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Assignment sweep. New centroids are appended in place; rows stay
    // addressable through `count` so the sweep never reallocates per point.
    Index count = model.centroids.rows();
    Eigen::MatrixXd centroids = model.centroids;
    centroids.conservativeResize(count + static_cast<Index>(n), Eigen::NoChange);
    for (const std::size_t i : rng.permutation(n)) {
      const auto row = x.row(static_cast<Index>(i));
      double d = 0.0;
      const int c = nearest_centroid(centroids.topRows(count), row, &d);
      if (d > threshold) {
        centroids.row(count) = row;
        labels[i] = static_cast<int>(count);
        ++count;
      } else {
        labels[i] = c;
      }
    }
    centroids.conservativeResize(count, Eigen::NoChange);

    // Centroid update; clusters left without members are dropped.
    std::vector<Index> sizes(static_cast<std::size_t>(count), 0);
    for (const int c : labels) ++sizes[static_cast<std::size_t>(c)];
    std::vector<int> remap(static_cast<std::size_t>(count), -1);
    Index kept = 0;
    for (Index j = 0; j < count; ++j) {
      if (sizes[static_cast<std::size_t>(j)] > 0) remap[static_cast<std::size_t>(j)] = static_cast<int>(kept++);
    }
    for (int& c : labels) c = remap[static_cast<std::size_t>(c)];
    model.centroids.resize(kept, x.cols());
    update_means(x, model.centroids, labels);

    const double penalty = static_cast<double>(kept - 1) * threshold;
    result.objective_trace.push_back(assign_all(x, model.centroids, scratch) + penalty);
    model.iterations = iter;
    if (labels == previous) {
      model.converged = true;
      break;
    }
    previous = labels;
  }
  result.assignment.labels = std::move(scratch);
  model.final_objective = result.objective_trace.back();
  return result;
}

FitResult fit(const StatMatrix& m, const FitConfig& config, std::uint64_t seed) {
  if (const auto* km = std::get_if<KMeansConfig>(&config)) {
    return kmeans_fit(m, km->k, seed, km->max_iter, km->init);
  }
  const auto& dp = std::get<DpMeansConfig>(config);
  return dpmeans_fit(m, dp.lambda, seed, dp.max_iter);
}

FitResult best_of_trials(const StatMatrix& m, const FitConfig& config, int n_trials,
                         std::uint64_t base_seed, std::vector<double>* trial_objectives) {
  if (n_trials < 1) throw ValidationError("best_of_trials: n_trials must be at least 1");
  if (trial_objectives) trial_objectives->clear();
  FitResult best;
  for (int t = 0; t < n_trials; ++t) {
    FitResult run = fit(m, config, base_seed + static_cast<std::uint64_t>(t));
    if (trial_objectives) trial_objectives->push_back(run.model.final_objective);
    if (t == 0 || run.model.final_objective < best.model.final_objective) best = std::move(run);
  }
  return best;
}

std::vector<int> make_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("make_folds: need at least 2 folds");
  if (n < static_cast<std::size_t>(folds)) {
    throw ValidationError("make_folds: " + std::to_string(n) + " rows cannot fill " +
                          std::to_string(folds) + " folds");
  }
  Rng rng(seed);
  const auto order = rng.permutation(n);
  const std::size_t base = n / static_cast<std::size_t>(folds);
  const std::size_t extra = n % static_cast<std::size_t>(folds);
  std::vector<int> membership(n);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < static_cast<std::size_t>(folds); ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t r = 0; r < size; ++r) membership[order[pos++]] = static_cast<int>(f);
  }
  return membership;
}

std::size_t select_from_curve(std::span<const double> s, double flat_tolerance) {
  if (s.empty()) throw ValidationError("select_from_curve: empty curve");
  if (!(flat_tolerance >= 0.0)) throw ValidationError("select_from_curve: flat_tolerance must be >= 0");
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (s.size() < 3) return static_cast<std::size_t>(lo - s.begin());
  const double margin = flat_tolerance * (*hi - *lo);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] < s[i - 1] - margin && s[i] <= s[i + 1] - margin) return i;
  }
  constexpr double kFloor = 1e-300;
  std::size_t knee = 1;
  double sharpest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double bend = std::log(std::max(s[i - 1], kFloor)) - 2.0 * std::log(std::max(s[i], kFloor)) +
                        std::log(std::max(s[i + 1], kFloor));
    if (bend > sharpest) {
      sharpest = bend;
      knee = i;
    }
  }
  return knee;
}

namespace {

template <typename FitFn>
CvCurve cross_validate(const StatMatrix& m, std::vector<double> grid, std::uint64_t seed,
                       const CvOptions& options, FitFn&& fit_on) {
  if (grid.empty()) throw ValidationError("cross-validation grid is empty");
  if (options.trials_per_fold < 1) throw ValidationError("trials_per_fold must be at least 1");
  const auto n = static_cast<std::size_t>(m.rows());
  const auto membership = make_folds(n, options.folds, seed);

  std::vector<StatMatrix> train(static_cast<std::size_t>(options.folds));
  std::vector<StatMatrix> held_out(static_cast<std::size_t>(options.folds));
  for (int f = 0; f < options.folds; ++f) {
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < n; ++i) (membership[i] == f ? out : in).push_back(i);
    train[static_cast<std::size_t>(f)] = matrix_from_values(take_rows(m.values, in));
    held_out[static_cast<std::size_t>(f)] = matrix_from_values(take_rows(m.values, out));
  }

  CvCurve curve;
  curve.grid = std::move(grid);
  for (const double value : curve.grid) {
    double total = 0.0;
    for (int f = 0; f < options.folds; ++f) {
      const auto fold_seed = derive_seed(seed, static_cast<std::uint64_t>(f) + 1);
      const FitResult fitted = fit_on(train[static_cast<std::size_t>(f)], value, fold_seed);
      total += model_objective(held_out[static_cast<std::size_t>(f)], fitted.model);
    }
    curve.mean_scores.push_back(total / options.folds);
  }
  curve.chosen_index = select_from_curve(curve.mean_scores, options.flat_tolerance);
  curve.chosen = curve.grid[curve.chosen_index];
  return curve;
}

}  // namespace

CvCurve cv_select_k(const StatMatrix& m, std::span<const int> k_grid, std::uint64_t seed,
                    const CvOptions& options) {
  require_nonempty(m, "cv_select_k");
  const auto n = static_cast<std::size_t>(m.rows());
  const std::size_t smallest_train = n - (n + static_cast<std::size_t>(options.folds) - 1) /
                                             static_cast<std::size_t>(std::max(options.folds, 1));
  std::vector<double> grid;
  for (const int k : k_grid) {
    if (k < 1 || static_cast<std::size_t>(k) > smallest_train) {
      throw ValidationError("cv_select_k: k = " + std::to_string(k) +
                            " does not fit the training folds");
    }
    grid.push_back(k);
  }
  return cross_validate(m, std::move(grid), seed, options,
                        [&](const StatMatrix& train, double k, std::uint64_t s) {
                          const KMeansConfig config{static_cast<int>(k), options.max_iter};
                          return best_of_trials(train, config, options.trials_per_fold, s);
                        });
}

CvCurve cv_select_lambda(const StatMatrix& m, std::span<const double> lambda_grid,
                         std::uint64_t seed, const CvOptions& options) {
  require_nonempty(m, "cv_select_lambda");
  for (const double lambda : lambda_grid) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw ValidationError("cv_select_lambda: lambda values must be positive");
    }
  }
  return cross_validate(m, std::vector<double>(lambda_grid.begin(), lambda_grid.end()), seed, options,
                        [&](const StatMatrix& train, double lambda, std::uint64_t s) {
                          const DpMeansConfig config{lambda, options.max_iter};
                          return best_of_trials(train, config, options.trials_per_fold, s);
                        });
}

std::vector<int> default_k_grid() {
  std::vector<int> grid;
  for (int k = 5; k <= 24; ++k) grid.push_back(k);
  return grid;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 25; i <= 44; ++i) grid.push_back(i / 10.0);
  return grid;
}

}  // namespace teamcomp
