#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/preprocess.hpp"

namespace teamcomp {

/// Read-only view of one observation; accepts rows of column-major matrices.
using RowRef = Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

enum class ClusterAlgorithm { kKMeans, kDPMeans };

std::string to_string(ClusterAlgorithm algorithm);
ClusterAlgorithm cluster_algorithm_from_string(const std::string& name);

struct ClusterModel {
  Eigen::MatrixXd centroids;  // k x d, row i is centroid i
  ClusterAlgorithm algorithm = ClusterAlgorithm::kKMeans;
  double param = 0.0;  // k for k-means, lambda for DP-means
  double final_objective = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;

  Eigen::Index k() const { return centroids.rows(); }
  Eigen::Index dim() const { return centroids.cols(); }
};

struct Assignment {
  std::vector<int> labels;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct FitResult {
  ClusterModel model;
  Assignment assignment;
  // Objective after every assignment step, starting with the initial
  // centroids: distortion for k-means, distortion + (k-1) lambda^2 for DP-means.
  std::vector<double> objective_trace;
};

enum class KMeansInit {
  kRandomObservations,  // k distinct observations, uniformly
  kPlusPlus,            // observations drawn with probability proportional to D^2
};

inline constexpr int kDefaultMaxIter = 300;

struct KMeansConfig {
  int k = 8;
  int max_iter = kDefaultMaxIter;
  KMeansInit init = KMeansInit::kPlusPlus;
};

struct DpMeansConfig {
  double lambda = 3.0;
  int max_iter = kDefaultMaxIter;
};

using FitConfig = std::variant<KMeansConfig, DpMeansConfig>;

/// Index of the nearest centroid; ties go to the lowest index.
int nearest_centroid(const Eigen::Ref<const Eigen::MatrixXd>& centroids,
                     const RowRef& x,
                     double* squared_distance = nullptr);

Assignment assign_nearest(const StatMatrix& m, const Eigen::MatrixXd& centroids);

/// Within-cluster sum of squares with every row assigned to its nearest centroid.
double distortion(const StatMatrix& m, const ClusterModel& model);

/// distortion + (k - 1) * lambda^2. Requires a DP-means model.
double dp_objective(const StatMatrix& m, const ClusterModel& model);

/// The objective the model's own algorithm minimizes.
double model_objective(const StatMatrix& m, const ClusterModel& model);

/// Lloyd's algorithm. Stops when assignments repeat or after max_iter updates.
/// Empty clusters are reseeded at the point farthest from its nearest centroid.
FitResult kmeans_fit(const StatMatrix& m, int k, std::uint64_t seed, int max_iter = kDefaultMaxIter,
                     KMeansInit init = KMeansInit::kPlusPlus);

/// DP-means: start from one random observation, then repeatedly sweep a fresh
/// random permutation, opening a cluster at x whenever its squared distance to
/// every centroid exceeds lambda^2, and recompute centroids as means.
FitResult dpmeans_fit(const StatMatrix& m, double lambda, std::uint64_t seed,
                      int max_iter = kDefaultMaxIter);

FitResult fit(const StatMatrix& m, const FitConfig& config, std::uint64_t seed);

/// Runs `fit` with seeds base_seed .. base_seed + n_trials - 1 and keeps the
/// run with the lowest objective (earliest seed on ties). The per-trial
/// objectives are written to `trial_objectives` when given.
FitResult best_of_trials(const StatMatrix& m, const FitConfig& config, int n_trials,
                         std::uint64_t base_seed, std::vector<double>* trial_objectives = nullptr);

struct CvCurve {
  std::vector<double> grid;
  std::vector<double> mean_scores;
  double chosen = 0.0;
  std::size_t chosen_index = 0;
};

inline constexpr double kDefaultFlatTolerance = 1e-3;

struct CvOptions {
  int folds = 10;
  // Fits per training fold; the lowest-objective one is scored.
  int trials_per_fold = 5;
  int max_iter = kDefaultMaxIter;
  // Score differences below this fraction of the curve's range count as flat.
  double flat_tolerance = kDefaultFlatTolerance;
};

/// Seeded shuffle then contiguous folds; the first n % folds folds get one
/// extra row. Returns fold membership per row.
std::vector<int> make_folds(std::size_t n, int folds, std::uint64_t seed);

/// Picks the smallest interior grid point whose score sits below both
/// neighbours by at least flat_tolerance times the curve's range. Without such
/// a point, picks the sharpest bend of the log score (largest discrete second
/// difference). Fewer than three points: the argmin.
std::size_t select_from_curve(std::span<const double> mean_scores,
                              double flat_tolerance = kDefaultFlatTolerance);

CvCurve cv_select_k(const StatMatrix& m, std::span<const int> k_grid, std::uint64_t seed,
                    const CvOptions& options = {});

CvCurve cv_select_lambda(const StatMatrix& m, std::span<const double> lambda_grid,
                         std::uint64_t seed, const CvOptions& options = {});

/// k = 5..24, the default k-means search range.
std::vector<int> default_k_grid();
/// lambda = 2.5, 2.6, ..., 4.4.
std::vector<double> default_lambda_grid();

}  // namespace teamcomp
