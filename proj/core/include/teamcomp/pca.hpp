#pragma once

#include <Eigen/Core>

#include "teamcomp/preprocess.hpp"

namespace teamcomp {

struct PcaProjection {
  Eigen::RowVectorXd mean;             // d
  Eigen::MatrixXd components;          // c x d, orthonormal rows
  Eigen::VectorXd explained_variance;  // c, non-increasing
  double total_variance = 0.0;         // trace of the covariance
};

/// Principal axes of the (1/(n-1)) sample covariance, largest variance first.
/// Each component is signed so that its largest-magnitude entry is positive.
PcaProjection pca_fit(const StatMatrix& m, int components = 3);

/// Scores (x - mean) * components^T, one row per observation.
Eigen::MatrixXd pca_transform(const PcaProjection& p, const StatMatrix& m);

/// Maps scores back to the original space: mean + scores * components.
Eigen::MatrixXd pca_reconstruct(const PcaProjection& p, const Eigen::MatrixXd& scores);

}  // namespace teamcomp
