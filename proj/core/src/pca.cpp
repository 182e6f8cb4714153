#include "teamcomp/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "teamcomp/error.hpp"

namespace teamcomp {

PcaProjection pca_fit(const StatMatrix& m, int components) {
  const Eigen::Index d = m.cols();
  if (components < 1) throw ValidationError("pca_fit: need at least one component");
  if (components > d) {
    throw ValidationError("pca_fit: " + std::to_string(components) + " components requested for " +
                          std::to_string(d) + " columns");
  }
  if (m.rows() < 2) throw ValidationError("pca_fit: need at least two observations");

  PcaProjection p;
  p.mean = m.values.colwise().mean();
  const Eigen::MatrixXd centered = m.values.rowwise() - p.mean;
  const Eigen::MatrixXd covariance =
      (centered.transpose() * centered) / static_cast<double>(m.rows() - 1);
  p.total_variance = covariance.trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw NumericalError("pca_fit: eigendecomposition failed");

  // Eigen sorts eigenvalues ascending.
  p.components.resize(components, d);
  p.explained_variance.resize(components);
  for (int c = 0; c < components; ++c) {
    const Eigen::Index src = d - 1 - c;
    Eigen::VectorXd axis = solver.eigenvectors().col(src);
    Eigen::Index peak = 0;
    axis.cwiseAbs().maxCoeff(&peak);
    if (axis(peak) < 0.0) axis = -axis;
    p.components.row(c) = axis.transpose();
    p.explained_variance(c) = std::max(solver.eigenvalues()(src), 0.0);
  }
  return p;
}

Eigen::MatrixXd pca_transform(const PcaProjection& p, const StatMatrix& m) {
  if (m.cols() != p.mean.size()) {
    throw DimensionError("pca_transform: matrix has " + std::to_string(m.cols()) +
                         " columns, projection expects " + std::to_string(p.mean.size()));
  }
  return (m.values.rowwise() - p.mean) * p.components.transpose();
}

Eigen::MatrixXd pca_reconstruct(const PcaProjection& p, const Eigen::MatrixXd& scores) {
  if (scores.cols() != p.components.rows()) {
    throw DimensionError("pca_reconstruct: score width does not match component count");
  }
  return (scores * p.components).rowwise() + p.mean;
}

}  // namespace teamcomp
