#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/ingest.hpp"

namespace teamcomp {

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

/// n observations by d columns. When `normalization` is set the values are
/// the min-max image of the raw statistics and lie in [0, 1].
struct StatMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;
  std::optional<std::vector<ColumnRange>> normalization;
  std::vector<std::string> row_ids;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  bool normalized() const { return normalization.has_value(); }
};

/// Row i holds players[i]'s statistics in kStatNames order.
StatMatrix build_stat_matrix(std::span<const PlayerStatRecord> players);

/// Maps each column through (x - min) / (max - min) using the observed range.
/// Constant columns become all zeros.
StatMatrix min_max_normalize(const StatMatrix& raw);

/// Same map with stored ranges; results are clamped to [0, 1].
StatMatrix apply_normalization(const StatMatrix& raw, std::span<const ColumnRange> ranges);

/// Wraps an already-normalized matrix (e.g. synthetic or test data).
StatMatrix matrix_from_values(Eigen::MatrixXd values);

}  // namespace teamcomp
