#include "teamcomp/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "teamcomp/error.hpp"

namespace teamcomp {

namespace {

double scale_value(double x, const ColumnRange& range) {
  const double span = range.max - range.min;
  if (!(span > 0.0)) return 0.0;
  return (x - range.min) / span;
}

void require_raw(const StatMatrix& m, const char* op) {
  if (m.normalized()) {
    throw ValidationError(std::string(op) + ": matrix is already normalized");
  }
  if (!m.values.allFinite()) {
    throw ValidationError(std::string(op) + ": matrix has non-finite entries");
  }
}

}  // namespace

StatMatrix build_stat_matrix(std::span<const PlayerStatRecord> players) {
  if (players.empty()) throw ValidationError("build_stat_matrix: no players");
  StatMatrix m;
  m.values.resize(static_cast<Eigen::Index>(players.size()), static_cast<Eigen::Index>(kStatCount));
  m.row_ids.reserve(players.size());
  for (std::size_t i = 0; i < players.size(); ++i) {
    for (std::size_t j = 0; j < kStatCount; ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = players[i].stats[j];
    }
    m.row_ids.push_back(players[i].player_id);
  }
  m.column_names.assign(kStatNames.begin(), kStatNames.end());
  return m;
}

StatMatrix min_max_normalize(const StatMatrix& raw) {
  require_raw(raw, "min_max_normalize");
  std::vector<ColumnRange> ranges(static_cast<std::size_t>(raw.cols()));
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    ranges[static_cast<std::size_t>(j)] = {raw.values.col(j).minCoeff(), raw.values.col(j).maxCoeff()};
  }
  StatMatrix out = raw;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const auto& range = ranges[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      out.values(i, j) = scale_value(raw.values(i, j), range);
    }
  }
  out.normalization = std::move(ranges);
  return out;
}

StatMatrix apply_normalization(const StatMatrix& raw, std::span<const ColumnRange> ranges) {
  require_raw(raw, "apply_normalization");
  if (ranges.size() != static_cast<std::size_t>(raw.cols())) {
    throw DimensionError("apply_normalization: " + std::to_string(ranges.size()) +
                         " ranges for " + std::to_string(raw.cols()) + " columns");
  }
  StatMatrix out = raw;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const auto& range = ranges[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      out.values(i, j) = std::clamp(scale_value(raw.values(i, j), range), 0.0, 1.0);
    }
  }
  out.normalization = std::vector<ColumnRange>(ranges.begin(), ranges.end());
  return out;
}

StatMatrix matrix_from_values(Eigen::MatrixXd values) {
  StatMatrix m;
  m.values = std::move(values);
  m.column_names.reserve(static_cast<std::size_t>(m.values.cols()));
  for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
    m.column_names.push_back("x" + std::to_string(j));
  }
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    m.row_ids.push_back("r" + std::to_string(i));
  }
  return m;
}

}  // namespace teamcomp
