#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "teamcomp/classify.hpp"
#include "teamcomp/features.hpp"

namespace teamcomp {

struct HoldoutSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;  // seed that produced the split (after any re-draws)
};

inline constexpr int kMaxSplitRedraws = 10;

/// Seeded shuffle, then the first round(test_fraction * n) rows (at least one,
/// at most n - 1) are held out. A split whose training part lacks a label is
/// re-drawn with derived seeds, up to kMaxSplitRedraws attempts in total.
HoldoutSplit holdout_split(const Dataset& data, double test_fraction, std::uint64_t seed);

using LabelFn = std::function<int(const RowRef&)>;

double accuracy(const LabelFn& predict, const Dataset& data);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double train_seconds = 0.0;
};

struct TrialSummary {
  ModelKind model_kind = ModelKind::kLogistic;
  StyleSource feature_source = StyleSource::kKMeansModel;
  std::vector<TrialRecord> trials;
  double mean_train_accuracy = 0.0;
  double mean_test_accuracy = 0.0;
  double mean_train_seconds = 0.0;
};

struct TrialConfig {
  ModelKind model_kind = ModelKind::kLogistic;
  StyleSource feature_source = StyleSource::kKMeansModel;
  int n_trials = 20;
  std::uint64_t base_seed = 0;
  double test_fraction = 0.1;
  ClassifierConfig classifier;
};

/// Trial i re-splits with seed base_seed + i, retrains and scores. Only the
/// training call is timed.
TrialSummary run_trials(const Dataset& data, const TrialConfig& config);

/// Fills the mean fields from `trials`.
void summarize(TrialSummary& summary);

struct PairedDifference {
  std::uint64_t seed = 0;
  double ours = 0.0;
  double baseline = 0.0;
  double difference = 0.0;  // ours - baseline
};

struct ComparisonReport {
  std::vector<PairedDifference> pairs;
  double mean_difference = 0.0;
  int wins = 0;
  int losses = 0;
  int ties = 0;
};

/// Pairs test accuracies trial by trial; both summaries must use the same seeds.
ComparisonReport baseline_compare(const TrialSummary& ours, const TrialSummary& baseline);

}  // namespace teamcomp
