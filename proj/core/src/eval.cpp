#include "teamcomp/eval.hpp"

#include <chrono>
#include <cmath>

#include "teamcomp/error.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/seed.hpp"

namespace teamcomp {

namespace {

bool has_both_labels(const Dataset& data) {
  bool seen[2] = {false, false};
  for (const int y : data.y) seen[y != 0] = true;
  return seen[0] && seen[1];
}

}  // namespace

HoldoutSplit holdout_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("holdout_split: test fraction must lie in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(data.size());
  if (n < 2) throw ValidationError("holdout_split: need at least two samples");
  const auto rounded = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  const std::size_t n_test = std::clamp<std::size_t>(rounded, 1, n - 1);

  for (int attempt = 0; attempt < kMaxSplitRedraws; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    Rng rng(s);
    const auto order = rng.permutation(n);
    HoldoutSplit split;
    split.seed = s;
    split.test_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    split.train = subset(data, split.train_indices);
    if (!has_both_labels(split.train)) continue;
    split.test = subset(data, split.test_indices);
    return split;
  }
  throw ValidationError("holdout_split: no split with both labels in training after " +
                        std::to_string(kMaxSplitRedraws) + " draws");
}

double accuracy(const LabelFn& predict, const Dataset& data) {
  if (data.size() == 0) throw ValidationError("accuracy: no samples");
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (predict(data.x.row(i)) == data.y[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void summarize(TrialSummary& summary) {
  double train = 0.0, test = 0.0, seconds = 0.0;
  for (const auto& t : summary.trials) {
    train += t.train_accuracy;
    test += t.test_accuracy;
    seconds += t.train_seconds;
  }
  const auto count = static_cast<double>(summary.trials.size());
  summary.mean_train_accuracy = summary.trials.empty() ? 0.0 : train / count;
  summary.mean_test_accuracy = summary.trials.empty() ? 0.0 : test / count;
  summary.mean_train_seconds = summary.trials.empty() ? 0.0 : seconds / count;
}

TrialSummary run_trials(const Dataset& data, const TrialConfig& config) {
  if (config.n_trials < 1) throw ValidationError("run_trials: n_trials must be at least 1");
  TrialSummary summary;
  summary.model_kind = config.model_kind;
  summary.feature_source = config.feature_source;
  for (int t = 0; t < config.n_trials; ++t) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(t);
    try {
      const HoldoutSplit split = holdout_split(data, config.test_fraction, seed);
      const auto start = std::chrono::steady_clock::now();
      const Classifier model =
          train_classifier(config.model_kind, split.train, config.classifier, derive_seed(seed, 1));
      const auto stop = std::chrono::steady_clock::now();

      const LabelFn predict = [&](const RowRef& x) { return predict_label(model, x); };
      TrialRecord record;
      record.trial = t;
      record.seed = seed;
      record.train_accuracy = accuracy(predict, split.train);
      record.test_accuracy = accuracy(predict, split.test);
      record.train_seconds = std::chrono::duration<double>(stop - start).count();
      summary.trials.push_back(record);
    } catch (const Error& e) {
      const std::string what = "trial " + std::to_string(t) + ": " + e.what();
      if (e.category() == ErrorCategory::kNumerical) throw NumericalError(what);
      throw ValidationError(what);
    }
  }
  summarize(summary);
  return summary;
}

ComparisonReport baseline_compare(const TrialSummary& ours, const TrialSummary& baseline) {
  if (ours.trials.size() != baseline.trials.size()) {
    throw ValidationError("baseline_compare: summaries have different trial counts");
  }
  ComparisonReport report;
  double total = 0.0;
  for (std::size_t i = 0; i < ours.trials.size(); ++i) {
    const auto& a = ours.trials[i];
    const auto& b = baseline.trials[i];
    if (a.seed != b.seed) {
      throw ValidationError("baseline_compare: trial " + std::to_string(i) + " uses seed " +
                            std::to_string(a.seed) + " vs " + std::to_string(b.seed));
    }
    PairedDifference pair{a.seed, a.test_accuracy, b.test_accuracy, a.test_accuracy - b.test_accuracy};
    if (pair.difference > 0.0) {
      ++report.wins;
    } else if (pair.difference < 0.0) {
      ++report.losses;
    } else {
      ++report.ties;
    }
    total += pair.difference;
    report.pairs.push_back(pair);
  }
  report.mean_difference = report.pairs.empty() ? 0.0 : total / static_cast<double>(report.pairs.size());
  return report;
}

}  // namespace teamcomp
