#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/classify.hpp"
#include "teamcomp/cluster.hpp"
#include "teamcomp/eval.hpp"
#include "teamcomp/features.hpp"
#include "teamcomp/preprocess.hpp"
#include "teamcomp/synth.hpp"

namespace teamcomp {

// Model files are single JSON documents tagged with "format" and
// "format_version"; readers reject unknown formats and newer versions.
inline constexpr int kFormatVersion = 1;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

// ------------------------------------------------------------ cluster models

struct ClusterModelFile {
  ClusterModel model;
  std::vector<ColumnRange> ranges;
  std::vector<std::string> column_names;
};

void write_cluster_model(std::ostream& out, const ClusterModelFile& file);
ClusterModelFile read_cluster_model(std::istream& in);

/// Header `player_id,cluster_label`.
void write_assignment_csv(std::ostream& out, std::span<const std::string> row_ids, const Assignment& a);

/// Header `<param_name>,mean_score,chosen`; chosen is 1 on the selected row.
void write_cv_curve_csv(std::ostream& out, const CvCurve& curve, std::string_view param_name);

/// Header `pc1,...,pcC,cluster_label`.
void write_pca_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores, const Assignment& labels);

// ------------------------------------------------------------------ samples

/// Header `t1_s0..t1_s{k-1},t2_s0..t2_s{k-1},label`.
void write_samples_csv(std::ostream& out, std::span<const CompositionSample> samples, int k);
std::vector<CompositionSample> read_samples_csv(std::istream& in, int* k = nullptr);

/// Where a sample file's styles came from.
struct StyleProvenance {
  StyleSource source = StyleSource::kKMeansModel;
  int k = 0;
  std::string cluster_model_hash;  // empty for official classes
  std::vector<ColumnRange> ranges;
  std::size_t n_samples = 0;
};

void write_samples_manifest(std::ostream& out, const StyleProvenance& provenance);
StyleProvenance read_samples_manifest(std::istream& in);

/// Header `character_id,class`.
void write_class_table_csv(std::ostream& out, const ClassTable& table);
ClassTable read_class_table_csv(std::istream& in);

// -------------------------------------------------------------- classifiers

void write_classifier(std::ostream& out, const Classifier& model, const StyleProvenance& provenance);
Classifier read_classifier(std::istream& in, StyleProvenance* provenance = nullptr);

// ------------------------------------------------------------------- trials

/// Header `model,features,trial,seed,train_acc,test_acc,cpu_time_s`, one row
/// per trial then a `mean` row. Timing columns are omitted when
/// `include_timing` is false.
void write_trial_summary_csv(std::ostream& out, const TrialSummary& summary, bool include_timing = true);
TrialSummary read_trial_summary_csv(std::istream& in);

void write_comparison_report(std::ostream& out, const ComparisonReport& report,
                             const TrialSummary& ours, const TrialSummary& baseline);

// -------------------------------------------------------------------- synth

/// Labels, weights and per-match generating probabilities of a synthetic corpus.
void write_ground_truth(std::ostream& out, const SynthCorpus& corpus);

}  // namespace teamcomp
