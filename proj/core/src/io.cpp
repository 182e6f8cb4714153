#include "teamcomp/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "teamcomp/error.hpp"

namespace teamcomp {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols_if_empty = 0) {
  if (!j.is_array()) throw ValidationError("expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? cols_if_empty : static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix rows have differing lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json ranges_to_json(std::span<const ColumnRange> ranges) {
  json out = json::array();
  for (const auto& r : ranges) out.push_back({r.min, r.max});
  return out;
}

std::vector<ColumnRange> ranges_from_json(const json& j) {
  std::vector<ColumnRange> ranges;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != 2) throw ValidationError("normalization ranges must be [min, max] pairs");
    ranges.push_back({r[0].get<double>(), r[1].get<double>()});
  }
  return ranges;
}

json parse_document(std::istream& in, std::string_view expected_format) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != expected_format) {
    throw ValidationError("not a " + std::string(expected_format) + " file");
  }
  const int version = doc.value("format_version", 0);
  if (version < 1 || version > kFormatVersion) {
    throw ValidationError("unsupported format_version " + std::to_string(version));
  }
  return doc;
}

template <typename Fn>
decltype(auto) reading(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected a number, got '" + text + "'");
  }
  return value;
}

json provenance_to_json(const StyleProvenance& p) {
  json j = json::object();
  j["source"] = to_string(p.source);
  j["k"] = p.k;
  j["cluster_model_hash"] = p.cluster_model_hash;
  j["normalization"] = ranges_to_json(p.ranges);
  j["n_samples"] = p.n_samples;
  return j;
}

StyleProvenance provenance_from_json(const json& j) {
  StyleProvenance p;
  p.source = style_source_from_string(j.at("source").get<std::string>());
  p.k = j.at("k").get<int>();
  p.cluster_model_hash = j.at("cluster_model_hash").get<std::string>();
  p.ranges = ranges_from_json(j.at("normalization"));
  p.n_samples = j.value("n_samples", std::size_t{0});
  return p;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ------------------------------------------------------------ cluster models

void write_cluster_model(std::ostream& out, const ClusterModelFile& file) {
  json doc = json::object();
  doc["format"] = "teamcomp.cluster_model";
  doc["format_version"] = kFormatVersion;
  doc["algorithm"] = to_string(file.model.algorithm);
  doc["param"] = file.model.param;
  doc["k"] = file.model.k();
  doc["final_objective"] = file.model.final_objective;
  doc["seed"] = file.model.seed;
  doc["iterations"] = file.model.iterations;
  doc["converged"] = file.model.converged;
  doc["centroids"] = matrix_to_json(file.model.centroids);
  doc["column_names"] = file.column_names;
  doc["normalization"] = ranges_to_json(file.ranges);
  out << doc.dump(2) << '\n';
}

ClusterModelFile read_cluster_model(std::istream& in) {
  const json doc = parse_document(in, "teamcomp.cluster_model");
  return reading("cluster model", [&] {
    ClusterModelFile file;
    file.model.algorithm = cluster_algorithm_from_string(doc.at("algorithm").get<std::string>());
    file.model.param = doc.at("param").get<double>();
    file.model.final_objective = doc.at("final_objective").get<double>();
    file.model.seed = doc.at("seed").get<std::uint64_t>();
    file.model.iterations = doc.at("iterations").get<int>();
    file.model.converged = doc.value("converged", false);
    file.model.centroids = matrix_from_json(doc.at("centroids"));
    file.column_names = doc.at("column_names").get<std::vector<std::string>>();
    file.ranges = ranges_from_json(doc.at("normalization"));
    if (file.model.k() < 1) throw ValidationError("cluster model has no centroids");
    if (!file.model.centroids.allFinite()) throw ValidationError("cluster model has non-finite centroids");
    if (static_cast<Eigen::Index>(file.ranges.size()) != file.model.dim()) {
      throw ValidationError("cluster model normalization does not match centroid dimension");
    }
    return file;
  });
}

void write_assignment_csv(std::ostream& out, std::span<const std::string> row_ids, const Assignment& a) {
  if (row_ids.size() != a.labels.size()) throw DimensionError("assignment and row ids differ in length");
  out << "player_id,cluster_label\n";
  for (std::size_t i = 0; i < row_ids.size(); ++i) out << row_ids[i] << ',' << a.labels[i] << '\n';
}

void write_cv_curve_csv(std::ostream& out, const CvCurve& curve, std::string_view param_name) {
  out << param_name << ",mean_score,chosen\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ',' << format_double(curve.mean_scores[i]) << ','
        << (i == curve.chosen_index ? 1 : 0) << '\n';
  }
}

void write_pca_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores, const Assignment& labels) {
  if (static_cast<std::size_t>(scores.rows()) != labels.labels.size()) {
    throw DimensionError("score rows and labels differ in length");
  }
  for (Eigen::Index c = 0; c < scores.cols(); ++c) out << "pc" << (c + 1) << ',';
  out << "cluster_label\n";
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (Eigen::Index c = 0; c < scores.cols(); ++c) out << format_double(scores(i, c)) << ',';
    out << labels.labels[static_cast<std::size_t>(i)] << '\n';
  }
}

// ------------------------------------------------------------------ samples

void write_samples_csv(std::ostream& out, std::span<const CompositionSample> samples, int k) {
  for (int team = 1; team <= 2; ++team) {
    for (int s = 0; s < k; ++s) out << 't' << team << "_s" << s << ',';
  }
  out << "label\n";
  for (const auto& sample : samples) {
    if (sample.x.size() != static_cast<std::size_t>(2 * k)) throw DimensionError("sample width is not 2k");
    for (const int c : sample.x) out << c << ',';
    out << sample.y << '\n';
  }
}

std::vector<CompositionSample> read_samples_csv(std::istream& in, int* k_out) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = split_csv(line);
  if (header.size() < 3 || header.size() % 2 == 0 || header.back() != "label") {
    throw ParseError(1, "header must be 2k count columns followed by 'label'");
  }
  const int k = static_cast<int>((header.size() - 1) / 2);
  std::vector<CompositionSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    CompositionSample sample;
    sample.x.reserve(static_cast<std::size_t>(2 * k));
    for (int j = 0; j < 2 * k; ++j) {
      const int count = parse_number<int>(fields[static_cast<std::size_t>(j)], line_no);
      if (count < 0) throw ParseError(line_no, "negative count");
      sample.x.push_back(count);
    }
    sample.y = parse_number<int>(fields.back(), line_no);
    if (sample.y != 0 && sample.y != 1) throw ParseError(line_no, "label must be 0 or 1");
    samples.push_back(std::move(sample));
  }
  if (k_out) *k_out = k;
  return samples;
}

void write_samples_manifest(std::ostream& out, const StyleProvenance& provenance) {
  json doc = provenance_to_json(provenance);
  doc["format"] = "teamcomp.samples_manifest";
  doc["format_version"] = kFormatVersion;
  out << doc.dump(2) << '\n';
}

StyleProvenance read_samples_manifest(std::istream& in) {
  const json doc = parse_document(in, "teamcomp.samples_manifest");
  return reading("samples manifest", [&] { return provenance_from_json(doc); });
}

void write_class_table_csv(std::ostream& out, const ClassTable& table) {
  out << "character_id,class\n";
  for (const auto& [character, cls] : table) out << character << ',' << cls << '\n';
}

ClassTable read_class_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"character_id", "class"}) {
    throw ParseError(1, "header must be 'character_id,class'");
  }
  ClassTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2 || fields[0].empty()) throw ParseError(line_no, "expected character_id,class");
    const int cls = parse_number<int>(fields[1], line_no);
    if (!table.emplace(fields[0], cls).second) {
      throw ParseError(line_no, "duplicate character '" + fields[0] + "'");
    }
  }
  return table;
}

// -------------------------------------------------------------- classifiers

void write_classifier(std::ostream& out, const Classifier& model, const StyleProvenance& provenance) {
  json doc = json::object();
  doc["format"] = "teamcomp.classifier";
  doc["format_version"] = kFormatVersion;
  doc["kind"] = to_string(kind_of(model));
  doc["provenance"] = provenance_to_json(provenance);
  json params = json::object();
  if (const auto* lr = std::get_if<LrModel>(&model)) {
    params["theta"] = vector_to_json(lr->theta);
    params["epochs_run"] = lr->epochs_run;
    params["final_log_likelihood"] = lr->final_log_likelihood;
  } else if (const auto* gda = std::get_if<GdaModel>(&model)) {
    params["phi"] = gda->phi;
    params["mu0"] = vector_to_json(gda->mu0);
    params["mu1"] = vector_to_json(gda->mu1);
    params["sigma"] = matrix_to_json(gda->sigma);
    params["ridge"] = gda->ridge;
  } else {
    const auto& svm = std::get<SvmModel>(model);
    params["c"] = svm.c;
    params["bias"] = svm.bias;
    params["kernel"] = "linear";
    params["support"] = svm.support;
    params["support_vectors"] = matrix_to_json(svm.support_vectors);
    params["support_coef"] = vector_to_json(svm.support_coef);
    params["converged"] = svm.converged;
    params["passes"] = svm.passes;
    params["max_kkt_violation"] = svm.max_kkt_violation;
  }
  doc["params"] = std::move(params);
  out << doc.dump(2) << '\n';
}

Classifier read_classifier(std::istream& in, StyleProvenance* provenance) {
  const json doc = parse_document(in, "teamcomp.classifier");
  return reading("classifier", [&]() -> Classifier {
    if (provenance) *provenance = provenance_from_json(doc.at("provenance"));
    const auto kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const json& p = doc.at("params");
    switch (kind) {
      case ModelKind::kLogistic: {
        LrModel lr;
        lr.theta = vector_from_json(p.at("theta"));
        lr.epochs_run = p.at("epochs_run").get<int>();
        lr.final_log_likelihood = p.at("final_log_likelihood").get<double>();
        return lr;
      }
      case ModelKind::kGda: {
        GdaModel gda;
        gda.phi = p.at("phi").get<double>();
        gda.mu0 = vector_from_json(p.at("mu0"));
        gda.mu1 = vector_from_json(p.at("mu1"));
        gda.sigma = matrix_from_json(p.at("sigma"));
        gda.ridge = p.at("ridge").get<double>();
        gda_refresh(gda);
        return gda;
      }
      case ModelKind::kSvm: {
        SvmModel svm;
        svm.c = p.at("c").get<double>();
        svm.bias = p.at("bias").get<double>();
        svm.support = p.at("support").get<std::vector<std::size_t>>();
        svm.support_coef = vector_from_json(p.at("support_coef"));
        svm.support_vectors = matrix_from_json(p.at("support_vectors"));
        svm.converged = p.at("converged").get<bool>();
        svm.passes = p.at("passes").get<int>();
        svm.max_kkt_violation = p.at("max_kkt_violation").get<double>();
        if (svm.support_vectors.rows() != svm.support_coef.size()) {
          throw ValidationError("SVM support vectors and coefficients differ in count");
        }
        return svm;
      }
    }
    throw ValidationError("unknown classifier kind");
  });
}

// ------------------------------------------------------------------- trials

void write_trial_summary_csv(std::ostream& out, const TrialSummary& summary, bool include_timing) {
  out << "model,features,trial,seed,train_acc,test_acc";
  if (include_timing) out << ",cpu_time_s";
  out << '\n';
  const std::string model = to_string(summary.model_kind);
  const std::string features = to_string(summary.feature_source);
  for (const auto& t : summary.trials) {
    out << model << ',' << features << ',' << t.trial << ',' << t.seed << ',' << format_double(t.train_accuracy)
        << ',' << format_double(t.test_accuracy);
    if (include_timing) out << ',' << format_double(t.train_seconds);
    out << '\n';
  }
  out << model << ',' << features << ",mean,," << format_double(summary.mean_train_accuracy) << ','
      << format_double(summary.mean_test_accuracy);
  if (include_timing) out << ',' << format_double(summary.mean_train_seconds);
  out << '\n';
}

TrialSummary read_trial_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = split_csv(line);
  const bool timing = header.size() == 7;
  if (header.size() < 6 || header[0] != "model" || header[4] != "train_acc" || header[5] != "test_acc") {
    throw ParseError(1, "not a trial summary header");
  }
  TrialSummary summary;
  bool first = true;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw ParseError(line_no, "wrong field count");
    if (first) {
      summary.model_kind = model_kind_from_string(f[0]);
      summary.feature_source = style_source_from_string(f[1]);
      first = false;
    }
    if (f[2] == "mean") continue;
    TrialRecord t;
    t.trial = parse_number<int>(f[2], line_no);
    t.seed = parse_number<std::uint64_t>(f[3], line_no);
    t.train_accuracy = parse_number<double>(f[4], line_no);
    t.test_accuracy = parse_number<double>(f[5], line_no);
    if (timing) t.train_seconds = parse_number<double>(f[6], line_no);
    summary.trials.push_back(t);
  }
  summarize(summary);
  return summary;
}

void write_comparison_report(std::ostream& out, const ComparisonReport& report, const TrialSummary& ours,
                             const TrialSummary& baseline) {
  json doc = json::object();
  doc["format"] = "teamcomp.comparison";
  doc["format_version"] = kFormatVersion;
  doc["ours"] = {{"model", to_string(ours.model_kind)},
                 {"features", to_string(ours.feature_source)},
                 {"mean_test_acc", ours.mean_test_accuracy}};
  doc["baseline"] = {{"model", to_string(baseline.model_kind)},
                     {"features", to_string(baseline.feature_source)},
                     {"mean_test_acc", baseline.mean_test_accuracy}};
  doc["mean_difference"] = report.mean_difference;
  doc["wins"] = report.wins;
  doc["losses"] = report.losses;
  doc["ties"] = report.ties;
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"seed", p.seed}, {"ours", p.ours}, {"baseline", p.baseline}, {"difference", p.difference}});
  }
  doc["pairs"] = std::move(pairs);
  out << doc.dump(2) << '\n';
}

// -------------------------------------------------------------------- synth

void write_ground_truth(std::ostream& out, const SynthCorpus& corpus) {
  const SynthSpec& spec = corpus.spec;
  json doc = json::object();
  doc["format"] = "teamcomp.ground_truth";
  doc["format_version"] = kFormatVersion;
  doc["seed"] = spec.seed;
  doc["n_archetypes"] = spec.n_archetypes;
  doc["within_spread"] = spec.within_spread;
  doc["archetype_means"] = matrix_to_json(spec.archetype_means);
  doc["column_scales"] = spec.column_scales;
  doc["outcome_weights"] = vector_to_json(spec.outcome_weights);
  doc["outcome_intercept"] = spec.outcome_intercept;
  json labels = json::object();
  for (std::size_t i = 0; i < corpus.players.players.size(); ++i) {
    labels[corpus.players.players[i].player_id] = corpus.players.labels[i];
  }
  doc["player_archetypes"] = std::move(labels);
  json probs = json::object();
  for (std::size_t m = 0; m < corpus.matches.matches.size(); ++m) {
    probs[corpus.matches.matches[m].match_id] = corpus.matches.true_probabilities[m];
  }
  doc["match_win_probability"] = std::move(probs);
  doc["bayes_rate"] = bayes_rate(corpus.matches.true_probabilities);
  out << doc.dump(2) << '\n';
}

}  // namespace teamcomp
