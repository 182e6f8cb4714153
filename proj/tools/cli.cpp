#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "teamcomp/classify.hpp"
#include "teamcomp/cluster.hpp"
#include "teamcomp/error.hpp"
#include "teamcomp/eval.hpp"
#include "teamcomp/features.hpp"
#include "teamcomp/ingest.hpp"
#include "teamcomp/io.hpp"
#include "teamcomp/pca.hpp"
#include "teamcomp/preprocess.hpp"
#include "teamcomp/seed.hpp"
#include "teamcomp/synth.hpp"

namespace teamcomp::cli {
namespace {

namespace fs = std::filesystem;

// Re-raises `e` with the offending file prefixed, keeping its category.
[[noreturn]] void rethrow_for_file(const std::string& path, const Error& e) {
  if (e.category() == ErrorCategory::kNumerical) throw NumericalError(path + ": " + e.what());
  throw ValidationError(path + ": " + e.what());
}

template <typename Reader>
auto read_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open for reading");
  try {
    return reader(in);
  } catch (const Error& e) {
    rethrow_for_file(path, e);
  }
}

std::string slurp(const std::string& path) {
  return read_file(path, [](std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  });
}

// Output is rendered in memory first so a failing stage leaves no partial file.
template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << bytes;
  out.flush();
  if (!out) throw ValidationError(path + ": write failed");
}

std::string manifest_path(const std::string& samples_path) { return samples_path + ".manifest.json"; }

std::vector<PlayerStatRecord> load_players(const std::string& path) {
  return read_file(path, [](std::istream& in) { return parse_player_stats(in); });
}

std::vector<MatchRecord> load_matches(const std::string& path) {
  return read_file(path, [](std::istream& in) { return parse_matches(in); });
}

Corpus load_corpus(const std::string& players_path, const std::string& matches_path) {
  auto players = load_players(players_path);
  auto matches = load_matches(matches_path);
  try {
    return link_corpus(std::move(players), std::move(matches));
  } catch (const Error& e) {
    rethrow_for_file(matches_path, e);
  }
}

ClusterModelFile load_cluster_model(const std::string& path) {
  return read_file(path, [](std::istream& in) { return read_cluster_model(in); });
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw CLI::ValidationError(what, "'" + text + "' is not a number");
  }
  return value;
}

// "a,b,c" lists values; "lo:hi" is an integer range; "lo:step:hi" steps by
// `step`, with values rounded to 12 decimals so 2.5:0.1:4.4 yields 2.8, not
// 2.8000000000000003.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<double> grid;
  if (text.find(':') == std::string::npos) {
    for (const auto& part : split(text, ',')) grid.push_back(parse_number(part, what));
  } else {
    const auto parts = split(text, ':');
    if (parts.size() != 2 && parts.size() != 3) {
      throw CLI::ValidationError(what, "expected lo:hi or lo:step:hi, got '" + text + "'");
    }
    const double lo = parse_number(parts.front(), what);
    const double hi = parse_number(parts.back(), what);
    const double step = parts.size() == 3 ? parse_number(parts[1], what) : 1.0;
    if (!(step > 0.0) || hi < lo) {
      throw CLI::ValidationError(what, "range '" + text + "' is empty or has a non-positive step");
    }
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  }
  if (grid.empty()) throw CLI::ValidationError(what, "grid is empty");
  return grid;
}

std::vector<int> to_int_grid(const std::vector<double>& values, const std::string& what) {
  std::vector<int> grid;
  for (const double v : values) {
    if (v != std::floor(v) || v < 1.0) {
      throw CLI::ValidationError(what, "k values must be positive integers");
    }
    grid.push_back(static_cast<int>(v));
  }
  return grid;
}

std::string format_grid(const std::vector<double>& grid) {
  std::string text;
  for (const double v : grid) text += (text.empty() ? "" : ",") + format_double(v);
  return text;
}

// Subcommand options. Paths are empty when not given.

struct SeedOption {
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed (default " + std::to_string(kDefaultSeed) + ")");
  }

  std::uint64_t resolve(std::ostream& err) const {
    if (seed) return *seed;
    err << "teamcomp: --seed not given, using default " << kDefaultSeed << "\n";
    return kDefaultSeed;
  }
};

struct SynthOptions {
  std::string out_dir;
  SynthParams params;
  double target_bayes_rate = 0.70;
  std::optional<double> outcome_scale;
  SeedOption seed;
};

struct IngestOptions {
  std::string players;
  std::string matches;
};

struct ClusterOptions {
  std::string players;
  std::string algorithm = "kmeans";
  std::optional<int> k;
  std::optional<double> lambda;
  int trials = 20;
  int max_iter = kDefaultMaxIter;
  std::string model_out;
  std::string assignment_out;
  SeedOption seed;
};

struct SelectOptions {
  std::string players;
  std::string grid;
  int folds = 10;
  int trials_per_fold = CvOptions{}.trials_per_fold;
  double flat_tolerance = kDefaultFlatTolerance;
  int max_iter = kDefaultMaxIter;
  std::string out;
  SeedOption seed;
};

struct PcaOptions {
  std::string players;
  std::string model;
  int components = 3;
  std::string out;
};

struct FeaturizeOptions {
  std::string players;
  std::string matches;
  std::string model;
  std::string class_table;
  std::string out;
};

struct ClassifierOptions {
  std::string kind = "lr";
  double learning_rate = LrOptions{}.learning_rate;
  int epochs = LrOptions{}.epochs;
  double ridge = 1e-6;
  std::string c_grid = format_grid(default_c_grid());
  double tol = SvmOptions{}.tol;
  int max_passes = SvmOptions{}.max_passes;

  void attach(CLI::App* app) {
    app->add_option("--model-kind", kind, "Classifier: lr, gda or svm")->check(CLI::IsMember({"lr", "gda", "svm"}));
    app->add_option("--learning-rate", learning_rate, "Logistic regression step size")->check(CLI::PositiveNumber);
    app->add_option("--epochs", epochs, "Logistic regression epochs")->check(CLI::PositiveNumber);
    app->add_option("--ridge", ridge, "GDA starting ridge when the covariance does not factorize")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--c-grid", c_grid, "SVM C candidates, chosen on a 10% validation split");
    app->add_option("--tol", tol, "SVM KKT tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-passes", max_passes, "SVM pass limit")->check(CLI::PositiveNumber);
  }

  ClassifierConfig config() const {
    ClassifierConfig c;
    c.lr.learning_rate = learning_rate;
    c.lr.epochs = epochs;
    c.gda_ridge = ridge;
    c.svm.tol = tol;
    c.svm.max_passes = max_passes;
    c.c_grid = parse_grid(c_grid, "--c-grid");
    for (const double value : c.c_grid) {
      if (!(value > 0.0)) throw CLI::ValidationError("--c-grid", "C values must be positive");
    }
    return c;
  }
};

struct TrainOptions {
  std::string samples;
  ClassifierOptions classifier;
  std::string out;
  SeedOption seed;
};

struct EvaluateOptions {
  std::string samples;
  ClassifierOptions classifier;
  int trials = 20;
  double test_fraction = 0.1;
  bool no_timing = false;
  std::string out;
  SeedOption seed;
};

struct CompareOptions {
  std::string ours;
  std::string baseline;
  std::string out;
};

// ------------------------------------------------------------------ commands

int do_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  SynthParams params = o.params;
  params.seed = o.seed.resolve(err);
  params.outcome_scale = o.outcome_scale ? *o.outcome_scale
                                         : outcome_scale_for_bayes_rate(params.n_archetypes, o.target_bayes_rate,
                                                                        derive_seed(params.seed, 3));
  const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
  const fs::path dir(o.out_dir);
  write_file((dir / "players.jsonl").string(),
             render([&](std::ostream& s) { write_player_stats(s, corpus.players.players); }));
  write_file((dir / "matches.jsonl").string(),
             render([&](std::ostream& s) { write_matches(s, corpus.matches.matches); }));
  write_file((dir / "class_table.csv").string(),
             render([&](std::ostream& s) { write_class_table_csv(s, corpus.class_table); }));
  write_file((dir / "ground_truth.json").string(), render([&](std::ostream& s) { write_ground_truth(s, corpus); }));
  out << "players " << corpus.players.players.size() << " matches " << corpus.matches.matches.size()
      << " archetypes " << params.n_archetypes << " bayes_rate "
      << format_double(bayes_rate(corpus.matches.true_probabilities)) << "\n";
  return kExitOk;
}

int do_ingest(const IngestOptions& o, std::ostream& out) {
  const Corpus corpus = load_corpus(o.players, o.matches);
  out << "players " << corpus.players.size() << " matches " << corpus.matches.size() << " stats " << kStatCount
      << " schema " << kStatSchemaVersion << "\n";
  return kExitOk;
}

int do_cluster(const ClusterOptions& o, std::ostream& out, std::ostream& err) {
  const auto players = load_players(o.players);
  if (players.empty()) throw ValidationError(o.players + ": no player records");
  const StatMatrix m = min_max_normalize(build_stat_matrix(players));
  FitConfig config;
  if (o.algorithm == "kmeans") {
    if (!o.k) throw CLI::ValidationError("--k", "required for kmeans");
    config = KMeansConfig{*o.k, o.max_iter};
  } else {
    if (!o.lambda) throw CLI::ValidationError("--lambda", "required for dpmeans");
    config = DpMeansConfig{*o.lambda, o.max_iter};
  }
  const FitResult result = best_of_trials(m, config, o.trials, o.seed.resolve(err));
  const ClusterModelFile file{result.model, *m.normalization, m.column_names};
  write_file(o.model_out, render([&](std::ostream& s) { write_cluster_model(s, file); }));
  if (!o.assignment_out.empty()) {
    write_file(o.assignment_out,
               render([&](std::ostream& s) { write_assignment_csv(s, m.row_ids, result.assignment); }));
  }
  out << to_string(result.model.algorithm) << " k " << result.model.centroids.rows() << " objective "
      << format_double(result.model.final_objective) << " iterations " << result.model.iterations
      << (result.model.converged ? "" : " (not converged)") << "\n";
  return kExitOk;
}

int do_select(const SelectOptions& o, bool select_k, std::ostream& out, std::ostream& err) {
  const auto players = load_players(o.players);
  if (players.empty()) throw ValidationError(o.players + ": no player records");
  const StatMatrix m = min_max_normalize(build_stat_matrix(players));
  CvOptions options;
  options.folds = o.folds;
  options.trials_per_fold = o.trials_per_fold;
  options.flat_tolerance = o.flat_tolerance;
  options.max_iter = o.max_iter;
  const std::uint64_t seed = o.seed.resolve(err);
  CvCurve curve;
  if (select_k) {
    const std::string text = o.grid.empty() ? "5:24" : o.grid;
    const auto grid = to_int_grid(parse_grid(text, "--grid"), "--grid");
    curve = cv_select_k(m, grid, seed, options);
  } else {
    const std::string text = o.grid.empty() ? "2.5:0.1:4.4" : o.grid;
    const auto grid = parse_grid(text, "--grid");
    for (const double lambda : grid) {
      if (!(lambda > 0.0)) throw CLI::ValidationError("--grid", "lambda values must be positive");
    }
    curve = cv_select_lambda(m, grid, seed, options);
  }
  write_file(o.out, render([&](std::ostream& s) { write_cv_curve_csv(s, curve, select_k ? "k" : "lambda"); }));
  out << (select_k ? "k " : "lambda ") << format_double(curve.chosen) << "\n";
  return kExitOk;
}

int do_pca(const PcaOptions& o, std::ostream& out) {
  const auto players = load_players(o.players);
  if (players.empty()) throw ValidationError(o.players + ": no player records");
  const ClusterModelFile model = load_cluster_model(o.model);
  StatMatrix m;
  try {
    m = apply_normalization(build_stat_matrix(players), model.ranges);
  } catch (const Error& e) {
    rethrow_for_file(o.model, e);
  }
  const PcaProjection projection = pca_fit(m, o.components);
  const Eigen::MatrixXd scores = pca_transform(projection, m);
  const Assignment labels = assign_nearest(m, model.model.centroids);
  write_file(o.out, render([&](std::ostream& s) { write_pca_scores_csv(s, scores, labels); }));
  out << "explained_variance";
  for (Eigen::Index c = 0; c < projection.explained_variance.size(); ++c) {
    out << " " << format_double(projection.explained_variance[c]);
  }
  out << " total " << format_double(projection.total_variance) << "\n";
  return kExitOk;
}

int do_featurize(const FeaturizeOptions& o, std::ostream& out) {
  if (o.model.empty() == o.class_table.empty()) {
    throw CLI::ValidationError("featurize", "give exactly one of --model or --class-table");
  }
  const Corpus corpus = load_corpus(o.players, o.matches);
  std::vector<CompositionSample> samples;
  StyleProvenance provenance;
  if (!o.model.empty()) {
    const std::string bytes = slurp(o.model);
    std::istringstream in(bytes);
    ClusterModelFile model;
    try {
      model = read_cluster_model(in);
    } catch (const Error& e) {
      rethrow_for_file(o.model, e);
    }
    const StyleMap style = build_style_map(model.model, model.ranges, corpus.players);
    provenance.source = style.source;
    provenance.k = style.k;
    provenance.cluster_model_hash = content_hash(bytes);
    provenance.ranges = model.ranges;
    samples = encode_corpus(corpus, style, style.k);
  } else {
    const ClassTable table = read_file(o.class_table, [](std::istream& in) { return read_class_table_csv(in); });
    std::vector<StyleMap> per_match;
    try {
      per_match = official_style_map(corpus.matches, table);
    } catch (const Error& e) {
      rethrow_for_file(o.class_table, e);
    }
    provenance.source = StyleSource::kOfficialClasses;
    provenance.k = kOfficialClassCount;
    samples = encode_corpus(corpus, per_match);
  }
  provenance.n_samples = samples.size();
  write_file(o.out, render([&](std::ostream& s) { write_samples_csv(s, samples, provenance.k); }));
  write_file(manifest_path(o.out), render([&](std::ostream& s) { write_samples_manifest(s, provenance); }));
  out << "samples " << samples.size() << " k " << provenance.k << " source " << to_string(provenance.source) << "\n";
  return kExitOk;
}

struct LoadedSamples {
  Dataset data;
  StyleProvenance provenance;
};

LoadedSamples load_samples(const std::string& path) {
  int k = 0;
  const auto samples = read_file(path, [&](std::istream& in) { return read_samples_csv(in, &k); });
  const std::string manifest = manifest_path(path);
  StyleProvenance provenance = read_file(manifest, [](std::istream& in) { return read_samples_manifest(in); });
  if (provenance.k != k) {
    throw ValidationError(manifest + ": k = " + std::to_string(provenance.k) + " but " + path + " has k = " +
                          std::to_string(k));
  }
  if (provenance.n_samples != samples.size()) {
    throw ValidationError(manifest + ": records " + std::to_string(provenance.n_samples) + " samples but " + path +
                          " has " + std::to_string(samples.size()));
  }
  if (samples.empty()) throw ValidationError(path + ": no samples");
  return {to_dataset(samples), std::move(provenance)};
}

int do_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedSamples loaded = load_samples(o.samples);
  const ClassifierConfig config = o.classifier.config();
  const Classifier model =
      train_classifier(model_kind_from_string(o.classifier.kind), loaded.data, config, o.seed.resolve(err));
  write_file(o.out, render([&](std::ostream& s) { write_classifier(s, model, loaded.provenance); }));
  const double train_acc =
      accuracy([&](const RowRef& x) { return predict_label(model, x); }, loaded.data);
  out << to_string(kind_of(model)) << " train_acc " << format_double(train_acc) << "\n";
  return kExitOk;
}

int do_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedSamples loaded = load_samples(o.samples);
  TrialConfig config;
  config.model_kind = model_kind_from_string(o.classifier.kind);
  config.feature_source = loaded.provenance.source;
  config.n_trials = o.trials;
  config.base_seed = o.seed.resolve(err);
  config.test_fraction = o.test_fraction;
  config.classifier = o.classifier.config();
  const TrialSummary summary = run_trials(loaded.data, config);
  write_file(o.out, render([&](std::ostream& s) { write_trial_summary_csv(s, summary, !o.no_timing); }));
  out << to_string(summary.model_kind) << " " << to_string(summary.feature_source) << " train_acc "
      << format_double(summary.mean_train_accuracy) << " test_acc " << format_double(summary.mean_test_accuracy)
      << "\n";
  return kExitOk;
}

int do_compare(const CompareOptions& o, std::ostream& out) {
  const auto load = [](const std::string& path) {
    return read_file(path, [](std::istream& in) { return read_trial_summary_csv(in); });
  };
  const TrialSummary ours = load(o.ours);
  const TrialSummary baseline = load(o.baseline);
  const ComparisonReport report = baseline_compare(ours, baseline);
  write_file(o.out, render([&](std::ostream& s) { write_comparison_report(s, report, ours, baseline); }));
  out << "mean_difference " << format_double(report.mean_difference) << " wins " << report.wins << " losses "
      << report.losses << " ties " << report.ties << "\n";
  return kExitOk;
}

}  // namespace

int run_subcommand(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Play-style clustering and team-composition outcome prediction", "teamcomp"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with planted archetypes");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Directory for players.jsonl, matches.jsonl, "
                                                    "class_table.csv and ground_truth.json")
      ->required();
  synth_cmd->add_option("--players", synth.params.n_players, "Number of players")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--matches", synth.params.n_matches, "Number of matches")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--archetypes", synth.params.n_archetypes, "Planted archetypes")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--spread", synth.params.within_spread, "RMS distance of a player from its archetype mean")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--separation", synth.params.separation_factor,
                        "Minimum archetype mean distance, in multiples of --spread (at least 4)");
  synth_cmd->add_option("--characters", synth.params.n_characters, "Number of playable characters")
      ->check(CLI::PositiveNumber);
  auto* target = synth_cmd->add_option("--bayes-rate", synth.target_bayes_rate,
                                       "Calibrate outcome weights to this Bayes rate over random teams");
  synth_cmd->add_option("--outcome-scale", synth.outcome_scale, "Explicit outcome weight scale")->excludes(target);
  synth.seed.attach(synth_cmd);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate and link player and match files");
  ingest_cmd->add_option("--players", ingest.players, "players.jsonl")->required();
  ingest_cmd->add_option("--matches", ingest.matches, "matches.jsonl")->required();

  ClusterOptions cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "Fit k-means or DP-means, best of several trials");
  cluster_cmd->add_option("--players", cluster.players, "players.jsonl")->required();
  cluster_cmd->add_option("--algorithm", cluster.algorithm, "kmeans or dpmeans")
      ->check(CLI::IsMember({"kmeans", "dpmeans"}));
  cluster_cmd->add_option("--k", cluster.k, "Number of clusters (kmeans)")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--lambda", cluster.lambda, "Threshold distance (dpmeans)")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--trials", cluster.trials, "Seeded restarts; the lowest objective wins")
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--max-iter", cluster.max_iter, "Iteration limit per fit")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--model-out", cluster.model_out, "Cluster model file")->required();
  cluster_cmd->add_option("--assignment-out", cluster.assignment_out, "Per-player label CSV");
  cluster.seed.attach(cluster_cmd);

  SelectOptions select_k;
  SelectOptions select_lambda;
  auto* select_k_cmd = app.add_subcommand("select-k", "Cross-validate k-means over a k grid");
  auto* select_lambda_cmd = app.add_subcommand("select-lambda", "Cross-validate DP-means over a lambda grid");
  for (auto [cmd, o, grid_help] :
       {std::tuple{select_k_cmd, &select_k, "k grid: lo:hi or a,b,c (default 5:24)"},
        std::tuple{select_lambda_cmd, &select_lambda, "lambda grid: lo:step:hi or a,b,c (default 2.5:0.1:4.4)"}}) {
    cmd->add_option("--players", o->players, "players.jsonl")->required();
    cmd->add_option("--grid", o->grid, grid_help);
    cmd->add_option("--folds", o->folds, "Cross-validation folds")->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--trials-per-fold", o->trials_per_fold, "Restarts per training fold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--flat-tolerance", o->flat_tolerance,
                    "Score changes below this fraction of the curve range count as flat")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iter", o->max_iter, "Iteration limit per fit")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o->out, "Curve CSV")->required();
    o->seed.attach(cmd);
  }

  PcaOptions pca;
  auto* pca_cmd = app.add_subcommand("pca", "Project normalized statistics onto principal components");
  pca_cmd->add_option("--players", pca.players, "players.jsonl")->required();
  pca_cmd->add_option("--model", pca.model, "Cluster model supplying ranges and labels")->required();
  pca_cmd->add_option("--components", pca.components, "Number of components")->check(CLI::PositiveNumber);
  pca_cmd->add_option("--out", pca.out, "Scores CSV")->required();

  FeaturizeOptions featurize;
  auto* featurize_cmd = app.add_subcommand("featurize", "Encode matches as team style counts");
  featurize_cmd->add_option("--players", featurize.players, "players.jsonl")->required();
  featurize_cmd->add_option("--matches", featurize.matches, "matches.jsonl")->required();
  featurize_cmd->add_option("--model", featurize.model, "Cluster model: styles from player statistics");
  featurize_cmd->add_option("--class-table", featurize.class_table,
                            "Character class table: styles from official classes");
  featurize_cmd->add_option("--out", featurize.out, "Samples CSV; a .manifest.json sidecar is written next to it")
      ->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a samples file");
  train_cmd->add_option("--samples", train.samples, "Samples CSV from featurize")->required();
  train.classifier.attach(train_cmd);
  train_cmd->add_option("--out", train.out, "Classifier model file")->required();
  train.seed.attach(train_cmd);

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Repeated hold-out trials for one classifier");
  evaluate_cmd->add_option("--samples", evaluate.samples, "Samples CSV from featurize")->required();
  evaluate.classifier.attach(evaluate_cmd);
  evaluate_cmd->add_option("--trials", evaluate.trials, "Number of trials")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--test-fraction", evaluate.test_fraction, "Held-out fraction")
      ->check(CLI::Bound(0.0, 1.0));
  evaluate_cmd->add_flag("--no-timing", evaluate.no_timing, "Omit the training time column");
  evaluate_cmd->add_option("--out", evaluate.out, "Trial summary CSV")->required();
  evaluate.seed.attach(evaluate_cmd);

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Paired comparison of two trial summaries");
  compare_cmd->add_option("--ours", compare.ours, "Trial summary CSV of the candidate features")->required();
  compare_cmd->add_option("--baseline", compare.baseline, "Trial summary CSV of the baseline features")
      ->required();
  compare_cmd->add_option("--out", compare.out, "Report JSON")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return do_synth(synth, out, err);
    if (ingest_cmd->parsed()) return do_ingest(ingest, out);
    if (cluster_cmd->parsed()) return do_cluster(cluster, out, err);
    if (select_k_cmd->parsed()) return do_select(select_k, true, out, err);
    if (select_lambda_cmd->parsed()) return do_select(select_lambda, false, out, err);
    if (pca_cmd->parsed()) return do_pca(pca, out);
    if (featurize_cmd->parsed()) return do_featurize(featurize, out);
    if (train_cmd->parsed()) return do_train(train, out, err);
    if (evaluate_cmd->parsed()) return do_evaluate(evaluate, out, err);
    if (compare_cmd->parsed()) return do_compare(compare, out);
  } catch (const CLI::ParseError& e) {
    err << "teamcomp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "teamcomp: " << e.what() << "\n";
    return e.category() == ErrorCategory::kNumerical ? kExitNumerical : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "teamcomp: " << e.what() << "\n";
    return kExitValidation;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace teamcomp::cli
