#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/features.hpp"
#include "teamcomp/ingest.hpp"

namespace teamcomp {

/// Planted ground truth for a synthetic corpus.
///
/// Each player belongs to one of `n_archetypes` archetypes, drawn uniformly.
/// Their statistics are the archetype mean plus isotropic Gaussian noise whose
/// root-mean-square length is `within_spread` (per-column standard deviation
/// within_spread / sqrt(stat_dim)), clipped at zero and multiplied by
/// `column_scales`. Team 1 wins a match with probability
/// sigmoid(outcome_weights . x + outcome_intercept), where x concatenates the
/// two teams' archetype counts.
struct SynthSpec {
  int n_archetypes = 8;
  int stat_dim = static_cast<int>(kStatCount);
  Eigen::MatrixXd archetype_means;  // n_archetypes x stat_dim, entries in [0, 1]
  double within_spread = 0.05;
  std::vector<double> column_scales;  // stat_dim entries, all positive
  int n_players = 1000;
  int n_matches = 5000;
  Eigen::VectorXd outcome_weights;  // 2 * n_archetypes
  double outcome_intercept = 0.0;
  int n_characters = 120;
  std::uint64_t seed = 0;
};

struct SynthParams {
  int n_archetypes = 8;
  int stat_dim = static_cast<int>(kStatCount);
  double within_spread = 0.05;
  // Archetype means are redrawn until every pair is at least
  // separation_factor * within_spread apart. Values below 4 are rejected.
  double separation_factor = 4.0;
  // Column j is scaled by 10^(j mod 8) so raw statistics span several orders
  // of magnitude, as real game statistics do.
  bool varied_magnitudes = true;
  int n_players = 1000;
  int n_matches = 5000;
  // Archetype a adds outcome_scale * (2a / (A - 1) - 1) to team 1's log-odds
  // per player and subtracts the same for team 2.
  double outcome_scale = 0.0;
  int n_characters = 120;
  std::uint64_t seed = 0;
};

inline constexpr double kMinSeparationFactor = 4.0;

SynthSpec make_synth_spec(const SynthParams& params);

/// Antisymmetric weights [v; -v] with v_a = scale * (2a / (A - 1) - 1).
Eigen::VectorXd planted_outcome_weights(int n_archetypes, double scale);

/// Scale for planted_outcome_weights whose Bayes rate over uniformly drawn
/// teams is `target`, found by bisection on a fixed Monte Carlo sample.
double outcome_scale_for_bayes_rate(int n_archetypes, double target, std::uint64_t seed,
                                    int samples = 20000);

/// Throws if the spec breaks its invariants (shapes, separation, finiteness).
void validate_spec(const SynthSpec& spec);

struct SynthPlayers {
  std::vector<PlayerStatRecord> players;
  std::vector<int> labels;  // archetype per player
};

SynthPlayers gen_players(const SynthSpec& spec);

struct SynthMatches {
  std::vector<MatchRecord> matches;
  std::vector<double> true_probabilities;  // P(team 1 wins) per match
};

SynthMatches gen_matches(const SynthSpec& spec, std::span<const PlayerStatRecord> players,
                         std::span<const int> labels);

/// Archetype count features of a match (team 1 then team 2).
Eigen::VectorXd true_features(const SynthSpec& spec, const MatchRecord& match,
                              std::span<const PlayerStatRecord> players, std::span<const int> labels);

double true_win_probability(const SynthSpec& spec, const Eigen::VectorXd& features);

/// Mean of max(p, 1 - p) over the generating probabilities.
double bayes_rate(std::span<const double> true_probabilities);

/// Recomputes the generating probabilities of `matches` and averages
/// max(p, 1 - p).
double bayes_rate(const SynthSpec& spec, std::span<const MatchRecord> matches,
                  std::span<const PlayerStatRecord> players, std::span<const int> labels);

/// Character "cNNN" belongs to official class NNN mod 6, independent of any
/// archetype.
ClassTable synth_class_table(int n_characters);

std::string character_id(int index);

struct SynthCorpus {
  SynthSpec spec;
  SynthPlayers players;
  SynthMatches matches;
  ClassTable class_table;
};

SynthCorpus gen_corpus(const SynthSpec& spec);

}  // namespace teamcomp
