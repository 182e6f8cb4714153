#include "teamcomp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "teamcomp/classify.hpp"
#include "teamcomp/error.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/seed.hpp"

namespace teamcomp {

namespace {

using Eigen::Index;

constexpr int kMaxMeanDraws = 100000;

std::string numbered(char prefix, int index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*d", prefix, width, index);
  return buf;
}

double min_pairwise_distance(const Eigen::MatrixXd& means) {
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < means.rows(); ++a) {
    for (Index b = a + 1; b < means.rows(); ++b) {
      best = std::min(best, (means.row(a) - means.row(b)).norm());
    }
  }
  return best;
}

}  // namespace

std::string character_id(int index) { return numbered('c', index, 3); }

Eigen::VectorXd planted_outcome_weights(int n_archetypes, double scale) {
  if (n_archetypes < 1) throw ValidationError("planted_outcome_weights: need at least one archetype");
  Eigen::VectorXd w(2 * n_archetypes);
  for (int a = 0; a < n_archetypes; ++a) {
    const double v = n_archetypes == 1 ? 0.0 : scale * (2.0 * a / (n_archetypes - 1) - 1.0);
    w(a) = v;
    w(n_archetypes + a) = -v;
  }
  return w;
}

double outcome_scale_for_bayes_rate(int n_archetypes, double target, std::uint64_t seed, int samples) {
  if (!(target >= 0.5 && target < 1.0)) {
    throw ValidationError("outcome_scale_for_bayes_rate: target must lie in [0.5, 1)");
  }
  if (n_archetypes < 2) throw ValidationError("outcome_scale_for_bayes_rate: need two or more archetypes");
  // Fixed sample of per-team archetype count differences.
  Rng rng(seed);
  Eigen::MatrixXd diffs = Eigen::MatrixXd::Zero(samples, n_archetypes);
  for (int s = 0; s < samples; ++s) {
    for (std::size_t p = 0; p < kTeamSize; ++p) {
      diffs(s, static_cast<Index>(rng.index(static_cast<std::size_t>(n_archetypes)))) += 1.0;
      diffs(s, static_cast<Index>(rng.index(static_cast<std::size_t>(n_archetypes)))) -= 1.0;
    }
  }
  const Eigen::VectorXd unit = planted_outcome_weights(n_archetypes, 1.0).head(n_archetypes);
  const Eigen::VectorXd logits = diffs * unit;
  const auto rate = [&](double scale) {
    double total = 0.0;
    for (Index s = 0; s < logits.size(); ++s) {
      const double p = sigmoid(scale * logits(s));
      total += std::max(p, 1.0 - p);
    }
    return total / static_cast<double>(logits.size());
  };
  double lo = 0.0, hi = 1.0;
  while (rate(hi) < target) {
    hi *= 2.0;
    if (hi > 1e6) throw ValidationError("outcome_scale_for_bayes_rate: target not reachable");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (rate(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SynthSpec make_synth_spec(const SynthParams& params) {
  if (params.n_archetypes < 1) throw ValidationError("synth: need at least one archetype");
  if (params.stat_dim < 1) throw ValidationError("synth: stat_dim must be positive");
  if (params.separation_factor < kMinSeparationFactor) {
    throw ValidationError("synth: separation factor must be at least 4");
  }
  if (!(params.within_spread >= 0.0)) throw ValidationError("synth: spread must be nonnegative");

  SynthSpec spec;
  spec.n_archetypes = params.n_archetypes;
  spec.stat_dim = params.stat_dim;
  spec.within_spread = params.within_spread;
  spec.n_players = params.n_players;
  spec.n_matches = params.n_matches;
  spec.n_characters = params.n_characters;
  spec.seed = params.seed;
  spec.column_scales.resize(static_cast<std::size_t>(params.stat_dim), 1.0);
  if (params.varied_magnitudes) {
    for (int j = 0; j < params.stat_dim; ++j) spec.column_scales[static_cast<std::size_t>(j)] = std::pow(10.0, j % 8);
  }

  // Sequential rejection: each new mean must clear all earlier ones.
  Rng rng(derive_seed(params.seed, 0));
  const double required = params.separation_factor * params.within_spread;
  spec.archetype_means.resize(params.n_archetypes, params.stat_dim);
  for (int a = 0; a < params.n_archetypes; ++a) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxMeanDraws && !placed; ++attempt) {
      for (int j = 0; j < params.stat_dim; ++j) spec.archetype_means(a, j) = rng.uniform();
      placed = true;
      for (int b = 0; b < a; ++b) {
        if ((spec.archetype_means.row(a) - spec.archetype_means.row(b)).norm() < required) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) {
      throw ValidationError("synth: cannot place " + std::to_string(params.n_archetypes) +
                            " archetypes " + std::to_string(required) + " apart in " +
                            std::to_string(params.stat_dim) + " dimensions");
    }
  }
  spec.outcome_weights = planted_outcome_weights(params.n_archetypes, params.outcome_scale);
  validate_spec(spec);
  return spec;
}

void validate_spec(const SynthSpec& spec) {
  if (spec.n_archetypes < 1 || spec.stat_dim < 1) throw ValidationError("synth: empty spec");
  if (spec.archetype_means.rows() != spec.n_archetypes || spec.archetype_means.cols() != spec.stat_dim) {
    throw ValidationError("synth: archetype_means must be n_archetypes x stat_dim");
  }
  if (!spec.archetype_means.allFinite() || spec.archetype_means.minCoeff() < 0.0 ||
      spec.archetype_means.maxCoeff() > 1.0) {
    throw ValidationError("synth: archetype means must lie in [0, 1]");
  }
  if (!(spec.within_spread >= 0.0) || !std::isfinite(spec.within_spread)) {
    throw ValidationError("synth: spread must be finite and nonnegative");
  }
  if (spec.n_archetypes > 1 &&
      min_pairwise_distance(spec.archetype_means) < kMinSeparationFactor * spec.within_spread) {
    throw ValidationError("synth: archetype means closer than 4 * within_spread");
  }
  if (spec.column_scales.size() != static_cast<std::size_t>(spec.stat_dim) ||
      std::any_of(spec.column_scales.begin(), spec.column_scales.end(),
                  [](double s) { return !(s > 0.0) || !std::isfinite(s); })) {
    throw ValidationError("synth: column_scales must hold stat_dim positive values");
  }
  if (spec.outcome_weights.size() != 2 * spec.n_archetypes || !spec.outcome_weights.allFinite() ||
      !std::isfinite(spec.outcome_intercept)) {
    throw ValidationError("synth: outcome weights must be 2 * n_archetypes finite values");
  }
  if (spec.n_players < 0 || spec.n_matches < 0) throw ValidationError("synth: negative sizes");
  if (spec.n_characters < 1) throw ValidationError("synth: need at least one character");
}

SynthPlayers gen_players(const SynthSpec& spec) {
  validate_spec(spec);
  if (spec.stat_dim != static_cast<int>(kStatCount)) {
    throw ValidationError("gen_players: player records carry exactly " + std::to_string(kStatCount) +
                          " statistics");
  }
  Rng rng(derive_seed(spec.seed, 1));
  const double sigma = spec.within_spread / std::sqrt(static_cast<double>(spec.stat_dim));
  SynthPlayers out;
  out.players.reserve(static_cast<std::size_t>(spec.n_players));
  out.labels.reserve(static_cast<std::size_t>(spec.n_players));
  for (int i = 0; i < spec.n_players; ++i) {
    const int a = static_cast<int>(rng.index(static_cast<std::size_t>(spec.n_archetypes)));
    PlayerStatRecord p;
    p.player_id = numbered('p', i, 6);
    for (int j = 0; j < spec.stat_dim; ++j) {
      double value = spec.archetype_means(a, j);
      if (sigma > 0.0) value += sigma * rng.normal();
      p.stats[static_cast<std::size_t>(j)] = std::max(value, 0.0) * spec.column_scales[static_cast<std::size_t>(j)];
    }
    out.players.push_back(std::move(p));
    out.labels.push_back(a);
  }
  return out;
}

namespace {

std::unordered_map<std::string, int> archetype_lookup(std::span<const PlayerStatRecord> players,
                                                      std::span<const int> labels) {
  if (labels.size() != players.size()) throw DimensionError("synth: one label per player required");
  std::unordered_map<std::string, int> archetype;
  archetype.reserve(players.size());
  for (std::size_t i = 0; i < players.size(); ++i) archetype.emplace(players[i].player_id, labels[i]);
  return archetype;
}

Eigen::VectorXd count_features(int k, const MatchRecord& match,
                               const std::unordered_map<std::string, int>& archetype) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * k);
  const auto label = [&](const std::string& id) {
    const auto it = archetype.find(id);
    if (it == archetype.end()) throw ValidationError("synth: unknown player '" + id + "'");
    return it->second;
  };
  for (const auto& id : match.team1) x(label(id)) += 1.0;
  for (const auto& id : match.team2) x(k + label(id)) += 1.0;
  return x;
}

}  // namespace

Eigen::VectorXd true_features(const SynthSpec& spec, const MatchRecord& match,
                              std::span<const PlayerStatRecord> players, std::span<const int> labels) {
  return count_features(spec.n_archetypes, match, archetype_lookup(players, labels));
}

double true_win_probability(const SynthSpec& spec, const Eigen::VectorXd& features) {
  return sigmoid(spec.outcome_weights.dot(features) + spec.outcome_intercept);
}

SynthMatches gen_matches(const SynthSpec& spec, std::span<const PlayerStatRecord> players,
                         std::span<const int> labels) {
  validate_spec(spec);
  if (players.size() < 2 * kTeamSize) throw ValidationError("gen_matches: need at least 10 players");
  if (labels.size() != players.size()) throw DimensionError("gen_matches: one label per player required");
  Rng rng(derive_seed(spec.seed, 2));
  const int k = spec.n_archetypes;
  SynthMatches out;
  out.matches.reserve(static_cast<std::size_t>(spec.n_matches));
  out.true_probabilities.reserve(static_cast<std::size_t>(spec.n_matches));
  std::vector<std::size_t> picked;
  for (int m = 0; m < spec.n_matches; ++m) {
    picked.clear();
    while (picked.size() < 2 * kTeamSize) {
      const std::size_t candidate = rng.index(players.size());
      if (std::find(picked.begin(), picked.end(), candidate) == picked.end()) picked.push_back(candidate);
    }
    MatchRecord match;
    match.match_id = numbered('m', m, 6);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * k);
    std::map<std::string, std::string> choices;
    for (std::size_t s = 0; s < 2 * kTeamSize; ++s) {
      const auto& player = players[picked[s]];
      const int a = labels[picked[s]];
      if (s < kTeamSize) {
        match.team1[s] = player.player_id;
        x(a) += 1.0;
      } else {
        match.team2[s - kTeamSize] = player.player_id;
        x(k + a) += 1.0;
      }
      choices.emplace(player.player_id,
                      character_id(static_cast<int>(rng.index(static_cast<std::size_t>(spec.n_characters)))));
    }
    match.character_choices = std::move(choices);
    const double p = true_win_probability(spec, x);
    match.winner = rng.bernoulli(p) ? Winner::kTeam1 : Winner::kTeam2;
    out.matches.push_back(std::move(match));
    out.true_probabilities.push_back(p);
  }
  return out;
}

double bayes_rate(std::span<const double> true_probabilities) {
  if (true_probabilities.empty()) return 0.0;
  double total = 0.0;
  for (const double p : true_probabilities) total += std::max(p, 1.0 - p);
  return total / static_cast<double>(true_probabilities.size());
}

double bayes_rate(const SynthSpec& spec, std::span<const MatchRecord> matches,
                  std::span<const PlayerStatRecord> players, std::span<const int> labels) {
  const auto archetype = archetype_lookup(players, labels);
  std::vector<double> probs;
  probs.reserve(matches.size());
  for (const auto& match : matches) {
    probs.push_back(true_win_probability(spec, count_features(spec.n_archetypes, match, archetype)));
  }
  return bayes_rate(probs);
}

ClassTable synth_class_table(int n_characters) {
  ClassTable table;
  for (int c = 0; c < n_characters; ++c) table.emplace(character_id(c), c % kOfficialClassCount);
  return table;
}

SynthCorpus gen_corpus(const SynthSpec& spec) {
  SynthCorpus corpus;
  corpus.spec = spec;
  corpus.players = gen_players(spec);
  corpus.matches = gen_matches(spec, corpus.players.players, corpus.players.labels);
  corpus.class_table = synth_class_table(spec.n_characters);
  return corpus;
}

}  // namespace teamcomp
