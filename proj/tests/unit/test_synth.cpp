#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "teamcomp/cluster.hpp"
#include "teamcomp/error.hpp"
#include "teamcomp/ingest.hpp"
#include "teamcomp/io.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/synth.hpp"

namespace teamcomp {
namespace {

SynthParams small_params(std::uint64_t seed) {
  SynthParams params;
  params.n_players = 300;
  params.n_matches = 500;
  params.seed = seed;
  return params;
}

TEST(GenPlayers, ZeroSpreadGivesArchetypeMeans) {
  SynthParams params = small_params(1);
  params.within_spread = 0.0;
  params.varied_magnitudes = false;
  const SynthSpec spec = make_synth_spec(params);
  const SynthPlayers players = gen_players(spec);
  for (std::size_t i = 0; i < players.players.size(); ++i) {
    for (std::size_t j = 0; j < kStatCount; ++j) {
      ASSERT_EQ(players.players[i].stats[j],
                spec.archetype_means(players.labels[i], static_cast<Eigen::Index>(j)));
    }
  }
}

TEST(GenPlayers, SingleArchetypeLabelsAreZero) {
  SynthParams params = small_params(2);
  params.n_archetypes = 1;
  const SynthPlayers players = gen_players(make_synth_spec(params));
  for (const int label : players.labels) EXPECT_EQ(label, 0);
}

TEST(GenPlayers, SpreadIsRootMeanSquareRadius) {
  SynthParams params = small_params(3);
  params.n_players = 4000;
  params.within_spread = 0.05;
  params.varied_magnitudes = false;
  const SynthSpec spec = make_synth_spec(params);
  const SynthPlayers players = gen_players(spec);
  double total = 0.0;
  for (std::size_t i = 0; i < players.players.size(); ++i) {
    for (std::size_t j = 0; j < kStatCount; ++j) {
      const double diff = players.players[i].stats[j] - spec.archetype_means(players.labels[i], static_cast<Eigen::Index>(j));
      total += diff * diff;
    }
  }
  // Clipping at zero only shrinks deviations, so the estimate may sit a bit low.
  const double rms = std::sqrt(total / static_cast<double>(players.players.size()));
  EXPECT_NEAR(rms, 0.05, 0.005);
}

TEST(GenPlayers, ArchetypeFrequenciesAreUniform) {
  SynthParams params = small_params(4);
  params.n_players = 10000;
  const SynthPlayers players = gen_players(make_synth_spec(params));
  // df = 7, 0.999 quantile.
  EXPECT_LT(oracle::chi_square_uniform(players.labels, params.n_archetypes), 24.3219);
}

TEST(GenPlayers, KMeansRecoversArchetypes) {
  SynthParams params = small_params(5);
  params.n_players = 1000;
  params.within_spread = 0.2;
  params.separation_factor = 5.0;
  const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
  const StatMatrix m = min_max_normalize(build_stat_matrix(corpus.players.players));
  const FitResult r = best_of_trials(m, KMeansConfig{8}, 10, 1);
  EXPECT_GE(oracle::adjusted_rand_index(r.assignment.labels, corpus.players.labels), 0.99);
}

TEST(MakeSynthSpec, SeparationEnforced) {
  SynthParams params = small_params(6);
  params.within_spread = 0.1;
  params.separation_factor = 6.0;
  const SynthSpec spec = make_synth_spec(params);
  for (int a = 0; a < spec.n_archetypes; ++a) {
    for (int b = a + 1; b < spec.n_archetypes; ++b) {
      EXPECT_GE((spec.archetype_means.row(a) - spec.archetype_means.row(b)).norm(), 0.6);
    }
  }
  params.separation_factor = 3.0;
  EXPECT_THROW(make_synth_spec(params), ValidationError);
  params.separation_factor = 4.0;
  params.within_spread = 2.0;  // cannot fit 8 means 8 apart in the unit cube
  EXPECT_THROW(make_synth_spec(params), ValidationError);
}

TEST(GenMatches, ZeroWeightsGiveFairCoin) {
  SynthParams params = small_params(7);
  params.n_matches = 10000;
  const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
  int wins = 0;
  for (const auto& m : corpus.matches.matches) wins += m.winner == Winner::kTeam1;
  const double sigma = std::sqrt(0.25 / 10000.0);
  EXPECT_NEAR(wins / 10000.0, 0.5, 3 * sigma);
  EXPECT_EQ(bayes_rate(corpus.matches.true_probabilities), 0.5);
}

TEST(GenMatches, ExtremeIntercepts) {
  SynthSpec spec = make_synth_spec(small_params(8));
  spec.outcome_intercept = 60.0;
  const SynthCorpus corpus = gen_corpus(spec);
  for (const auto& m : corpus.matches.matches) EXPECT_EQ(m.winner, Winner::kTeam1);
  EXPECT_EQ(bayes_rate(corpus.matches.true_probabilities), 1.0);
}

TEST(GenMatches, ParticipantsDistinctAndLinked) {
  const SynthCorpus corpus = gen_corpus(make_synth_spec(small_params(9)));
  const Corpus linked = link_corpus(corpus.players.players, corpus.matches.matches);
  for (const auto& m : linked.matches) {
    std::set<std::string> ids(m.team1.begin(), m.team1.end());
    ids.insert(m.team2.begin(), m.team2.end());
    EXPECT_EQ(ids.size(), 10u);
    ASSERT_TRUE(m.character_choices.has_value());
    EXPECT_EQ(m.character_choices->size(), 10u);
  }
}

TEST(GenMatches, TooFewPlayers) {
  SynthParams params = small_params(10);
  params.n_players = 9;
  EXPECT_THROW(gen_corpus(make_synth_spec(params)), ValidationError);
}

TEST(BayesRate, RecomputedMatchesGenerating) {
  SynthParams params = small_params(11);
  params.outcome_scale = 0.4;
  const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
  EXPECT_DOUBLE_EQ(bayes_rate(corpus.spec, corpus.matches.matches, corpus.players.players, corpus.players.labels),
                   bayes_rate(corpus.matches.true_probabilities));
}

TEST(BayesRate, MatchesMonteCarloResimulation) {
  SynthParams params = small_params(12);
  params.n_matches = 5000;
  params.outcome_scale = outcome_scale_for_bayes_rate(params.n_archetypes, 0.7, 12);
  const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
  const double exact = bayes_rate(corpus.matches.true_probabilities);
  EXPECT_NEAR(exact, 0.7, 0.02);
  // Accuracy of the Bayes decision against freshly drawn outcomes.
  Rng rng(99);
  long correct = 0;
  long total = 0;
  for (int round = 0; round < 20; ++round) {
    for (const double p : corpus.matches.true_probabilities) {
      const bool team1 = rng.bernoulli(p);
      correct += team1 == (p >= 0.5);
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(correct) / static_cast<double>(total), exact, 0.01);
}

TEST(OutcomeScale, HitsTarget) {
  for (const double target : {0.6, 0.7, 0.8}) {
    const double scale = outcome_scale_for_bayes_rate(8, target, 3);
    SynthParams params = small_params(13);
    params.n_matches = 20000;
    params.outcome_scale = scale;
    const SynthCorpus corpus = gen_corpus(make_synth_spec(params));
    EXPECT_NEAR(bayes_rate(corpus.matches.true_probabilities), target, 0.01) << target;
  }
  EXPECT_THROW(outcome_scale_for_bayes_rate(8, 0.4, 0), ValidationError);
  EXPECT_THROW(outcome_scale_for_bayes_rate(1, 0.7, 0), ValidationError);
}

TEST(PlantedWeights, AntisymmetricLinearRamp) {
  const Eigen::VectorXd w = planted_outcome_weights(5, 2.0);
  ASSERT_EQ(w.size(), 10);
  EXPECT_DOUBLE_EQ(w(0), -2.0);
  EXPECT_DOUBLE_EQ(w(2), 0.0);
  EXPECT_DOUBLE_EQ(w(4), 2.0);
  for (int a = 0; a < 5; ++a) EXPECT_EQ(w(5 + a), -w(a));
}

TEST(ClassTable, IndependentRoundRobin) {
  const ClassTable table = synth_class_table(120);
  ASSERT_EQ(table.size(), 120u);
  EXPECT_EQ(table.at("c000"), 0);
  EXPECT_EQ(table.at("c007"), 1);
  EXPECT_EQ(table.at("c119"), 5);
}

TEST(Determinism, IdenticalSpecGivesIdenticalBytes) {
  SynthParams params = small_params(14);
  params.outcome_scale = 0.3;
  const SynthCorpus a = gen_corpus(make_synth_spec(params));
  const SynthCorpus b = gen_corpus(make_synth_spec(params));
  std::ostringstream pa, pb, ma, mb, ga, gb;
  write_player_stats(pa, a.players.players);
  write_player_stats(pb, b.players.players);
  write_matches(ma, a.matches.matches);
  write_matches(mb, b.matches.matches);
  write_ground_truth(ga, a);
  write_ground_truth(gb, b);
  EXPECT_EQ(pa.str(), pb.str());
  EXPECT_EQ(ma.str(), mb.str());
  EXPECT_EQ(ga.str(), gb.str());

  params.seed = 15;
  std::ostringstream pc;
  write_player_stats(pc, gen_corpus(make_synth_spec(params)).players.players);
  EXPECT_NE(pa.str(), pc.str());
}

TEST(Determinism, GeneratedCorpusPassesIngest) {
  const SynthCorpus corpus = gen_corpus(make_synth_spec(small_params(16)));
  std::stringstream players, matches;
  write_player_stats(players, corpus.players.players);
  write_matches(matches, corpus.matches.matches);
  const Corpus parsed = link_corpus(parse_player_stats(players), parse_matches(matches));
  EXPECT_EQ(parsed.players, corpus.players.players);
  EXPECT_EQ(parsed.matches, corpus.matches.matches);
}

}  // namespace
}  // namespace teamcomp
