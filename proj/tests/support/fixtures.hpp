#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "teamcomp/ingest.hpp"
#include "teamcomp/rng.hpp"

namespace teamcomp::testing {

inline PlayerStatRecord player(const std::string& id, double fill = 1.0) {
  PlayerStatRecord p;
  p.player_id = id;
  p.stats.fill(fill);
  return p;
}

inline MatchRecord match(const std::string& id, std::array<std::string, kTeamSize> team1,
                         std::array<std::string, kTeamSize> team2, Winner winner = Winner::kTeam1) {
  MatchRecord m;
  m.match_id = id;
  m.team1 = std::move(team1);
  m.team2 = std::move(team2);
  m.winner = winner;
  return m;
}

/// Players "A".."J" and one match A-E versus F-J.
inline Corpus ten_player_corpus() {
  Corpus c;
  for (char ch = 'A'; ch <= 'J'; ++ch) c.players.push_back(player(std::string(1, ch), ch - 'A'));
  c.matches.push_back(match("m1", {"A", "B", "C", "D", "E"}, {"F", "G", "H", "I", "J"}));
  return c;
}

inline Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform();
  }
  return m;
}

inline Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace teamcomp::testing
