#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teamcomp {

inline constexpr std::size_t kStatCount = 21;
inline constexpr std::size_t kTeamSize = 5;

/// Identifies the statistics column layout below. Bump on any change to it.
inline constexpr std::string_view kStatSchemaVersion = "teamcomp.stats.v1";

/// Column order of the per-player statistics vector. This list stands in for
/// the unpublished original feature set; clustering only depends on the
/// ordering being consistent between files.
inline constexpr std::array<std::string_view, kStatCount> kStatNames = {
    "games_played",        "wins",
    "kills",               "deaths",
    "assists",             "damage_dealt",
    "physical_damage",     "magic_damage",
    "damage_taken",        "healing_done",
    "gold_earned",         "minions_killed",
    "neutral_monsters",    "turrets_destroyed",
    "largest_kill_streak", "largest_multi_kill",
    "time_spent_dead",     "crowd_control_dealt",
    "wards_placed",        "double_kills",
    "first_bloods",
};

struct PlayerStatRecord {
  std::string player_id;
  std::array<double, kStatCount> stats{};
  std::optional<std::map<std::string, long long>> character_usage;

  friend bool operator==(const PlayerStatRecord&, const PlayerStatRecord&) = default;
};

enum class Winner { kTeam1, kTeam2 };

struct MatchRecord {
  std::string match_id;
  std::array<std::string, kTeamSize> team1;
  std::array<std::string, kTeamSize> team2;
  Winner winner = Winner::kTeam1;
  std::optional<std::map<std::string, std::string>> character_choices;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct Corpus {
  std::vector<PlayerStatRecord> players;
  std::vector<MatchRecord> matches;
};

// Line-delimited JSON. Players:
//   {"player_id":"p1","stats":[21 numbers in kStatNames order],
//    "character_usage":{"ahri":12}}            (character_usage optional)
// Matches:
//   {"match_id":"m1","team1":[5 ids],"team2":[5 ids],"winner":"team1",
//    "character_choices":{"p1":"ahri",...}}     (character_choices optional)
// Blank lines are skipped; line numbers in errors count them.

std::vector<PlayerStatRecord> parse_player_stats(std::istream& input);
std::vector<MatchRecord> parse_matches(std::istream& input);

/// Checks that every player referenced by a match exists.
Corpus link_corpus(std::vector<PlayerStatRecord> players, std::vector<MatchRecord> matches);

void write_player_stats(std::ostream& output, std::span<const PlayerStatRecord> players);
void write_matches(std::ostream& output, std::span<const MatchRecord> matches);

std::string to_string(Winner winner);

}  // namespace teamcomp
