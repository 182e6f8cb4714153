#include "teamcomp/ingest.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "teamcomp/error.hpp"

namespace teamcomp {

namespace {

using nlohmann::json;

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

json parse_line(const std::string& line, std::size_t line_no) {
  json value;
  try {
    value = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed record: ") + e.what());
  }
  if (!value.is_object()) throw ParseError(line_no, "record is not an object");
  return value;
}

std::string require_id(const json& record, const char* key, std::size_t line_no) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw SchemaError(line_no, "?", std::string("missing string field '") + key + "'");
  }
  auto id = it->get<std::string>();
  if (id.empty()) throw RecordValidationError(line_no, id, std::string("empty ") + key);
  return id;
}

std::array<std::string, kTeamSize> read_team(const json& record, const char* key,
                                             std::size_t line_no, const std::string& match_id) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_array()) {
    throw SchemaError(line_no, match_id, std::string("missing array field '") + key + "'");
  }
  if (it->size() != kTeamSize) {
    throw SchemaError(line_no, match_id,
                      std::string(key) + " has " + std::to_string(it->size()) +
                          " players, expected " + std::to_string(kTeamSize));
  }
  std::array<std::string, kTeamSize> team;
  for (std::size_t i = 0; i < kTeamSize; ++i) {
    const auto& entry = (*it)[i];
    if (!entry.is_string() || entry.get<std::string>().empty()) {
      throw SchemaError(line_no, match_id, std::string(key) + " entries must be nonempty strings");
    }
    team[i] = entry.get<std::string>();
  }
  return team;
}

}  // namespace

std::string to_string(Winner winner) { return winner == Winner::kTeam1 ? "team1" : "team2"; }

std::vector<PlayerStatRecord> parse_player_stats(std::istream& input) {
  std::vector<PlayerStatRecord> players;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json record = parse_line(line, line_no);

    PlayerStatRecord player;
    player.player_id = require_id(record, "player_id", line_no);
    const auto stats = record.find("stats");
    if (stats == record.end() || !stats->is_array()) {
      throw SchemaError(line_no, player.player_id, "missing array field 'stats'");
    }
    if (stats->size() != kStatCount) {
      throw SchemaError(line_no, player.player_id,
                        "has " + std::to_string(stats->size()) + " stats, expected " +
                            std::to_string(kStatCount));
    }
    for (std::size_t j = 0; j < kStatCount; ++j) {
      const auto& v = (*stats)[j];
      if (!v.is_number()) {
        throw SchemaError(line_no, player.player_id,
                          "stat '" + std::string(kStatNames[j]) + "' is not a number");
      }
      const double x = v.get<double>();
      if (!std::isfinite(x) || x < 0.0) {
        throw RecordValidationError(line_no, player.player_id,
                                    "stat '" + std::string(kStatNames[j]) +
                                        "' must be finite and nonnegative");
      }
      player.stats[j] = x;
    }
    if (const auto usage = record.find("character_usage"); usage != record.end()) {
      if (!usage->is_object()) {
        throw SchemaError(line_no, player.player_id, "character_usage must be an object");
      }
      std::map<std::string, long long> counts;
      for (const auto& [character, count] : usage->items()) {
        if (!count.is_number_integer() || count.get<long long>() < 0) {
          throw RecordValidationError(line_no, player.player_id,
                                      "character_usage counts must be nonnegative integers");
        }
        counts.emplace(character, count.get<long long>());
      }
      player.character_usage = std::move(counts);
    }
    if (!seen.insert(player.player_id).second) {
      throw RecordValidationError(line_no, player.player_id, "duplicate player_id");
    }
    players.push_back(std::move(player));
  }
  return players;
}

std::vector<MatchRecord> parse_matches(std::istream& input) {
  std::vector<MatchRecord> matches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json record = parse_line(line, line_no);

    MatchRecord match;
    match.match_id = require_id(record, "match_id", line_no);
    match.team1 = read_team(record, "team1", line_no, match.match_id);
    match.team2 = read_team(record, "team2", line_no, match.match_id);

    std::set<std::string> distinct(match.team1.begin(), match.team1.end());
    distinct.insert(match.team2.begin(), match.team2.end());
    if (distinct.size() != 2 * kTeamSize) {
      throw RecordValidationError(line_no, match.match_id,
                                  "a player appears more than once in the match");
    }

    const auto winner = record.find("winner");
    if (winner == record.end() || !winner->is_string()) {
      throw SchemaError(line_no, match.match_id, "missing string field 'winner'");
    }
    const auto& w = winner->get_ref<const std::string&>();
    if (w == "team1") {
      match.winner = Winner::kTeam1;
    } else if (w == "team2") {
      match.winner = Winner::kTeam2;
    } else {
      throw RecordValidationError(line_no, match.match_id,
                                  "winner must be \"team1\" or \"team2\", got \"" + w + "\"");
    }

    if (const auto choices = record.find("character_choices"); choices != record.end()) {
      if (!choices->is_object()) {
        throw SchemaError(line_no, match.match_id, "character_choices must be an object");
      }
      std::map<std::string, std::string> picks;
      for (const auto& [player, character] : choices->items()) {
        if (!character.is_string()) {
          throw SchemaError(line_no, match.match_id, "character ids must be strings");
        }
        if (!distinct.contains(player)) {
          throw RecordValidationError(line_no, match.match_id,
                                      "character choice for non-participant '" + player + "'");
        }
        picks.emplace(player, character.get<std::string>());
      }
      match.character_choices = std::move(picks);
    }
    matches.push_back(std::move(match));
  }
  return matches;
}

Corpus link_corpus(std::vector<PlayerStatRecord> players, std::vector<MatchRecord> matches) {
  std::unordered_set<std::string> known;
  known.reserve(players.size());
  for (const auto& p : players) {
    if (!known.insert(p.player_id).second) {
      throw ValidationError("duplicate player_id '" + p.player_id + "' in corpus");
    }
  }
  std::set<std::string> missing;
  for (const auto& m : matches) {
    for (const auto* team : {&m.team1, &m.team2}) {
      for (const auto& id : *team) {
        if (!known.contains(id)) missing.insert(id);
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) {
      if (!list.empty()) list += ", ";
      list += id;
    }
    throw DanglingReferenceError(std::vector<std::string>(missing.begin(), missing.end()),
                                 "matches reference unknown players: " + list);
  }
  return Corpus{std::move(players), std::move(matches)};
}

void write_player_stats(std::ostream& output, std::span<const PlayerStatRecord> players) {
  for (const auto& p : players) {
    json record = json::object();
    record["player_id"] = p.player_id;
    record["stats"] = p.stats;
    if (p.character_usage) record["character_usage"] = *p.character_usage;
    output << record.dump() << '\n';
  }
}

void write_matches(std::ostream& output, std::span<const MatchRecord> matches) {
  for (const auto& m : matches) {
    json record = json::object();
    record["match_id"] = m.match_id;
    record["team1"] = m.team1;
    record["team2"] = m.team2;
    record["winner"] = to_string(m.winner);
    if (m.character_choices) record["character_choices"] = *m.character_choices;
    output << record.dump() << '\n';
  }
}

}  // namespace teamcomp
