#include "teamcomp/features.hpp"

#include <set>

#include "teamcomp/error.hpp"

namespace teamcomp {

std::string to_string(StyleSource source) {
  switch (source) {
    case StyleSource::kKMeansModel:
      return "kmeans";
    case StyleSource::kDPMeansModel:
      return "dpmeans";
    case StyleSource::kOfficialClasses:
      return "official";
  }
  return "unknown";
}

StyleSource style_source_from_string(const std::string& name) {
  if (name == "kmeans") return StyleSource::kKMeansModel;
  if (name == "dpmeans") return StyleSource::kDPMeansModel;
  if (name == "official") return StyleSource::kOfficialClasses;
  throw ValidationError("unknown style source '" + name + "'");
}

StyleMap build_style_map(const ClusterModel& model, std::span<const ColumnRange> ranges,
                         std::span<const PlayerStatRecord> players) {
  if (model.dim() != static_cast<Eigen::Index>(ranges.size())) {
    throw DimensionError("build_style_map: model has " + std::to_string(model.dim()) +
                         " dimensions but " + std::to_string(ranges.size()) + " ranges were given");
  }
  StyleMap map;
  map.k = static_cast<int>(model.k());
  map.source = model.algorithm == ClusterAlgorithm::kKMeans ? StyleSource::kKMeansModel
                                                            : StyleSource::kDPMeansModel;
  if (players.empty()) return map;
  const StatMatrix normalized = apply_normalization(build_stat_matrix(players), ranges);
  const Assignment assignment = assign_nearest(normalized, model.centroids);
  map.style.reserve(players.size());
  for (std::size_t i = 0; i < players.size(); ++i) {
    map.style.emplace(players[i].player_id, assignment.labels[i]);
  }
  return map;
}

std::vector<StyleMap> official_style_map(std::span<const MatchRecord> matches,
                                         const ClassTable& class_table) {
  for (const auto& [character, cls] : class_table) {
    if (cls < 0 || cls >= kOfficialClassCount) {
      throw ValidationError("class table maps '" + character + "' to class " + std::to_string(cls) +
                            ", expected 0.." + std::to_string(kOfficialClassCount - 1));
    }
  }
  std::vector<StyleMap> maps;
  maps.reserve(matches.size());
  std::set<std::string> unknown;
  for (const auto& match : matches) {
    if (!match.character_choices) {
      throw ValidationError("match '" + match.match_id + "' has no character choices");
    }
    StyleMap map;
    map.k = kOfficialClassCount;
    map.source = StyleSource::kOfficialClasses;
    for (const auto& [player, character] : *match.character_choices) {
      const auto it = class_table.find(character);
      if (it == class_table.end()) {
        unknown.insert(character);
        continue;
      }
      map.style.emplace(player, it->second);
    }
    maps.push_back(std::move(map));
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
    throw DanglingReferenceError(std::vector<std::string>(unknown.begin(), unknown.end()),
                                 "characters missing from the class table: " + list);
  }
  return maps;
}

CompositionSample encode_match(const MatchRecord& match, const StyleMap& style, int k) {
  if (k < 1 || k != style.k) {
    throw ValidationError("encode_match: k = " + std::to_string(k) + " does not match style map k = " +
                          std::to_string(style.k));
  }
  CompositionSample sample;
  sample.x.assign(static_cast<std::size_t>(2 * k), 0);
  const auto count = [&](const std::string& player, int offset) {
    const auto it = style.style.find(player);
    if (it == style.style.end()) {
      throw ValidationError("match '" + match.match_id + "': player '" + player + "' has no style");
    }
    if (it->second < 0 || it->second >= k) {
      throw ValidationError("match '" + match.match_id + "': style out of range for '" + player + "'");
    }
    ++sample.x[static_cast<std::size_t>(offset + it->second)];
  };
  for (const auto& p : match.team1) count(p, 0);
  for (const auto& p : match.team2) count(p, k);
  sample.y = match.winner == Winner::kTeam1 ? 1 : 0;
  return sample;
}

std::vector<CompositionSample> encode_corpus(const Corpus& corpus, const StyleMap& style, int k) {
  std::vector<CompositionSample> samples;
  samples.reserve(corpus.matches.size());
  for (const auto& match : corpus.matches) samples.push_back(encode_match(match, style, k));
  return samples;
}

std::vector<CompositionSample> encode_corpus(const Corpus& corpus, std::span<const StyleMap> per_match) {
  if (per_match.size() != corpus.matches.size()) {
    throw DimensionError("encode_corpus: one style map per match is required");
  }
  std::vector<CompositionSample> samples;
  samples.reserve(corpus.matches.size());
  for (std::size_t i = 0; i < per_match.size(); ++i) {
    samples.push_back(encode_match(corpus.matches[i], per_match[i], per_match[i].k));
  }
  return samples;
}

}  // namespace teamcomp
