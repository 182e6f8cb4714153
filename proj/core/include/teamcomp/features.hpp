#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "teamcomp/cluster.hpp"
#include "teamcomp/ingest.hpp"
#include "teamcomp/preprocess.hpp"

namespace teamcomp {

enum class StyleSource { kKMeansModel, kDPMeansModel, kOfficialClasses };

std::string to_string(StyleSource source);
StyleSource style_source_from_string(const std::string& name);

inline constexpr int kOfficialClassCount = 6;

/// Style index per player, in [0, k).
struct StyleMap {
  std::unordered_map<std::string, int> style;
  int k = 0;
  StyleSource source = StyleSource::kKMeansModel;
};

/// Team 1 counts in x[0, k), team 2 counts in x[k, 2k); y = 1 iff team 1 won.
struct CompositionSample {
  std::vector<int> x;
  int y = 0;

  friend bool operator==(const CompositionSample&, const CompositionSample&) = default;
};

/// Normalizes each player's statistics with `ranges` and assigns the nearest
/// centroid of `model` (ties to the lowest index).
StyleMap build_style_map(const ClusterModel& model, std::span<const ColumnRange> ranges,
                         std::span<const PlayerStatRecord> players);

using ClassTable = std::map<std::string, int>;

/// One style map per match from the character each participant picked,
/// using the six official classes. Every pick must appear in `class_table`.
std::vector<StyleMap> official_style_map(std::span<const MatchRecord> matches,
                                         const ClassTable& class_table);

CompositionSample encode_match(const MatchRecord& match, const StyleMap& style, int k);

std::vector<CompositionSample> encode_corpus(const Corpus& corpus, const StyleMap& style, int k);

/// Baseline encoding: match i is encoded with per_match[i].
std::vector<CompositionSample> encode_corpus(const Corpus& corpus, std::span<const StyleMap> per_match);

}  // namespace teamcomp
