#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hlem/detection.hpp"

namespace hlem {

bool case_overlap(const HighLevelEvent& h, const HighLevelEvent& next, double lambda);
/// The segment of `h` ends where the segment of `next` begins.
bool location_overlap(const HighLevelEvent& h, const HighLevelEvent& next);
/// end(h) ⊆ start(next) or start(next) ⊆ end(h), closed intervals.
bool time_overlap(const HighLevelEvent& h, const HighLevelEvent& next);
bool propagates(const HighLevelEvent& h, const HighLevelEvent& next, double lambda);

/// Adjacency over positions in the HLE vector it was built from.
struct PropagationGraph {
  std::vector<std::vector<std::size_t>> successors;  // ascending

  std::size_t num_nodes() const { return successors.size(); }
  std::size_t num_edges() const;
};

PropagationGraph build_propagation_graph(std::span<const HighLevelEvent> hles, double lambda);

enum class EpisodeCondition {
  /// |⋂ C(h)| / |⋃ C(h)| >= λ over the whole episode.
  jaccard,
  /// |⋂ C(h)| >= ceil(λ · min_h |C(h)|).
  min_fraction,
};

struct EpisodeOptions {
  double lambda = 0.5;
  std::size_t max_len = 4;
  EpisodeCondition condition = EpisodeCondition::jaccard;
};

struct Episode {
  std::vector<std::size_t> hles;  // positions in the HLE vector
  std::vector<CaseIndex> common_cases;
};

/// Does the episode-level case condition hold for the given members?
bool episode_condition_holds(std::span<const HighLevelEvent> hles,
                             std::span<const std::size_t> members, const EpisodeOptions& options);

/// All simple chains of 1..max_len nodes along graph edges whose episode
/// condition holds, in lexicographic order of member positions.
std::vector<Episode> enumerate_episodes(const PropagationGraph& graph,
                                        std::span<const HighLevelEvent> hles,
                                        const EpisodeOptions& options);

struct HighLevelPath {
  std::vector<HighLevelActivity> steps;
  std::size_t frequency = 0;
  std::vector<std::size_t> episodes;  // positions in the episode vector
};

/// Groups episodes by their (type, segment) projection, keeping paths with
/// frequency >= min_path_freq. Sorted by descending frequency, then by steps.
std::vector<HighLevelPath> project_paths(std::span<const Episode> episodes,
                                         std::span<const HighLevelEvent> hles,
                                         std::size_t min_path_freq = 1);

}  // namespace hlem
