#include "hlem/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hlem {
namespace {

bool jaccard_at_least(const kernels::OverlapCounts& c, double lambda) {
  if (c.union_count == 0) return lambda <= 0.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_count) >= lambda;
}

// ceil(λ·m), tolerant of representation error in λ (0.1 * 30 must be 3).
std::uint64_t required_common(double lambda, std::size_t m) {
  return static_cast<std::uint64_t>(std::ceil(lambda * static_cast<double>(m) - 1e-9));
}

bool contained(const TimeSpread& inner, const TimeSpread& outer) {
  return outer.first <= inner.first && inner.last <= outer.last;
}

class EpisodeSearch {
 public:
  EpisodeSearch(const PropagationGraph& graph, std::span<const HighLevelEvent> hles,
                const EpisodeOptions& options, std::vector<Episode>& out)
      : graph_(graph), hles_(hles), options_(options), out_(out) {
    inter_.reserve(options.max_len);
    uni_.reserve(options.max_len);
    min_size_.reserve(options.max_len);
  }

  void run_from(std::size_t start) {
    path_.assign(1, start);
    inter_.assign(1, hles_[start].cases);
    uni_.assign(1, hles_[start].cases);
    min_size_.assign(1, hles_[start].cases.count());
    emit();
    extend();
  }

 private:
  void emit() { out_.push_back({path_, inter_.back().ids()}); }

  void extend() {
    if (path_.size() >= options_.max_len) return;
    for (std::size_t next : graph_.successors[path_.back()]) {
      if (std::find(path_.begin(), path_.end(), next) != path_.end()) continue;
      const CaseSet& cases = hles_[next].cases;
      CaseSet inter = inter_.back();
      inter &= cases;
      const std::size_t common = inter.count();
      bool holds = false;
      bool viable = true;
      std::size_t min_size = min_size_.back();
      CaseSet uni;
      if (options_.condition == EpisodeCondition::jaccard) {
        uni = uni_.back();
        uni |= cases;
        holds = jaccard_at_least({common, uni.count()}, options_.lambda);
        // Intersections only shrink and unions only grow along a chain.
        viable = holds;
      } else {
        min_size = std::min(min_size, cases.count());
        holds = common >= required_common(options_.lambda, min_size);
        viable = holds || common > 0 || options_.lambda <= 0.0;
      }
      if (!viable) continue;
      path_.push_back(next);
      inter_.push_back(std::move(inter));
      uni_.push_back(std::move(uni));
      min_size_.push_back(min_size);
      if (holds) emit();
      extend();
      path_.pop_back();
      inter_.pop_back();
      uni_.pop_back();
      min_size_.pop_back();
    }
  }

  const PropagationGraph& graph_;
  std::span<const HighLevelEvent> hles_;
  const EpisodeOptions& options_;
  std::vector<Episode>& out_;
  std::vector<std::size_t> path_;
  std::vector<CaseSet> inter_;
  std::vector<CaseSet> uni_;
  std::vector<std::size_t> min_size_;
};

}  // namespace

bool case_overlap(const HighLevelEvent& h, const HighLevelEvent& next, double lambda) {
  return jaccard_at_least(overlap(h.cases, next.cases), lambda);
}

bool location_overlap(const HighLevelEvent& h, const HighLevelEvent& next) {
  return h.coordinate.segment.to == next.coordinate.segment.from;
}

bool time_overlap(const HighLevelEvent& h, const HighLevelEvent& next) {
  return contained(h.end_spread, next.start_spread) || contained(next.start_spread, h.end_spread);
}

bool propagates(const HighLevelEvent& h, const HighLevelEvent& next, double lambda) {
  return location_overlap(h, next) && time_overlap(h, next) && case_overlap(h, next, lambda);
}

std::size_t PropagationGraph::num_edges() const {
  return std::accumulate(successors.begin(), successors.end(), std::size_t{0},
                         [](std::size_t n, const auto& s) { return n + s.size(); });
}

PropagationGraph build_propagation_graph(std::span<const HighLevelEvent> hles, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("lambda must lie in [0, 1]");
  std::map<ActivityId, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < hles.size(); ++i) {
    by_source[hles[i].coordinate.segment.from].push_back(i);
  }
  PropagationGraph graph;
  graph.successors.resize(hles.size());
  for (std::size_t i = 0; i < hles.size(); ++i) {
    const auto bucket = by_source.find(hles[i].coordinate.segment.to);
    if (bucket == by_source.end()) continue;
    for (std::size_t j : bucket->second) {
      if (time_overlap(hles[i], hles[j]) && case_overlap(hles[i], hles[j], lambda)) {
        graph.successors[i].push_back(j);
      }
    }
  }
  return graph;
}

bool episode_condition_holds(std::span<const HighLevelEvent> hles,
                             std::span<const std::size_t> members, const EpisodeOptions& options) {
  if (members.empty()) return false;
  CaseSet inter = hles[members.front()].cases;
  CaseSet uni = inter;
  std::size_t min_size = inter.count();
  for (std::size_t k = 1; k < members.size(); ++k) {
    const CaseSet& c = hles[members[k]].cases;
    inter &= c;
    uni |= c;
    min_size = std::min(min_size, c.count());
  }
  if (options.condition == EpisodeCondition::jaccard) {
    return jaccard_at_least({inter.count(), uni.count()}, options.lambda);
  }
  return inter.count() >= required_common(options.lambda, min_size);
}

std::vector<Episode> enumerate_episodes(const PropagationGraph& graph,
                                        std::span<const HighLevelEvent> hles,
                                        const EpisodeOptions& options) {
  if (options.max_len < 1) throw ContractError("max_len must be at least 1");
  if (graph.num_nodes() != hles.size()) throw ContractError("graph does not match HLE set");
  std::vector<Episode> out;
  EpisodeSearch search(graph, hles, options, out);
  for (std::size_t start = 0; start < hles.size(); ++start) search.run_from(start);
  return out;
}

std::vector<HighLevelPath> project_paths(std::span<const Episode> episodes,
                                         std::span<const HighLevelEvent> hles,
                                         std::size_t min_path_freq) {
  std::map<std::vector<HighLevelActivity>, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    std::vector<HighLevelActivity> key;
    key.reserve(episodes[e].hles.size());
    for (std::size_t h : episodes[e].hles) key.push_back(hles[h].activity());
    groups[std::move(key)].push_back(e);
  }
  std::vector<HighLevelPath> out;
  for (auto& [steps, members] : groups) {
    if (members.size() < min_path_freq) continue;
    out.push_back({steps, members.size(), std::move(members)});
  }
  std::stable_sort(out.begin(), out.end(), [](const HighLevelPath& a, const HighLevelPath& b) {
    return a.frequency > b.frequency;
  });
  return out;
}

}  // namespace hlem
