#include "hlem/patterns.hpp"

#include <algorithm>
#include <cmath>

#include "hlem/stats.hpp"

namespace hlem {
namespace {

constexpr std::array<std::string_view, 6> kNames = {"enter", "exit", "workload",
                                                    "handover", "batch", "delay"};

const std::vector<StepId>* lookup(const std::map<WindowIndex, std::vector<StepId>>& m,
                                  WindowIndex w) {
  const auto it = m.find(w);
  return it == m.end() ? nullptr : &it->second;
}

void check_shape(FeatureType type, const Coordinate& co) {
  const bool pair = std::holds_alternative<WindowPair>(co.theta);
  if (pair != uses_window_pair(type)) {
    throw ContractError(std::string("feature type '") + std::string(to_string(type)) +
                        (pair ? "' expects a single-window coordinate"
                              : "' expects a window-pair coordinate"));
  }
  if (pair) {
    const auto& wp = std::get<WindowPair>(co.theta);
    if (wp.first > wp.second) throw ContractError("window pair must satisfy w <= w'");
  }
}

template <class Sink>
void match_steps(FeatureType type, const Coordinate& co, const StepIndex& idx,
                 const DelayThresholds& delays, Sink&& sink) {
  check_shape(type, co);
  const SegmentSteps* seg = idx.find(co.segment);
  if (seg == nullptr) return;
  const std::vector<StepId>* hits = nullptr;
  switch (type) {
    case FeatureType::enter:
      hits = lookup(seg->by_entry, std::get<WindowIndex>(co.theta));
      break;
    case FeatureType::exit:
    case FeatureType::workload:
    case FeatureType::handover:
      hits = lookup(seg->by_exit, std::get<WindowIndex>(co.theta));
      break;
    case FeatureType::delay: {
      const auto& wp = std::get<WindowPair>(co.theta);
      if (wp.second - wp.first < delays.at(co.segment)) return;
      [[fallthrough]];
    }
    case FeatureType::batch: {
      const auto it = seg->by_pair.find(std::get<WindowPair>(co.theta));
      if (it != seg->by_pair.end()) hits = &it->second;
      break;
    }
  }
  if (hits == nullptr) return;
  for (StepId id : *hits) {
    if (type == FeatureType::workload && !(idx.staffed(id) && idx.same_resource(id))) continue;
    if (type == FeatureType::handover && !(idx.staffed(id) && !idx.same_resource(id))) continue;
    sink(id);
  }
}

}  // namespace

std::string_view to_string(FeatureType type) { return kNames[static_cast<std::size_t>(type)]; }

std::optional<FeatureType> parse_feature_type(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<FeatureType>(i);
  }
  return std::nullopt;
}

void DelayThresholds::set(Segment s, std::int64_t delta) {
  if (delta < 0) throw ContractError("window distance must be non-negative");
  deltas_[s] = delta;
}

std::int64_t DelayThresholds::at(Segment s) const {
  const auto it = deltas_.find(s);
  if (it == deltas_.end()) throw ContractError("no delay threshold for segment");
  return it->second;
}

PatternResult evaluate_pattern(FeatureType type, const Coordinate& co, const StepIndex& idx,
                               const DelayThresholds& delays) {
  PatternResult out;
  match_steps(type, co, idx, delays, [&](StepId id) { out.steps.push_back(id); });
  std::sort(out.steps.begin(), out.steps.end());
  out.value = static_cast<double>(out.steps.size());
  return out;
}

double pattern_value(FeatureType type, const Coordinate& co, const StepIndex& idx,
                     const DelayThresholds& delays) {
  std::size_t n = 0;
  match_steps(type, co, idx, delays, [&](StepId) { ++n; });
  return static_cast<double>(n);
}

std::int64_t compute_delta(Segment s, const StepIndex& idx, double q) {
  const auto steps = idx.steps_of(s);
  if (steps.empty()) throw ContractError("compute_delta: segment has no steps");
  std::vector<double> distances;
  distances.reserve(steps.size());
  for (StepId id : steps) {
    distances.push_back(static_cast<double>(idx.exit_window(id) - idx.entry_window(id)));
  }
  const auto delta = static_cast<std::int64_t>(std::ceil(percentile(std::move(distances), q)));
  return std::max<std::int64_t>(1, delta);
}

DelayThresholds compute_deltas(const StepIndex& idx, double q) {
  DelayThresholds out;
  for (Segment s : idx.segments()) {
    if (!idx.steps_of(s).empty()) out.set(s, compute_delta(s, idx, q));
  }
  return out;
}

}  // namespace hlem
