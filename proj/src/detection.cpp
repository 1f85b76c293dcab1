#include "hlem/detection.hpp"

#include <algorithm>
#include <set>

#include "hlem/stats.hpp"

namespace hlem {
namespace {

std::vector<FeatureType> normalized(std::span<const FeatureType> types) {
  std::set<FeatureType> unique(types.begin(), types.end());
  return {unique.begin(), unique.end()};
}

// Windows where a single-window pattern can be non-zero.
const std::map<WindowIndex, std::vector<StepId>>& candidate_windows(FeatureType type,
                                                                    const SegmentSteps& seg) {
  return type == FeatureType::enter ? seg.by_entry : seg.by_exit;
}

}  // namespace

double ThresholdOptions::percentile_for(FeatureType type) const {
  const auto it = per_type_percentile.find(type);
  return it == per_type_percentile.end() ? percentile : it->second;
}

void ThresholdTable::set(FeatureType type, Segment s, double threshold) {
  if (threshold < 0.0) throw ContractError("thresholds must be non-negative");
  table_[{type, s}] = threshold;
}

double ThresholdTable::at(FeatureType type, Segment s) const {
  const auto it = table_.find({type, s});
  if (it == table_.end()) throw ContractError("no threshold for type-segment pair");
  return it->second;
}

Population threshold_population(FeatureType type, Segment s, const StepIndex& idx,
                                const DelayThresholds& delays, const ThresholdOptions& options) {
  Population pop;
  const SegmentSteps* seg = idx.find(s);
  if (seg == nullptr || idx.empty()) return pop;

  if (uses_window_pair(type)) {
    for (const auto& [pair, steps] : seg->by_pair) {
      pop.values.push_back(pattern_value(type, {s, pair}, idx, delays));
    }
    if (options.include_empty_pairs) {
      const auto n = idx.num_windows();
      pop.extra_zeros = n * (n + 1) / 2 - seg->by_pair.size();
    }
    return pop;
  }

  for (const auto& [w, steps] : candidate_windows(type, *seg)) {
    const double v = pattern_value(type, {s, w}, idx, delays);
    if (v > 0.0 || options.include_empty_windows) pop.values.push_back(v);
  }
  if (options.include_empty_windows) {
    pop.extra_zeros = idx.num_windows() - pop.values.size();
  }
  return pop;
}

ThresholdTable compute_thresholds(const StepIndex& idx, std::span<const FeatureType> types,
                                  const DelayThresholds& delays,
                                  const ThresholdOptions& options) {
  ThresholdTable table;
  for (FeatureType type : normalized(types)) {
    const double p = options.percentile_for(type);
    for (Segment s : idx.segments()) {
      Population pop = threshold_population(type, s, idx, delays, options);
      if (pop.values.empty() && pop.extra_zeros == 0) {
        table.set(type, s, 0.0);
        continue;
      }
      table.set(type, s, percentile_with_zeros(std::move(pop.values), pop.extra_zeros, p));
    }
  }
  return table;
}

HighLevelEvent make_hle(HleId id, FeatureType type, const Coordinate& co,
                        std::vector<StepId> steps, const StepIndex& idx) {
  if (steps.empty()) throw ContractError("a high-level event needs at least one step");
  const EventLog& log = idx.log();
  HighLevelEvent h;
  h.id = id;
  h.type = type;
  h.coordinate = co;
  h.value = static_cast<double>(steps.size());
  h.cases = CaseSet(log.num_cases());
  const Timestamp t0 = log.time_of(idx.step(steps.front()).first);
  const Timestamp t1 = log.time_of(idx.step(steps.front()).second);
  h.start_spread = {t0, t0};
  h.end_spread = {t1, t1};
  for (StepId sid : steps) {
    const Step& st = idx.step(sid);
    h.cases.insert(log.case_of(st.first));
    const Timestamp a = log.time_of(st.first);
    const Timestamp b = log.time_of(st.second);
    h.start_spread.first = std::min(h.start_spread.first, a);
    h.start_spread.last = std::max(h.start_spread.last, a);
    h.end_spread.first = std::min(h.end_spread.first, b);
    h.end_spread.last = std::max(h.end_spread.last, b);
  }
  h.steps = std::move(steps);
  return h;
}

std::vector<HighLevelEvent> detect_hles(const StepIndex& idx, std::span<const FeatureType> types,
                                        const ThresholdTable& thresholds,
                                        const DelayThresholds& delays) {
  std::vector<HighLevelEvent> out;
  const auto fire = [&](FeatureType type, const Coordinate& co, double threshold) {
    PatternResult r = evaluate_pattern(type, co, idx, delays);
    if (r.value >= threshold && r.value >= 1.0) {
      out.push_back(make_hle(static_cast<HleId>(out.size()), type, co, std::move(r.steps), idx));
    }
  };
  for (FeatureType type : normalized(types)) {
    for (Segment s : idx.segments()) {
      const SegmentSteps* seg = idx.find(s);
      const double threshold = thresholds.at(type, s);
      if (uses_window_pair(type)) {
        for (const auto& [pair, steps] : seg->by_pair) fire(type, {s, pair}, threshold);
      } else {
        for (const auto& [w, steps] : candidate_windows(type, *seg)) fire(type, {s, w}, threshold);
      }
    }
  }
  return out;
}

}  // namespace hlem
