#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "hlem/framing.hpp"

namespace hlem {

enum class FeatureType : std::uint8_t { enter, exit, workload, handover, batch, delay };

inline constexpr std::array<FeatureType, 6> kAllFeatureTypes = {
    FeatureType::enter,    FeatureType::exit,  FeatureType::workload,
    FeatureType::handover, FeatureType::batch, FeatureType::delay};

std::string_view to_string(FeatureType type);
std::optional<FeatureType> parse_feature_type(std::string_view name);

/// batch and delay live on window pairs, the other four on single windows.
constexpr bool uses_window_pair(FeatureType type) {
  return type == FeatureType::batch || type == FeatureType::delay;
}

struct PatternResult {
  std::vector<StepId> steps;  // ascending
  double value = 0.0;
};

/// Per-segment minimum window distance for the delay feature.
class DelayThresholds {
 public:
  void set(Segment s, std::int64_t delta);
  /// Throws ContractError for a segment without an entry.
  std::int64_t at(Segment s) const;
  bool contains(Segment s) const { return deltas_.contains(s); }
  const std::map<Segment, std::int64_t>& entries() const { return deltas_; }

 private:
  std::map<Segment, std::int64_t> deltas_;
};

/// Steps matched by `type` at `co` and their count. Workload and handover
/// only consider staffed steps (see StepIndex::staffed). `delays` is read
/// only for the delay type. Throws ContractError when the theta form does
/// not match the type.
PatternResult evaluate_pattern(FeatureType type, const Coordinate& co, const StepIndex& idx,
                               const DelayThresholds& delays = {});

/// Pattern value only; avoids materializing the step set.
double pattern_value(FeatureType type, const Coordinate& co, const StepIndex& idx,
                     const DelayThresholds& delays = {});

/// delta(s) = max(1, q-th percentile of exit window minus entry window over
/// the steps of s). Throws ContractError when s has no steps.
std::int64_t compute_delta(Segment s, const StepIndex& idx, double q);

DelayThresholds compute_deltas(const StepIndex& idx, double q);

}  // namespace hlem
