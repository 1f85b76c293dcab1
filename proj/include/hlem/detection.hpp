#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hlem/case_set.hpp"
#include "hlem/patterns.hpp"

namespace hlem {

struct ThresholdOptions {
  double percentile = 90.0;
  std::map<FeatureType, double> per_type_percentile;
  /// Single-window populations include windows where the value is 0.
  bool include_empty_windows = true;
  /// Pair populations cover all of W² instead of the occupied pairs only.
  bool include_empty_pairs = false;

  double percentile_for(FeatureType type) const;
};

class ThresholdTable {
 public:
  void set(FeatureType type, Segment s, double threshold);
  /// Throws ContractError when the pair is absent.
  double at(FeatureType type, Segment s) const;
  bool contains(FeatureType type, Segment s) const { return table_.contains({type, s}); }
  const std::map<std::pair<FeatureType, Segment>, double>& entries() const { return table_; }

 private:
  std::map<std::pair<FeatureType, Segment>, double> table_;
};

/// Value populations per (type, segment), exposed for diagnostics and tests.
/// For pair types with include_empty_pairs, `extra_zeros` counts the
/// unoccupied pairs of W² that are not materialized in `values`.
struct Population {
  std::vector<double> values;
  std::size_t extra_zeros = 0;
};

Population threshold_population(FeatureType type, Segment s, const StepIndex& idx,
                                const DelayThresholds& delays, const ThresholdOptions& options);

ThresholdTable compute_thresholds(const StepIndex& idx, std::span<const FeatureType> types,
                                  const DelayThresholds& delays,
                                  const ThresholdOptions& options = {});

using HleId = std::uint32_t;

struct TimeSpread {
  Timestamp first;
  Timestamp last;
  friend bool operator==(const TimeSpread&, const TimeSpread&) = default;
};

struct HighLevelActivity {
  FeatureType type;
  Segment segment;
  friend auto operator<=>(const HighLevelActivity&, const HighLevelActivity&) = default;
};

struct HighLevelEvent {
  HleId id = 0;
  FeatureType type = FeatureType::enter;
  Coordinate coordinate{};
  std::vector<StepId> steps;
  double value = 0.0;
  CaseSet cases;
  TimeSpread start_spread{};
  TimeSpread end_spread{};

  HighLevelActivity activity() const { return {type, coordinate.segment}; }
};

/// Fills cases and spreads from `steps`; steps must be non-empty.
HighLevelEvent make_hle(HleId id, FeatureType type, const Coordinate& co,
                        std::vector<StepId> steps, const StepIndex& idx);

/// One event per (type, coordinate) with value >= max(threshold, 1). Ids are
/// assigned in (type, segment, theta) order starting at 0.
std::vector<HighLevelEvent> detect_hles(const StepIndex& idx, std::span<const FeatureType> types,
                                        const ThresholdTable& thresholds,
                                        const DelayThresholds& delays);

}  // namespace hlem
