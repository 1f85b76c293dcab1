#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlem/correlation.hpp"
#include "hlem/event_log.hpp"

namespace hlem {

enum class InputFormat { csv, xes, jsonl };

/// Every knob of a pipeline run. Defaults: one-day windows, p = 90,
/// q = 70, λ = 0.5, all six feature types, every segment retained.
struct RunConfig {
  std::string input;
  InputFormat format = InputFormat::csv;
  CsvSchema csv;
  LoadOptions load;

  Duration window = std::chrono::days{1};
  std::optional<Timestamp> origin;

  std::vector<FeatureType> types{kAllFeatureTypes.begin(), kAllFeatureTypes.end()};
  std::size_t top_k = 0;  // 0 keeps every segment
  std::vector<std::string> resource_blacklist;
  double percentile = 90.0;
  std::map<FeatureType, double> per_type_percentile;
  double delay_percentile = 70.0;
  bool include_empty_windows = true;
  bool include_empty_pairs = false;

  double lambda = 0.5;
  std::size_t max_len = 4;
  std::size_t min_path_freq = 1;
  EpisodeCondition episode_condition = EpisodeCondition::jaccard;

  std::optional<AttributeSpec> attribute;
  double alpha = 0.05;
  bool benjamini_hochberg = true;

  std::string out = "out";

  friend bool operator==(const RunConfig&, const RunConfig&);
};

/// Sets one key; throws ConfigError for unknown keys or invalid values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// "key = value" lines; '#' starts a comment. Later keys override earlier.
void read_config(std::istream& in, RunConfig& config);
/// Every key, in a form read_config restores exactly.
std::string serialize_config(const RunConfig& config);

/// Range checks across keys; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace hlem
