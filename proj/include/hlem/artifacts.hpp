#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hlem/correlation.hpp"

namespace hlem {

/// "batch(b, c)"
std::string activity_label(const HighLevelActivity& a, const EventLog& log);
/// "enter(a, b) -> batch(b, c)"
std::string path_label(std::span<const HighLevelActivity> steps, const EventLog& log);
/// "3" or "3-5"
std::string theta_label(const Theta& theta);

// HLE dump: one JSON object per line with
// {id, type, segment: [from, to], theta: w | [w, w'], value, cases: [case ids],
//  start_spread: [first, last], end_spread: [first, last]}.
// The step list is not persisted; reloaded events carry an empty `steps`.
void write_hles(std::ostream& out, std::span<const HighLevelEvent> hles, const EventLog& log);
/// Throws ParseError for malformed lines or names unknown to `log`.
std::vector<HighLevelEvent> read_hles(std::istream& in, const EventLog& log);

/// Table-2 style counts: one row per type, then one row per (type, segment).
void write_summary_csv(std::ostream& out, std::span<const HighLevelEvent> hles,
                       std::span<const FeatureType> types, const EventLog& log);

void write_thresholds_csv(std::ostream& out, const ThresholdTable& thresholds,
                          const DelayThresholds& delays, const EventLog& log);

// Episode dump: {id, hles: [hle ids], path: label, cases: [case ids]}.
void write_episodes(std::ostream& out, std::span<const Episode> episodes,
                    std::span<const HighLevelEvent> hles, const EventLog& log);
std::vector<Episode> read_episodes(std::istream& in, std::span<const HighLevelEvent> hles,
                                   const EventLog& log);

// Path summary: {path, steps: [{type, segment}], frequency, episodes: [episode ids]}.
void write_paths(std::ostream& out, std::span<const HighLevelPath> paths, const EventLog& log);

/// Ranked report. Columns: rank, path, frequency, participating,
/// non_participating, one "<P|N>:<label>" column per bin, chi2, dof, p, q,
/// significant, note.
void write_report_csv(std::ostream& out, std::span<const RankedPath> ranked,
                      std::span<const std::string> bin_labels);
void write_report_json(std::ostream& out, std::span<const RankedPath> ranked,
                       std::span<const std::string> bin_labels, const std::string& attribute);

/// Pre-partitioned input for the correlation stage:
/// {"attribute": name, "cases": {case: label, ...},
///  "paths": [{"path": label, "frequency": n,
///             "participating": [case ids], "non_participating": [case ids]}]}
struct PartitionFixture {
  std::string attribute;
  std::map<std::string, std::string> labels;
  struct Path {
    std::string label;
    std::size_t frequency = 0;
    std::vector<std::string> participating;
    std::vector<std::string> non_participating;
  };
  std::vector<Path> paths;
};

PartitionFixture read_partition_fixture(std::istream& in);
void write_partition_fixture(std::ostream& out, const PartitionFixture& fixture);

/// Sorted distinct labels of the fixture cases.
std::vector<std::string> fixture_bin_labels(const PartitionFixture& fixture);
/// Tests every fixture path against the fixture labels. The tests carry an
/// empty `path.steps`; throws ConfigError for cases without a label.
std::vector<PathTest> test_fixture(const PartitionFixture& fixture, double alpha = 0.05);

}  // namespace hlem
