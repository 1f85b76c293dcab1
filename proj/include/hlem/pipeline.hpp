#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hlem/artifacts.hpp"
#include "hlem/config.hpp"
#include "hlem/synthgen.hpp"

namespace hlem {

EventLog load_log(const RunConfig& config, Diagnostics* diag = nullptr);

struct Detection {
  Framing framing;
  std::vector<Segment> segments;
  StepIndex index;
  DelayThresholds delays;
  ThresholdTable thresholds;
  std::vector<HighLevelEvent> hles;
};

/// The returned index refers to `log`.
Detection run_detection(const EventLog& log, const RunConfig& config, Diagnostics* diag = nullptr);

struct Linkage {
  PropagationGraph graph;
  std::vector<Episode> episodes;
  std::vector<HighLevelPath> paths;
};

Linkage run_linkage(std::span<const HighLevelEvent> hles, const RunConfig& config);
/// Paths from already enumerated episodes; the graph is left empty.
Linkage linkage_from_episodes(std::vector<Episode> episodes, std::span<const HighLevelEvent> hles,
                              const RunConfig& config);

struct Correlation {
  std::string attribute;
  std::vector<std::string> bins;
  std::vector<RankedPath> ranked;
};

/// Attribute defaults to the outcome attribute when the config has none.
Correlation run_correlation(const EventLog& log, const Linkage& linkage, const RunConfig& config);
Correlation run_fixture_correlation(const PartitionFixture& fixture, const RunConfig& config);

// Output files, relative to config.out.
inline constexpr const char* kHlesFile = "hles.jsonl";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kThresholdsFile = "thresholds.csv";
inline constexpr const char* kEpisodesFile = "episodes.jsonl";
inline constexpr const char* kPathsFile = "paths.jsonl";
inline constexpr const char* kReportCsvFile = "paths.csv";
inline constexpr const char* kReportJsonFile = "paths.json";
inline constexpr const char* kReportTextFile = "report.txt";
inline constexpr const char* kManifestFile = "manifest.txt";
inline constexpr const char* kLogFile = "log.csv";
inline constexpr const char* kTruthFile = "truth.json";

/// Config keys that determine each stage's output. A stage's persisted
/// artifacts are reused only when the manifest records the same keys.
std::string detect_fingerprint(const RunConfig& config);
std::string link_fingerprint(const RunConfig& config);

struct GenerateOptions {
  std::filesystem::path spec;  // empty: default spec
  std::uint64_t seed = 42;
};

// Subcommands. Each returns a process exit code: 0 on success, 2 for
// configuration errors, 1 for any other failure. Messages go to `err`.
int cmd_generate(const GenerateOptions& options, const RunConfig& config, std::ostream& err);
int cmd_detect(const RunConfig& config, std::ostream& err);
int cmd_link(const RunConfig& config, std::ostream& err);
/// With a fixture path, the fixture's partitions replace detection and linkage.
int cmd_correlate(const RunConfig& config, const std::optional<std::filesystem::path>& fixture,
                  std::ostream& err);
/// Runs every stage afresh and prints the ranked paths to `out`.
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Maps exceptions from `body` to exit codes as above.
int guarded(std::ostream& err, const std::function<int()>& body);

}  // namespace hlem
