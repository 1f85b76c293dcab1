#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hlem/linkage.hpp"

namespace hlem {

// ---------------------------------------------------------------------------
// Case partition

/// Activities visited by a path: the n chained segments folded into n + 1
/// activities. Throws ContractError for an empty or non-chaining path.
std::vector<ActivityId> activity_chain(std::span<const HighLevelActivity> path);

/// `needle` occurs as a contiguous run inside `haystack`.
bool contains_infix(std::span<const ActivityId> haystack, std::span<const ActivityId> needle);

/// Union of the common cases of the path's episodes, ascending.
std::vector<CaseIndex> participating_cases(const HighLevelPath& path,
                                           std::span<const Episode> episodes);

/// Cases outside `participating` whose full trace contains the path's
/// activity chain as a contiguous infix, ascending.
std::vector<CaseIndex> non_participating_cases(std::span<const HighLevelActivity> path,
                                               const EventLog& log,
                                               std::span<const CaseIndex> participating);

// ---------------------------------------------------------------------------
// Case attributes

struct OutcomeAttribute {
  std::string success_activity = "A_Pending";
};
struct ThroughputAttribute {
  std::vector<Duration> cuts;  // strictly increasing
};
struct CategoricalAttribute {
  std::string column;
};
using AttributeSpec = std::variant<OutcomeAttribute, ThroughputAttribute, CategoricalAttribute>;

/// "outcome[:<activity>]", "throughput[:<cut>,<cut>...]" or "column:<name>".
/// Throws ConfigError.
AttributeSpec parse_attribute_spec(std::string_view text);
std::string format_attribute_spec(const AttributeSpec& spec);

inline constexpr std::string_view kSuccessful = "successful";
inline constexpr std::string_view kUnsuccessful = "unsuccessful";

/// Successful when the trace holds `success_activity`, bare or with any
/// "|LIFECYCLE" suffix.
std::string_view derive_outcome(const EventLog& log, CaseIndex c, std::string_view success_activity);
/// Time between the first and last event of the case.
Duration throughput_time(const EventLog& log, CaseIndex c);
/// Bin of `d` under half-open intervals [cut_i, cut_{i+1}).
std::size_t derive_numeric_bin(Duration d, std::span<const Duration> cuts);
/// "<10d", "10d-30d", ">=30d" style labels, one per bin.
std::vector<std::string> numeric_bin_labels(std::span<const Duration> cuts);

/// Precomputed bin per case for one attribute.
class AttributeBinning {
 public:
  /// Throws ConfigError when a categorical column is not in the log.
  static AttributeBinning create(const AttributeSpec& spec, const EventLog& log);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t bin_of(CaseIndex c) const { return bins_[c]; }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> bins_;
};

// ---------------------------------------------------------------------------
// Contingency tables and the χ² test

struct ContingencyTable {
  std::vector<std::string> rows;
  std::vector<std::string> columns{"participating", "non_participating"};
  std::vector<std::vector<std::uint64_t>> counts;  // [row][column]

  std::uint64_t row_total(std::size_t r) const;
  std::uint64_t column_total(std::size_t c) const;
  std::uint64_t total() const;
};

ContingencyTable make_table(std::vector<std::string> rows,
                            std::vector<std::vector<std::uint64_t>> counts);

ContingencyTable build_contingency_table(const AttributeBinning& binning,
                                         std::span<const CaseIndex> participating,
                                         std::span<const CaseIndex> non_participating);

/// Copy without all-zero rows.
ContingencyTable drop_empty_rows(const ContingencyTable& table);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool significant = false;
  /// Some expected frequency is below 5.
  bool low_expected = false;
};

/// Pearson χ² test of independence, no continuity correction. Throws
/// ContractError for tables smaller than 2x2 or with a zero marginal.
ChiSquareResult chi_square(const ContingencyTable& table, double alpha = 0.05);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double regularized_gamma_q(double a, double x);
/// P(X >= x) for X ~ χ²(dof).
double chi_square_survival(double x, int dof);

// ---------------------------------------------------------------------------
// Reporting

struct PathTest {
  HighLevelPath path;
  std::string label;  // display name, filled by the caller
  std::size_t participating = 0;
  std::size_t non_participating = 0;
  ContingencyTable table;  // empty rows dropped
  std::optional<ChiSquareResult> result;
  std::string note;  // why the test is undefined, when it is
};

PathTest test_path(const HighLevelPath& path, std::span<const Episode> episodes,
                   const EventLog& log, const AttributeBinning& binning, double alpha = 0.05);

/// Tests a path against pre-computed participating/non-participating sets.
/// Tests a full table (rows = attribute labels). Empty rows are dropped.
PathTest test_table(const HighLevelPath& path, std::size_t participating,
                    std::size_t non_participating, const ContingencyTable& table,
                    double alpha = 0.05);

PathTest test_partition(const HighLevelPath& path, std::span<const CaseIndex> participating,
                        std::span<const CaseIndex> non_participating,
                        const AttributeBinning& binning, double alpha = 0.05);

struct RankOptions {
  double alpha = 0.05;
  std::size_t min_freq = 1;
  bool benjamini_hochberg = true;
};

struct RankedPath {
  PathTest test;
  std::optional<double> q_value;
  bool significant = false;     // p < alpha
  bool bh_significant = false;  // q <= alpha
};

/// Benjamini-Hochberg adjusted q-values, in input order.
std::vector<double> benjamini_hochberg(std::span<const double> p_values);

/// Drops paths below min_freq and orders testable paths by ascending p
/// (ties: higher frequency, then path), untestable ones last.
std::vector<RankedPath> rank_paths(std::vector<PathTest> tests, const RankOptions& options);

}  // namespace hlem
