#include "hlem/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace hlem {

// ---------------------------------------------------------------------------
// Case partition

std::vector<ActivityId> activity_chain(std::span<const HighLevelActivity> path) {
  if (path.empty()) throw ContractError("empty high-level path");
  std::vector<ActivityId> chain{path.front().segment.from, path.front().segment.to};
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i].segment.from != chain.back()) {
      throw ContractError("high-level path segments do not chain");
    }
    chain.push_back(path[i].segment.to);
  }
  return chain;
}

bool contains_infix(std::span<const ActivityId> haystack, std::span<const ActivityId> needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

std::vector<CaseIndex> participating_cases(const HighLevelPath& path,
                                           std::span<const Episode> episodes) {
  std::set<CaseIndex> out;
  for (std::size_t e : path.episodes) {
    out.insert(episodes[e].common_cases.begin(), episodes[e].common_cases.end());
  }
  return {out.begin(), out.end()};
}

std::vector<CaseIndex> non_participating_cases(std::span<const HighLevelActivity> path,
                                               const EventLog& log,
                                               std::span<const CaseIndex> participating) {
  const std::vector<ActivityId> chain = activity_chain(path);
  const std::set<CaseIndex> excluded(participating.begin(), participating.end());
  std::vector<CaseIndex> out;
  for (CaseIndex c = 0; c < log.num_cases(); ++c) {
    if (excluded.contains(c)) continue;
    if (contains_infix(log.activity_sequence(c), chain)) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Case attributes

AttributeSpec parse_attribute_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "outcome") {
    OutcomeAttribute a;
    if (!arg.empty()) a.success_activity = std::string(arg);
    return a;
  }
  if (kind == "throughput") {
    ThroughputAttribute a;
    std::string_view rest = arg.empty() ? std::string_view{"10d,30d"} : arg;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto d = parse_duration(item);
      if (!d) throw ConfigError("invalid throughput cut '" + std::string(item) + "'");
      if (!a.cuts.empty() && *d <= a.cuts.back()) {
        throw ConfigError("throughput cuts must be strictly increasing");
      }
      a.cuts.push_back(*d);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return a;
  }
  if (kind == "column" && !arg.empty()) return CategoricalAttribute{std::string(arg)};
  throw ConfigError("unknown attribute spec '" + std::string(text) +
                    "' (expected outcome:<activity>, throughput:<cuts> or column:<name>)");
}

std::string format_attribute_spec(const AttributeSpec& spec) {
  if (const auto* o = std::get_if<OutcomeAttribute>(&spec)) return "outcome:" + o->success_activity;
  if (const auto* t = std::get_if<ThroughputAttribute>(&spec)) {
    std::string out = "throughput:";
    for (std::size_t i = 0; i < t->cuts.size(); ++i) {
      if (i > 0) out += ',';
      out += format_duration(t->cuts[i]);
    }
    return out;
  }
  return "column:" + std::get<CategoricalAttribute>(spec).column;
}

std::string_view derive_outcome(const EventLog& log, CaseIndex c, std::string_view success_activity) {
  const auto [first, last] = log.trace_range(c);
  for (EventRef e = first; e < last; ++e) {
    const std::string_view a = log.event(e).activity;
    if (a == success_activity ||
        (a.size() > success_activity.size() && a.starts_with(success_activity) &&
         a[success_activity.size()] == '|')) {
      return kSuccessful;
    }
  }
  return kUnsuccessful;
}

Duration throughput_time(const EventLog& log, CaseIndex c) {
  const auto [first, last] = log.trace_range(c);
  return log.time_of(last - 1) - log.time_of(first);
}

std::size_t derive_numeric_bin(Duration d, std::span<const Duration> cuts) {
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), d) - cuts.begin());
}

std::vector<std::string> numeric_bin_labels(std::span<const Duration> cuts) {
  std::vector<std::string> out;
  if (cuts.empty()) return {"all"};
  out.push_back("<" + format_duration(cuts.front()));
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    out.push_back(format_duration(cuts[i - 1]) + "-" + format_duration(cuts[i]));
  }
  out.push_back(">=" + format_duration(cuts.back()));
  return out;
}

AttributeBinning AttributeBinning::create(const AttributeSpec& spec, const EventLog& log) {
  AttributeBinning b;
  b.name_ = format_attribute_spec(spec);
  b.bins_.resize(log.num_cases());
  if (const auto* o = std::get_if<OutcomeAttribute>(&spec)) {
    b.labels_ = {std::string(kSuccessful), std::string(kUnsuccessful)};
    for (CaseIndex c = 0; c < log.num_cases(); ++c) {
      b.bins_[c] = derive_outcome(log, c, o->success_activity) == kSuccessful ? 0 : 1;
    }
    return b;
  }
  if (const auto* t = std::get_if<ThroughputAttribute>(&spec)) {
    b.labels_ = numeric_bin_labels(t->cuts);
    for (CaseIndex c = 0; c < log.num_cases(); ++c) {
      b.bins_[c] = derive_numeric_bin(throughput_time(log, c), t->cuts);
    }
    return b;
  }
  const auto& column = std::get<CategoricalAttribute>(spec).column;
  const int slot = log.attribute_index(column);
  if (slot < 0) throw ConfigError("attribute column '" + column + "' not found in the log");
  std::vector<std::string> values(log.num_cases(), "(missing)");
  for (CaseIndex c = 0; c < log.num_cases(); ++c) {
    const auto [first, last] = log.trace_range(c);
    for (EventRef e = first; e < last; ++e) {
      const auto& v = log.event(e).attributes[static_cast<std::size_t>(slot)];
      if (!v.empty()) {
        values[c] = v;
        break;
      }
    }
  }
  b.labels_ = values;
  std::sort(b.labels_.begin(), b.labels_.end());
  b.labels_.erase(std::unique(b.labels_.begin(), b.labels_.end()), b.labels_.end());
  for (CaseIndex c = 0; c < log.num_cases(); ++c) {
    b.bins_[c] = static_cast<std::size_t>(
        std::lower_bound(b.labels_.begin(), b.labels_.end(), values[c]) - b.labels_.begin());
  }
  return b;
}

// ---------------------------------------------------------------------------
// Contingency tables and the χ² test

std::uint64_t ContingencyTable::row_total(std::size_t r) const {
  std::uint64_t n = 0;
  for (auto v : counts[r]) n += v;
  return n;
}

std::uint64_t ContingencyTable::column_total(std::size_t c) const {
  std::uint64_t n = 0;
  for (const auto& row : counts) n += row[c];
  return n;
}

std::uint64_t ContingencyTable::total() const {
  std::uint64_t n = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) n += row_total(r);
  return n;
}

ContingencyTable make_table(std::vector<std::string> rows,
                            std::vector<std::vector<std::uint64_t>> counts) {
  if (rows.size() != counts.size()) throw ContractError("row labels do not match counts");
  ContingencyTable t;
  if (!counts.empty()) {
    const std::size_t cols = counts.front().size();
    for (const auto& row : counts) {
      if (row.size() != cols) throw ContractError("ragged contingency table");
    }
    if (cols != 2) {
      t.columns.clear();
      for (std::size_t c = 0; c < cols; ++c) t.columns.push_back("col" + std::to_string(c));
    }
  }
  t.rows = std::move(rows);
  t.counts = std::move(counts);
  return t;
}

ContingencyTable build_contingency_table(const AttributeBinning& binning,
                                         std::span<const CaseIndex> participating,
                                         std::span<const CaseIndex> non_participating) {
  ContingencyTable t;
  t.rows = binning.labels();
  t.counts.assign(t.rows.size(), std::vector<std::uint64_t>(2, 0));
  for (CaseIndex c : participating) ++t.counts[binning.bin_of(c)][0];
  for (CaseIndex c : non_participating) ++t.counts[binning.bin_of(c)][1];
  return t;
}

ContingencyTable drop_empty_rows(const ContingencyTable& table) {
  ContingencyTable out;
  out.columns = table.columns;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.row_total(r) == 0) continue;
    out.rows.push_back(table.rows[r]);
    out.counts.push_back(table.counts[r]);
  }
  return out;
}

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 10'000;

double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

// Lower regularized gamma by its power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Upper regularized gamma by its continued fraction (modified Lentz).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw ContractError("regularized_gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_survival(double x, int dof) {
  if (dof < 1) throw ContractError("degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square(const ContingencyTable& table, double alpha) {
  const std::size_t rows = table.counts.size();
  const std::size_t cols = rows == 0 ? 0 : table.counts.front().size();
  if (rows < 2 || cols < 2) throw ContractError("chi-square test needs at least a 2x2 table");
  std::vector<double> row_sum(rows);
  std::vector<double> col_sum(cols);
  for (std::size_t r = 0; r < rows; ++r) row_sum[r] = static_cast<double>(table.row_total(r));
  for (std::size_t c = 0; c < cols; ++c) col_sum[c] = static_cast<double>(table.column_total(c));
  for (double s : row_sum) {
    if (s == 0.0) throw ContractError("chi-square test undefined: empty row");
  }
  for (double s : col_sum) {
    if (s == 0.0) throw ContractError("chi-square test undefined: empty column");
  }
  const double n = static_cast<double>(table.total());

  ChiSquareResult out;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double expected = row_sum[r] * col_sum[c] / n;
      const double diff = static_cast<double>(table.counts[r][c]) - expected;
      out.statistic += diff * diff / expected;
      if (expected < 5.0) out.low_expected = true;
    }
  }
  out.dof = static_cast<int>((rows - 1) * (cols - 1));
  out.p_value = chi_square_survival(out.statistic, out.dof);
  out.significant = out.p_value < alpha;
  return out;
}

// ---------------------------------------------------------------------------
// Reporting

PathTest test_table(const HighLevelPath& path, std::size_t participating,
                    std::size_t non_participating, const ContingencyTable& table, double alpha) {
  PathTest t;
  t.path = path;
  t.participating = participating;
  t.non_participating = non_participating;
  t.table = drop_empty_rows(table);
  if (t.participating == 0 || t.non_participating == 0) {
    t.note = t.participating == 0 ? "no participating cases" : "no non-participating cases";
  } else if (t.table.rows.size() < 2) {
    t.note = "attribute takes a single value";
  } else {
    t.result = chi_square(t.table, alpha);
  }
  return t;
}

PathTest test_partition(const HighLevelPath& path, std::span<const CaseIndex> participating,
                        std::span<const CaseIndex> non_participating,
                        const AttributeBinning& binning, double alpha) {
  return test_table(path, participating.size(), non_participating.size(),
                    build_contingency_table(binning, participating, non_participating), alpha);
}

PathTest test_path(const HighLevelPath& path, std::span<const Episode> episodes,
                   const EventLog& log, const AttributeBinning& binning, double alpha) {
  const auto in = participating_cases(path, episodes);
  const auto out = non_participating_cases(path.steps, log, in);
  return test_partition(path, in, out, binning, alpha);
}

std::vector<double> benjamini_hochberg(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> q(m);
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const double adjusted =
        p_values[order[k]] * (static_cast<double>(m) / static_cast<double>(k + 1));
    running = std::min(running, adjusted);
    q[order[k]] = running;
  }
  return q;
}

std::vector<RankedPath> rank_paths(std::vector<PathTest> tests, const RankOptions& options) {
  std::vector<RankedPath> out;
  for (auto& t : tests) {
    if (t.path.frequency < options.min_freq) continue;
    RankedPath r;
    r.test = std::move(t);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedPath& a, const RankedPath& b) {
    const auto& ra = a.test.result;
    const auto& rb = b.test.result;
    if (ra.has_value() != rb.has_value()) return ra.has_value();
    if (ra && ra->p_value != rb->p_value) return ra->p_value < rb->p_value;
    if (a.test.path.frequency != b.test.path.frequency) {
      return a.test.path.frequency > b.test.path.frequency;
    }
    if (a.test.path.steps != b.test.path.steps) return a.test.path.steps < b.test.path.steps;
    return a.test.label < b.test.label;
  });

  std::vector<double> p;
  for (const auto& r : out) {
    if (r.test.result) p.push_back(r.test.result->p_value);
  }
  const std::vector<double> q = options.benjamini_hochberg ? benjamini_hochberg(p)
                                                           : std::vector<double>{};
  std::size_t k = 0;
  for (auto& r : out) {
    if (!r.test.result) continue;
    r.significant = r.test.result->p_value < options.alpha;
    if (options.benjamini_hochberg) {
      r.q_value = q[k];
      r.bh_significant = q[k] <= options.alpha;
    }
    ++k;
  }
  return out;
}

}  // namespace hlem
