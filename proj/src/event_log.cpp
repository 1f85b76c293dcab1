#include "hlem/event_log.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace hlem {
namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <class Id>
std::vector<std::string> intern_sorted(const std::vector<Event>& events,
                                       std::string Event::*field, std::vector<Id>& ids,
                                       bool reserve_empty) {
  std::vector<std::string> names;
  names.reserve(events.size());
  for (const auto& e : events) names.push_back(e.*field);
  if (reserve_empty) names.emplace_back();
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::unordered_map<std::string_view, Id> lookup;
  lookup.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) lookup.emplace(names[i], static_cast<Id>(i));
  ids.resize(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) ids[i] = lookup.at(events[i].*field);
  return names;
}

}  // namespace

std::string qualify_activity(std::string_view activity, std::string_view lifecycle,
                             LifecycleCase mode) {
  std::string life = trimmed(lifecycle);
  if (life.empty()) return std::string(activity);
  for (char& c : life) {
    if (mode == LifecycleCase::upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (mode == LifecycleCase::lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  std::string out(activity);
  out += '|';
  out += life;
  return out;
}

EventLog EventLog::from_events(std::vector<Event> events, std::vector<std::string> attribute_schema,
                               const LoadOptions& options, Diagnostics* diag) {
  EventLog log;
  log.schema_ = std::move(attribute_schema);

  std::unordered_set<std::string> seen_ids;
  seen_ids.reserve(events.size());
  for (auto& e : events) {
    e.case_id = trimmed(e.case_id);
    e.activity = trimmed(e.activity);
    e.resource = trimmed(e.resource);
    e.attributes.resize(log.schema_.size());
    if (!seen_ids.insert(e.id).second) throw ParseError("duplicate event id '" + e.id + "'");
  }

  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (events[a].case_id != events[b].case_id) return events[a].case_id < events[b].case_id;
    return events[a].time < events[b].time;
  });
  log.events_.reserve(events.size());
  for (std::size_t i : order) log.events_.push_back(std::move(events[i]));

  std::size_t repaired = 0;
  for (std::size_t i = 1; i < log.events_.size(); ++i) {
    Event& prev = log.events_[i - 1];
    Event& cur = log.events_[i];
    if (prev.case_id != cur.case_id || cur.time > prev.time) continue;
    if (options.duplicates == DuplicatePolicy::error) {
      throw ParseError("case '" + cur.case_id + "' has two events at " +
                       format_timestamp(cur.time));
    }
    cur.time = prev.time + kTick;
    ++repaired;
  }
  if (repaired > 0) {
    warn(diag, std::to_string(repaired) +
                   " event(s) shared a timestamp with their predecessor in the same case; "
                   "shifted by 1ms");
  }

  log.activities_ = intern_sorted(log.events_, &Event::activity, log.activity_of_, false);
  log.resources_ = intern_sorted(log.events_, &Event::resource, log.resource_of_, true);

  log.case_of_.resize(log.events_.size());
  for (std::size_t i = 0; i < log.events_.size(); ++i) {
    if (i == 0 || log.events_[i].case_id != log.events_[i - 1].case_id) {
      log.case_ids_.push_back(log.events_[i].case_id);
      log.case_begin_.push_back(static_cast<EventRef>(i));
    }
    log.case_of_[i] = static_cast<CaseIndex>(log.case_ids_.size() - 1);
  }
  log.case_begin_.push_back(static_cast<EventRef>(log.events_.size()));

  if (!log.events_.empty()) {
    const auto [lo, hi] = std::minmax_element(
        log.events_.begin(), log.events_.end(),
        [](const Event& a, const Event& b) { return a.time < b.time; });
    log.min_time_ = lo->time;
    log.max_time_ = hi->time;
  }
  return log;
}

int EventLog::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::int64_t EventLog::find_case(std::string_view case_id) const {
  const auto it = std::lower_bound(case_ids_.begin(), case_ids_.end(), case_id);
  if (it == case_ids_.end() || *it != case_id) return -1;
  return it - case_ids_.begin();
}

std::int64_t EventLog::find_activity(std::string_view name) const {
  const auto it = std::lower_bound(activities_.begin(), activities_.end(), name);
  if (it == activities_.end() || *it != name) return -1;
  return it - activities_.begin();
}

std::span<const ActivityId> EventLog::activity_sequence(CaseIndex c) const {
  const auto [first, last] = trace_range(c);
  return std::span<const ActivityId>(activity_of_).subspan(first, last - first);
}

std::size_t StepTable::count(Segment s) const {
  const auto it = std::lower_bound(segments.begin(), segments.end(), s);
  if (it == segments.end() || *it != s) return 0;
  return counts[static_cast<std::size_t>(it - segments.begin())];
}

StepTable derive_steps(const EventLog& log) {
  StepTable table;
  for (CaseIndex c = 0; c < log.num_cases(); ++c) {
    const auto [first, last] = log.trace_range(c);
    for (EventRef e = first; e + 1 < last; ++e) {
      table.steps.push_back({e, e + 1});
      table.segment_of.push_back({log.activity_of(e), log.activity_of(e + 1)});
    }
  }
  table.segments = table.segment_of;
  std::sort(table.segments.begin(), table.segments.end());
  table.segments.erase(std::unique(table.segments.begin(), table.segments.end()),
                       table.segments.end());
  table.counts.assign(table.segments.size(), 0);
  for (const Segment& s : table.segment_of) {
    const auto it = std::lower_bound(table.segments.begin(), table.segments.end(), s);
    ++table.counts[static_cast<std::size_t>(it - table.segments.begin())];
  }
  return table;
}

std::vector<Segment> select_top_segments(const StepTable& table, std::size_t k, Diagnostics* diag) {
  if (k == 0) throw ContractError("select_top_segments: k must be at least 1");
  std::vector<std::size_t> order(table.segments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (k > order.size()) {
    warn(diag, "requested top " + std::to_string(k) + " segments but the log has only " +
                   std::to_string(order.size()));
    k = order.size();
  }
  // segments are already in (from, to) order, so a stable sort by count
  // yields the lexicographic tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return table.counts[a] > table.counts[b]; });
  std::vector<Segment> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(table.segments[order[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

std::string segment_name(const EventLog& log, Segment s) {
  return "(" + log.activity_name(s.from) + ", " + log.activity_name(s.to) + ")";
}

}  // namespace hlem
