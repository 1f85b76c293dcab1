#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlem/error.hpp"
#include "hlem/time.hpp"

namespace hlem {

/// Position of an event inside EventLog::events().
using EventRef = std::uint32_t;
using CaseIndex = std::uint32_t;
/// Activity names are interned in lexicographic order, so comparing ids
/// compares names.
using ActivityId = std::uint32_t;
using ResourceId = std::uint32_t;
using StepId = std::uint32_t;

struct Event {
  std::string id;
  std::string case_id;
  std::string activity;
  std::string resource;
  Timestamp time{};
  /// Values of EventLog::attribute_schema(), same order; empty when absent.
  std::vector<std::string> attributes;

  friend bool operator==(const Event&, const Event&) = default;
};

enum class DuplicatePolicy { error, offset };

enum class LifecycleCase { upper, lower, verbatim };

struct LoadOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::offset;
  LifecycleCase lifecycle_case = LifecycleCase::upper;
};

/// "activity|LIFECYCLE" naming. An empty lifecycle leaves the name unchanged.
std::string qualify_activity(std::string_view activity, std::string_view lifecycle,
                             LifecycleCase mode);

/// Immutable event log. Events are stored sorted by (case id, time), so the
/// trace of every case is a contiguous, strictly time-ordered range.
class EventLog {
 public:
  EventLog() = default;

  /// Normalizes raw events: sorts by (case, time) stably w.r.t. input order
  /// and resolves identical timestamps within a case per `options`.
  /// Throws ParseError for duplicate ids or (policy error) duplicate times.
  static EventLog from_events(std::vector<Event> events,
                              std::vector<std::string> attribute_schema,
                              const LoadOptions& options = {},
                              Diagnostics* diag = nullptr);

  std::span<const Event> events() const { return events_; }
  const Event& event(EventRef e) const { return events_[e]; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  const std::vector<std::string>& attribute_schema() const { return schema_; }
  /// Index into Event::attributes, or -1.
  int attribute_index(std::string_view name) const;

  std::size_t num_cases() const { return case_ids_.size(); }
  const std::string& case_name(CaseIndex c) const { return case_ids_[c]; }
  /// Case index for a case id, or -1 when unknown.
  std::int64_t find_case(std::string_view case_id) const;
  /// [first, last) event refs of the trace of case `c`.
  std::pair<EventRef, EventRef> trace_range(CaseIndex c) const {
    return {case_begin_[c], case_begin_[c + 1]};
  }
  std::span<const ActivityId> activity_sequence(CaseIndex c) const;

  CaseIndex case_of(EventRef e) const { return case_of_[e]; }
  ActivityId activity_of(EventRef e) const { return activity_of_[e]; }
  ResourceId resource_of(EventRef e) const { return resource_of_[e]; }
  Timestamp time_of(EventRef e) const { return events_[e].time; }

  std::size_t num_activities() const { return activities_.size(); }
  const std::string& activity_name(ActivityId a) const { return activities_[a]; }
  std::int64_t find_activity(std::string_view name) const;

  /// Resource 0 is always the empty resource.
  std::size_t num_resources() const { return resources_.size(); }
  const std::string& resource_name(ResourceId r) const { return resources_[r]; }

  Timestamp min_time() const { return min_time_; }
  Timestamp max_time() const { return max_time_; }

 private:
  std::vector<Event> events_;
  std::vector<std::string> schema_;
  std::vector<std::string> case_ids_;
  std::vector<EventRef> case_begin_;
  std::vector<CaseIndex> case_of_;
  std::vector<std::string> activities_;
  std::vector<ActivityId> activity_of_;
  std::vector<std::string> resources_;
  std::vector<ResourceId> resource_of_;
  Timestamp min_time_{};
  Timestamp max_time_{};
};

struct CsvSchema {
  std::string case_column = "case";
  std::string activity_column = "activity";
  std::string timestamp_column = "timestamp";
  /// Optional columns; empty name means not present.
  std::string resource_column = "resource";
  std::string lifecycle_column;
  std::string id_column;
  char delimiter = ',';
};

/// RFC 4180 CSV with a header row. Columns not named by the schema are kept
/// as event attributes. Optional schema columns that are absent from the
/// header are ignored; missing required ones raise ConfigError.
EventLog parse_csv(std::istream& in, const CsvSchema& schema,
                   const LoadOptions& options = {}, Diagnostics* diag = nullptr);

/// Flat XES reader: trace concept:name -> case, event concept:name ->
/// activity, org:resource, time:timestamp, lifecycle:transition. Other
/// string/date attributes are kept verbatim; trace-level ones are copied to
/// every event of the trace under "case:<key>".
EventLog parse_xes(std::istream& in, const LoadOptions& options = {},
                   Diagnostics* diag = nullptr);

/// Canonical dump: one JSON object per line {id, case, activity, resource,
/// time} plus an "attributes" object when the schema is non-empty.
void write_jsonl(std::ostream& out, const EventLog& log);
EventLog read_jsonl(std::istream& in, const LoadOptions& options = {},
                    Diagnostics* diag = nullptr);

/// CSV in the canonical column layout (id, case, activity, resource,
/// timestamp, attributes...), readable by parse_csv with id_column = "id".
void write_csv(std::ostream& out, const EventLog& log);

struct Step {
  EventRef first;
  EventRef second;
  friend bool operator==(const Step&, const Step&) = default;
};

struct Segment {
  ActivityId from;
  ActivityId to;
  friend auto operator<=>(const Segment&, const Segment&) = default;
};

/// Every step of a log plus the segment frequency table.
struct StepTable {
  std::vector<Step> steps;
  std::vector<Segment> segment_of;  // parallel to steps
  std::vector<Segment> segments;    // sorted, distinct
  std::vector<std::size_t> counts;  // parallel to segments

  std::size_t count(Segment s) const;
};

StepTable derive_steps(const EventLog& log);

/// The k segments with the most steps, ties broken by (from, to) name order.
/// Returned sorted by segment. k >= 1.
std::vector<Segment> select_top_segments(const StepTable& table, std::size_t k,
                                         Diagnostics* diag = nullptr);

std::string segment_name(const EventLog& log, Segment s);

}  // namespace hlem
