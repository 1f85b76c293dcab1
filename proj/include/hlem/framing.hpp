#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hlem/event_log.hpp"
#include "hlem/time.hpp"

namespace hlem {

using WindowIndex = std::int64_t;

struct Window {
  WindowIndex index;
  Timestamp start;
  /// Last representable instant of the window: start + width - 1ms.
  Timestamp end;
};

/// Uniform framing: window i covers [origin + i*width, origin + (i+1)*width).
class Framing {
 public:
  Framing(Duration width, Timestamp origin);

  /// Origin at midnight UTC of the first event's day.
  static Framing for_log(const EventLog& log, Duration width = std::chrono::days{1});

  Duration width() const { return width_; }
  Timestamp origin() const { return origin_; }

  /// Throws ContractError when t precedes the origin.
  WindowIndex frame(Timestamp t) const;
  Window window(WindowIndex w) const;

 private:
  Duration width_;
  Timestamp origin_;
};

struct WindowPair {
  WindowIndex first;
  WindowIndex second;
  friend auto operator<=>(const WindowPair&, const WindowPair&) = default;
};

using Theta = std::variant<WindowIndex, WindowPair>;

struct Coordinate {
  Segment segment;
  Theta theta;
  friend auto operator<=>(const Coordinate&, const Coordinate&) = default;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

/// Contiguous windows from frame(min time) to frame(max time), empty ones
/// included. Empty for an empty log.
std::vector<Window> windows_of_log(const EventLog& log, const Framing& framing);

struct IndexOptions {
  /// Resources that never count as staff for workload/handover.
  std::vector<std::string> resource_blacklist;
};

/// Per-segment step lookups of a StepIndex.
struct SegmentSteps {
  std::vector<StepId> steps;  // I_s
  std::map<WindowIndex, std::vector<StepId>> by_entry;
  std::map<WindowIndex, std::vector<StepId>> by_exit;
  /// Only occupied pairs are materialized.
  std::map<WindowPair, std::vector<StepId>> by_pair;
};

/// Segment, window and window-pair lookups over the steps of a log.
/// Holds a non-owning reference to the log, which must outlive the index.
/// Only steps of retained segments are indexed; I_w covers every event.
class StepIndex {
 public:
  static StepIndex build(const EventLog& log, const Framing& framing,
                         std::span<const Segment> retained, const IndexOptions& options = {});
  /// Convenience overload retaining every segment.
  static StepIndex build(const EventLog& log, const Framing& framing,
                         const IndexOptions& options = {});

  const EventLog& log() const { return *log_; }
  const Framing& framing() const { return framing_; }

  bool empty() const { return per_window_.empty(); }
  WindowIndex first_window() const { return first_window_; }
  WindowIndex last_window() const { return first_window_ + static_cast<WindowIndex>(per_window_.size()) - 1; }
  std::size_t num_windows() const { return per_window_.size(); }

  /// Retained segments, sorted.
  std::span<const Segment> segments() const { return segments_; }
  const SegmentSteps* find(Segment s) const;

  std::span<const StepId> steps_of(Segment s) const;
  std::span<const EventRef> events_in(WindowIndex w) const;
  const std::map<WindowPair, std::vector<StepId>>& occupied_pairs(Segment s) const;

  std::size_t num_steps() const { return steps_.size(); }
  const Step& step(StepId id) const { return steps_[id]; }
  Segment segment_of(StepId id) const { return segment_of_[id]; }
  WindowIndex entry_window(StepId id) const { return entry_[id]; }
  WindowIndex exit_window(StepId id) const { return exit_[id]; }
  /// Both endpoints carry a non-empty, non-blacklisted resource.
  bool staffed(StepId id) const { return staffed_[id] != 0; }
  bool same_resource(StepId id) const {
    return log_->resource_of(steps_[id].first) == log_->resource_of(steps_[id].second);
  }

 private:
  StepIndex(const EventLog& log, const Framing& framing) : log_(&log), framing_(framing) {}

  const EventLog* log_;
  Framing framing_;
  WindowIndex first_window_ = 0;
  std::vector<std::vector<EventRef>> per_window_;
  std::vector<Segment> segments_;
  std::vector<SegmentSteps> per_segment_;
  std::vector<Step> steps_;
  std::vector<Segment> segment_of_;
  std::vector<WindowIndex> entry_;
  std::vector<WindowIndex> exit_;
  std::vector<std::uint8_t> staffed_;
};

}  // namespace hlem
