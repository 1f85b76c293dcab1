#include "hlem/framing.hpp"

#include <algorithm>
#include <unordered_set>

namespace hlem {

Framing::Framing(Duration width, Timestamp origin) : width_(width), origin_(origin) {
  if (width_ <= Duration::zero()) throw ConfigError("window width must be positive");
}

Framing Framing::for_log(const EventLog& log, Duration width) {
  return Framing(width, log.empty() ? Timestamp{} : floor_to_day(log.min_time()));
}

WindowIndex Framing::frame(Timestamp t) const {
  if (t < origin_) {
    throw ContractError("timestamp " + format_timestamp(t) + " precedes framing origin " +
                        format_timestamp(origin_));
  }
  return (t - origin_) / width_;
}

Window Framing::window(WindowIndex w) const {
  const Timestamp start = origin_ + w * width_;
  return {w, start, start + width_ - kTick};
}

std::vector<Window> windows_of_log(const EventLog& log, const Framing& framing) {
  std::vector<Window> out;
  if (log.empty()) return out;
  const WindowIndex lo = framing.frame(log.min_time());
  const WindowIndex hi = framing.frame(log.max_time());
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (WindowIndex w = lo; w <= hi; ++w) out.push_back(framing.window(w));
  return out;
}

StepIndex StepIndex::build(const EventLog& log, const Framing& framing,
                           const IndexOptions& options) {
  const StepTable table = derive_steps(log);
  return build(log, framing, table.segments, options);
}

StepIndex StepIndex::build(const EventLog& log, const Framing& framing,
                           std::span<const Segment> retained, const IndexOptions& options) {
  StepIndex idx(log, framing);
  if (log.empty()) return idx;

  idx.first_window_ = framing.frame(log.min_time());
  const WindowIndex last = framing.frame(log.max_time());
  idx.per_window_.resize(static_cast<std::size_t>(last - idx.first_window_ + 1));
  std::vector<WindowIndex> frame_of(log.size());
  for (EventRef e = 0; e < log.size(); ++e) {
    frame_of[e] = framing.frame(log.time_of(e));
    idx.per_window_[static_cast<std::size_t>(frame_of[e] - idx.first_window_)].push_back(e);
  }

  idx.segments_.assign(retained.begin(), retained.end());
  std::sort(idx.segments_.begin(), idx.segments_.end());
  idx.segments_.erase(std::unique(idx.segments_.begin(), idx.segments_.end()),
                      idx.segments_.end());
  idx.per_segment_.resize(idx.segments_.size());

  std::unordered_set<std::string> blacklist(options.resource_blacklist.begin(),
                                            options.resource_blacklist.end());
  const auto counts_as_staff = [&](EventRef e) {
    const std::string& r = log.event(e).resource;
    return !r.empty() && !blacklist.contains(r);
  };

  StepTable table = derive_steps(log);
  idx.steps_ = std::move(table.steps);
  idx.segment_of_ = std::move(table.segment_of);
  const std::size_t n = idx.steps_.size();
  idx.entry_.resize(n);
  idx.exit_.resize(n);
  idx.staffed_.resize(n);
  for (StepId id = 0; id < n; ++id) {
    const Step& st = idx.steps_[id];
    idx.entry_[id] = frame_of[st.first];
    idx.exit_[id] = frame_of[st.second];
    idx.staffed_[id] = counts_as_staff(st.first) && counts_as_staff(st.second) ? 1 : 0;
    const auto it = std::lower_bound(idx.segments_.begin(), idx.segments_.end(), idx.segment_of_[id]);
    if (it == idx.segments_.end() || *it != idx.segment_of_[id]) continue;
    SegmentSteps& seg = idx.per_segment_[static_cast<std::size_t>(it - idx.segments_.begin())];
    seg.steps.push_back(id);
    seg.by_entry[idx.entry_[id]].push_back(id);
    seg.by_exit[idx.exit_[id]].push_back(id);
    seg.by_pair[{idx.entry_[id], idx.exit_[id]}].push_back(id);
  }
  return idx;
}

const SegmentSteps* StepIndex::find(Segment s) const {
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), s);
  if (it == segments_.end() || *it != s) return nullptr;
  return &per_segment_[static_cast<std::size_t>(it - segments_.begin())];
}

std::span<const StepId> StepIndex::steps_of(Segment s) const {
  const SegmentSteps* seg = find(s);
  return seg ? std::span<const StepId>(seg->steps) : std::span<const StepId>{};
}

std::span<const EventRef> StepIndex::events_in(WindowIndex w) const {
  if (per_window_.empty() || w < first_window_ || w > last_window()) return {};
  return per_window_[static_cast<std::size_t>(w - first_window_)];
}

const std::map<WindowPair, std::vector<StepId>>& StepIndex::occupied_pairs(Segment s) const {
  static const std::map<WindowPair, std::vector<StepId>> none;
  const SegmentSteps* seg = find(s);
  return seg ? seg->by_pair : none;
}

}  // namespace hlem
