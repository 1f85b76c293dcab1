#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hlem/event_log.hpp"
#include "hlem/time.hpp"

namespace testing_support {

struct Row {
  std::string case_id;
  std::string activity;
  std::string resource;
  std::string time;
};

inline hlem::Timestamp ts(const std::string& text) { return *hlem::parse_timestamp(text); }

inline hlem::EventLog make_log(std::initializer_list<Row> rows, const hlem::LoadOptions& options = {},
                               hlem::Diagnostics* diag = nullptr) {
  std::vector<hlem::Event> events;
  for (const Row& r : rows) {
    hlem::Event e;
    e.id = std::to_string(events.size());
    e.case_id = r.case_id;
    e.activity = r.activity;
    e.resource = r.resource;
    e.time = ts(r.time);
    events.push_back(std::move(e));
  }
  return hlem::EventLog::from_events(std::move(events), {}, options, diag);
}

inline hlem::Segment seg(const hlem::EventLog& log, const std::string& a, const std::string& b) {
  return {static_cast<hlem::ActivityId>(log.find_activity(a)),
          static_cast<hlem::ActivityId>(log.find_activity(b))};
}

}  // namespace testing_support
