#include <expat.h>

#include <array>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <string_view>

#include "hlem/event_log.hpp"

namespace hlem {
namespace {

bool is_value_element(std::string_view tag) {
  return tag == "string" || tag == "date" || tag == "int" || tag == "float" ||
         tag == "boolean" || tag == "id";
}

std::string_view local_name(const XML_Char* name) {
  std::string_view n(name);
  const auto colon = n.rfind(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

struct RawEvent {
  std::map<std::string, std::string, std::less<>> attrs;
};

class XesReader {
 public:
  void start(std::string_view tag, const XML_Char** atts) {
    ++depth_;
    if (tag == "trace" && !in_trace_) {
      in_trace_ = true;
      trace_depth_ = depth_;
      trace_attrs_.clear();
      trace_events_.clear();
      return;
    }
    if (tag == "event" && in_trace_ && !in_event_) {
      in_event_ = true;
      event_depth_ = depth_;
      trace_events_.emplace_back();
      return;
    }
    if (!is_value_element(tag)) return;
    // Only direct children of <trace>/<event> are read; nested attributes
    // and <global> defaults are ignored.
    const bool event_level = in_event_ && depth_ == event_depth_ + 1;
    const bool trace_level = in_trace_ && !in_event_ && depth_ == trace_depth_ + 1;
    if (!event_level && !trace_level) return;
    std::string key;
    std::string value;
    for (int i = 0; atts[i] != nullptr; i += 2) {
      if (std::strcmp(atts[i], "key") == 0) key = atts[i + 1];
      if (std::strcmp(atts[i], "value") == 0) value = atts[i + 1];
    }
    if (key.empty()) return;
    auto& target = event_level ? trace_events_.back().attrs : trace_attrs_;
    target.insert_or_assign(std::move(key), std::move(value));
  }

  void end(std::string_view tag) {
    if (tag == "event" && in_event_ && depth_ == event_depth_) in_event_ = false;
    if (tag == "trace" && in_trace_ && depth_ == trace_depth_) {
      in_trace_ = false;
      flush_trace();
    }
    --depth_;
  }

  EventLog finish(const LoadOptions& options, Diagnostics* diag) {
    if (skipped_ > 0) {
      warn(diag, std::to_string(skipped_) + " XES event(s) without a parseable time:timestamp skipped");
    }
    for (auto& e : events_) {
      e.attributes.resize(schema_.size());
    }
    return EventLog::from_events(std::move(events_), std::move(schema_), options, diag);
  }

  LifecycleCase lifecycle_case = LifecycleCase::upper;

 private:
  std::size_t attribute_slot(const std::string& name) {
    const auto it = slots_.find(name);
    if (it != slots_.end()) return it->second;
    schema_.push_back(name);
    slots_.emplace(name, schema_.size() - 1);
    return schema_.size() - 1;
  }

  void flush_trace() {
    std::string case_id;
    if (const auto it = trace_attrs_.find("concept:name"); it != trace_attrs_.end()) {
      case_id = it->second;
    } else {
      case_id = "trace_" + std::to_string(trace_ordinal_);
    }
    ++trace_ordinal_;
    for (auto& raw : trace_events_) {
      Event e;
      e.case_id = case_id;
      const auto ts = raw.attrs.find("time:timestamp");
      const auto parsed = ts == raw.attrs.end() ? std::nullopt : parse_timestamp(ts->second);
      if (!parsed) {
        ++skipped_;
        continue;
      }
      e.time = *parsed;
      std::string activity;
      std::string lifecycle;
      for (auto& [key, value] : raw.attrs) {
        if (key == "concept:name") activity = value;
        else if (key == "lifecycle:transition") lifecycle = value;
        else if (key == "org:resource") e.resource = value;
        else if (key == "time:timestamp") continue;
        else set_attribute(e, key, std::move(value));
      }
      for (const auto& [key, value] : trace_attrs_) {
        if (key != "concept:name") set_attribute(e, "case:" + key, value);
      }
      e.activity = qualify_activity(activity, lifecycle, lifecycle_case);
      e.id = std::to_string(events_.size());
      events_.push_back(std::move(e));
    }
    trace_events_.clear();
  }

  void set_attribute(Event& e, const std::string& key, std::string value) {
    const std::size_t slot = attribute_slot(key);
    if (e.attributes.size() <= slot) e.attributes.resize(slot + 1);
    e.attributes[slot] = std::move(value);
  }

  int depth_ = 0;
  bool in_trace_ = false;
  bool in_event_ = false;
  int trace_depth_ = 0;
  int event_depth_ = 0;
  std::size_t trace_ordinal_ = 0;
  std::size_t skipped_ = 0;
  std::map<std::string, std::string, std::less<>> trace_attrs_;
  std::vector<RawEvent> trace_events_;
  std::vector<Event> events_;
  std::vector<std::string> schema_;
  std::map<std::string, std::size_t, std::less<>> slots_;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

EventLog parse_xes(std::istream& in, const LoadOptions& options, Diagnostics* diag) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(
      XML_ParserCreate(nullptr));
  if (!parser) throw Error("unable to create XML parser");
  XesReader reader;
  reader.lifecycle_case = options.lifecycle_case;
  XML_SetUserData(parser.get(), &reader);
  XML_SetElementHandler(
      parser.get(),
      [](void* data, const XML_Char* name, const XML_Char** atts) {
        static_cast<XesReader*>(data)->start(local_name(name), atts);
      },
      [](void* data, const XML_Char* name) {
        static_cast<XesReader*>(data)->end(local_name(name));
      });

  std::array<char, 1 << 16> buf{};
  bool saw_any = false;
  for (;;) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto n = in.gcount();
    const bool last = n < static_cast<std::streamsize>(buf.size());
    saw_any = saw_any || n > 0;
    if (XML_Parse(parser.get(), buf.data(), static_cast<int>(n), last ? 1 : 0) ==
        XML_STATUS_ERROR) {
      throw ParseError(std::string("invalid XES: ") +
                           XML_ErrorString(XML_GetErrorCode(parser.get())),
                       static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get())));
    }
    if (last) break;
  }
  if (!saw_any) throw ParseError("invalid XES: empty input");
  return reader.finish(options, diag);
}

}  // namespace hlem
