#include <algorithm>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "hlem/event_log.hpp"

namespace hlem {

using nlohmann::json;

void write_jsonl(std::ostream& out, const EventLog& log) {
  const auto& schema = log.attribute_schema();
  for (const Event& e : log.events()) {
    json row = {{"id", e.id},
                {"case", e.case_id},
                {"activity", e.activity},
                {"resource", e.resource},
                {"time", format_timestamp(e.time)}};
    if (!schema.empty()) {
      json attrs = json::object();
      for (std::size_t i = 0; i < schema.size(); ++i) attrs[schema[i]] = e.attributes[i];
      row["attributes"] = std::move(attrs);
    }
    out << row.dump() << '\n';
  }
}

EventLog read_jsonl(std::istream& in, const LoadOptions& options, Diagnostics* diag) {
  std::vector<Event> events;
  std::vector<std::string> schema;
  std::vector<json> attr_rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
      Event e;
      e.id = row.at("id").get<std::string>();
      e.case_id = row.at("case").get<std::string>();
      e.activity = row.at("activity").get<std::string>();
      e.resource = row.value("resource", std::string{});
      const auto text = row.at("time").get<std::string>();
      const auto t = parse_timestamp(text);
      if (!t) throw ParseError("malformed timestamp '" + text + "'", lineno);
      e.time = *t;
      events.push_back(std::move(e));
      attr_rows.push_back(row.value("attributes", json::object()));
      for (const auto& [key, value] : attr_rows.back().items()) {
        if (std::find(schema.begin(), schema.end(), key) == schema.end()) schema.push_back(key);
      }
    } catch (const json::exception& ex) {
      throw ParseError(std::string("invalid event record: ") + ex.what(), lineno);
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto& attrs = events[i].attributes;
    attrs.resize(schema.size());
    for (std::size_t k = 0; k < schema.size(); ++k) {
      const auto it = attr_rows[i].find(schema[k]);
      if (it != attr_rows[i].end() && it->is_string()) attrs[k] = it->get<std::string>();
    }
  }
  return EventLog::from_events(std::move(events), std::move(schema), options, diag);
}

}  // namespace hlem
