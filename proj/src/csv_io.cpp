#include <istream>
#include <optional>
#include <ostream>

#include "hlem/event_log.hpp"

namespace hlem {
namespace {

// Reads one RFC 4180 record. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (;;) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) throw ParseError("unterminated quoted field", line);
      break;
    }
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // swallowed; CRLF handled by the '\n' branch
    } else if (c == '\n') {
      ++line;
      break;
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return any;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

std::optional<std::size_t> column(const std::vector<std::string>& header, const std::string& name) {
  if (name.empty()) return std::nullopt;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::string quote(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

EventLog parse_csv(std::istream& in, const CsvSchema& schema, const LoadOptions& options,
                   Diagnostics* diag) {
  std::size_t line = 1;
  std::vector<std::string> header;
  if (!read_record(in, schema.delimiter, header, line)) {
    throw ConfigError("CSV input is empty (a header row is required)");
  }
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  const auto required = [&](const std::string& name) {
    const auto idx = column(header, name);
    if (!idx) throw ConfigError("CSV is missing required column '" + name + "'");
    return *idx;
  };
  const std::size_t case_col = required(schema.case_column);
  const std::size_t act_col = required(schema.activity_column);
  const std::size_t time_col = required(schema.timestamp_column);
  const auto res_col = column(header, schema.resource_column);
  const auto life_col = column(header, schema.lifecycle_column);
  const auto id_col = column(header, schema.id_column);
  if (!schema.id_column.empty() && !id_col) {
    throw ConfigError("CSV is missing id column '" + schema.id_column + "'");
  }

  std::vector<std::string> attr_names;
  std::vector<std::size_t> attr_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == case_col || i == act_col || i == time_col || i == res_col || i == life_col ||
        i == id_col) {
      continue;
    }
    attr_names.push_back(header[i]);
    attr_cols.push_back(i);
  }

  std::vector<Event> events;
  std::vector<std::string> fields;
  std::size_t ordinal = 0;
  for (;;) {
    const std::size_t record_line = line;
    if (!read_record(in, schema.delimiter, fields, line)) break;
    if (blank(fields)) continue;
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       record_line);
    }
    Event e;
    e.id = id_col ? fields[*id_col] : std::to_string(ordinal);
    ++ordinal;
    e.case_id = fields[case_col];
    e.activity = life_col ? qualify_activity(fields[act_col], fields[*life_col],
                                             options.lifecycle_case)
                          : fields[act_col];
    if (res_col) e.resource = fields[*res_col];
    const auto t = parse_timestamp(fields[time_col]);
    if (!t) throw ParseError("malformed timestamp '" + fields[time_col] + "'", record_line);
    e.time = *t;
    e.attributes.reserve(attr_cols.size());
    for (std::size_t c : attr_cols) e.attributes.push_back(fields[c]);
    events.push_back(std::move(e));
  }
  return EventLog::from_events(std::move(events), std::move(attr_names), options, diag);
}

void write_csv(std::ostream& out, const EventLog& log) {
  out << "id,case,activity,resource,timestamp";
  for (const auto& name : log.attribute_schema()) out << ',' << quote(name, ',');
  out << '\n';
  for (const Event& e : log.events()) {
    out << quote(e.id, ',') << ',' << quote(e.case_id, ',') << ',' << quote(e.activity, ',')
        << ',' << quote(e.resource, ',') << ',' << format_timestamp(e.time);
    for (const auto& v : e.attributes) out << ',' << quote(v, ',');
    out << '\n';
  }
}

}  // namespace hlem
