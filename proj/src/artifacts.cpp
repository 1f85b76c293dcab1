#include "hlem/artifacts.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <set>

namespace hlem {

using nlohmann::json;

namespace {

std::string num(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> case_names(std::span<const CaseIndex> cases, const EventLog& log) {
  std::vector<std::string> out;
  out.reserve(cases.size());
  for (CaseIndex c : cases) out.push_back(log.case_name(c));
  return out;
}

CaseIndex lookup_case(const EventLog& log, const std::string& name, std::size_t line) {
  const auto c = log.find_case(name);
  if (c < 0) throw ParseError("unknown case '" + name + "'", line);
  return static_cast<CaseIndex>(c);
}

ActivityId lookup_activity(const EventLog& log, const std::string& name, std::size_t line) {
  const auto a = log.find_activity(name);
  if (a < 0) throw ParseError("unknown activity '" + name + "'", line);
  return static_cast<ActivityId>(a);
}

Timestamp to_time(const json& j, std::size_t line) {
  const auto t = parse_timestamp(j.get<std::string>());
  if (!t) throw ParseError("malformed timestamp", line);
  return *t;
}

json spread_json(const TimeSpread& s) {
  return json::array({format_timestamp(s.first), format_timestamp(s.last)});
}

TimeSpread spread_from(const json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 2) throw ParseError("spread must be [first, last]", line);
  return {to_time(j[0], line), to_time(j[1], line)};
}

json theta_json(const Theta& theta) {
  if (const auto* w = std::get_if<WindowIndex>(&theta)) return *w;
  const auto& p = std::get<WindowPair>(theta);
  return json::array({p.first, p.second});
}

Theta theta_from(const json& j, std::size_t line) {
  if (j.is_number_integer()) return j.get<WindowIndex>();
  if (j.is_array() && j.size() == 2) return WindowPair{j[0].get<WindowIndex>(), j[1].get<WindowIndex>()};
  throw ParseError("theta must be a window or a window pair", line);
}

template <typename F>
void for_each_json_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), lineno);
    }
    try {
      f(j, lineno);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), lineno);
    }
  }
}

std::uint64_t count_of(const ContingencyTable& t, const std::string& row, std::size_t col) {
  const auto it = std::find(t.rows.begin(), t.rows.end(), row);
  if (it == t.rows.end()) return 0;
  return t.counts[static_cast<std::size_t>(it - t.rows.begin())][col];
}

}  // namespace

std::string activity_label(const HighLevelActivity& a, const EventLog& log) {
  return std::string(to_string(a.type)) + segment_name(log, a.segment);
}

std::string path_label(std::span<const HighLevelActivity> steps, const EventLog& log) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) out += " -> ";
    out += activity_label(steps[i], log);
  }
  return out;
}

std::string theta_label(const Theta& theta) {
  if (const auto* w = std::get_if<WindowIndex>(&theta)) return std::to_string(*w);
  const auto& p = std::get<WindowPair>(theta);
  return std::to_string(p.first) + "-" + std::to_string(p.second);
}

void write_hles(std::ostream& out, std::span<const HighLevelEvent> hles, const EventLog& log) {
  for (const auto& h : hles) {
    const Segment s = h.coordinate.segment;
    json row = {{"id", h.id},
                {"type", to_string(h.type)},
                {"segment", json::array({log.activity_name(s.from), log.activity_name(s.to)})},
                {"theta", theta_json(h.coordinate.theta)},
                {"value", h.value},
                {"cases", case_names(h.cases.ids(), log)},
                {"start_spread", spread_json(h.start_spread)},
                {"end_spread", spread_json(h.end_spread)}};
    out << row.dump() << '\n';
  }
}

std::vector<HighLevelEvent> read_hles(std::istream& in, const EventLog& log) {
  std::vector<HighLevelEvent> out;
  for_each_json_line(in, [&](const json& j, std::size_t line) {
    HighLevelEvent h;
    h.id = j.at("id").get<HleId>();
    const auto type = parse_feature_type(j.at("type").get<std::string>());
    if (!type) throw ParseError("unknown feature type", line);
    h.type = *type;
    const auto& seg = j.at("segment");
    if (!seg.is_array() || seg.size() != 2) throw ParseError("segment must be [from, to]", line);
    h.coordinate.segment = {lookup_activity(log, seg[0].get<std::string>(), line),
                            lookup_activity(log, seg[1].get<std::string>(), line)};
    h.coordinate.theta = theta_from(j.at("theta"), line);
    if (uses_window_pair(h.type) != std::holds_alternative<WindowPair>(h.coordinate.theta)) {
      throw ParseError("theta shape does not match the feature type", line);
    }
    h.value = j.at("value").get<double>();
    h.cases = CaseSet(log.num_cases());
    for (const auto& c : j.at("cases")) h.cases.insert(lookup_case(log, c.get<std::string>(), line));
    h.start_spread = spread_from(j.at("start_spread"), line);
    h.end_spread = spread_from(j.at("end_spread"), line);
    out.push_back(std::move(h));
  });
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const HighLevelEvent> hles,
                       std::span<const FeatureType> types, const EventLog& log) {
  std::map<FeatureType, std::map<Segment, std::size_t>> counts;
  for (FeatureType t : types) counts[t];
  for (const auto& h : hles) ++counts[h.type][h.coordinate.segment];
  const double total = static_cast<double>(hles.size());
  const auto pct = [](double part, double whole) { return whole > 0 ? 100.0 * part / whole : 0.0; };

  out << "type,segment,count,percent\n";
  for (const auto& [type, by_segment] : counts) {
    std::size_t n = 0;
    for (const auto& [s, c] : by_segment) n += c;
    out << to_string(type) << ",*," << n << ',' << num(pct(static_cast<double>(n), total)) << '\n';
    std::vector<std::pair<Segment, std::size_t>> rows(by_segment.begin(), by_segment.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [s, c] : rows) {
      out << to_string(type) << ',' << csv_field(segment_name(log, s)) << ',' << c << ','
          << num(pct(static_cast<double>(c), static_cast<double>(n))) << '\n';
    }
  }
  out << "all,*," << hles.size() << ',' << (hles.empty() ? "0" : "100") << '\n';
}

void write_thresholds_csv(std::ostream& out, const ThresholdTable& thresholds,
                          const DelayThresholds& delays, const EventLog& log) {
  out << "type,segment,threshold\n";
  for (const auto& [key, thr] : thresholds.entries()) {
    out << to_string(key.first) << ',' << csv_field(segment_name(log, key.second)) << ','
        << num(thr) << '\n';
  }
  for (const auto& [s, d] : delays.entries()) {
    out << "delta," << csv_field(segment_name(log, s)) << ',' << d << '\n';
  }
}

void write_episodes(std::ostream& out, std::span<const Episode> episodes,
                    std::span<const HighLevelEvent> hles, const EventLog& log) {
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const Episode& e = episodes[i];
    std::vector<HleId> ids;
    std::vector<HighLevelActivity> steps;
    for (std::size_t pos : e.hles) {
      ids.push_back(hles[pos].id);
      steps.push_back(hles[pos].activity());
    }
    json row = {{"id", i},
                {"hles", ids},
                {"path", path_label(steps, log)},
                {"cases", case_names(e.common_cases, log)}};
    out << row.dump() << '\n';
  }
}

std::vector<Episode> read_episodes(std::istream& in, std::span<const HighLevelEvent> hles,
                                   const EventLog& log) {
  std::map<HleId, std::size_t> position;
  for (std::size_t i = 0; i < hles.size(); ++i) position[hles[i].id] = i;
  std::vector<Episode> out;
  for_each_json_line(in, [&](const json& j, std::size_t line) {
    Episode e;
    for (const auto& id : j.at("hles")) {
      const auto it = position.find(id.get<HleId>());
      if (it == position.end()) throw ParseError("episode refers to an unknown HLE", line);
      e.hles.push_back(it->second);
    }
    if (e.hles.empty()) throw ParseError("episode without HLEs", line);
    for (const auto& c : j.at("cases")) {
      e.common_cases.push_back(lookup_case(log, c.get<std::string>(), line));
    }
    std::sort(e.common_cases.begin(), e.common_cases.end());
    out.push_back(std::move(e));
  });
  return out;
}

void write_paths(std::ostream& out, std::span<const HighLevelPath> paths, const EventLog& log) {
  for (const auto& p : paths) {
    json steps = json::array();
    for (const auto& a : p.steps) {
      steps.push_back({{"type", to_string(a.type)},
                       {"segment", json::array({log.activity_name(a.segment.from),
                                                log.activity_name(a.segment.to)})}});
    }
    json row = {{"path", path_label(p.steps, log)},
                {"steps", std::move(steps)},
                {"frequency", p.frequency},
                {"episodes", p.episodes}};
    out << row.dump() << '\n';
  }
}

void write_report_csv(std::ostream& out, std::span<const RankedPath> ranked,
                      std::span<const std::string> bin_labels) {
  out << "rank,path,frequency,participating,non_participating";
  for (const auto& l : bin_labels) out << ',' << csv_field("P:" + l);
  for (const auto& l : bin_labels) out << ',' << csv_field("N:" + l);
  out << ",chi2,dof,p,q,significant,note\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    const auto& t = r.test;
    out << i + 1 << ',' << csv_field(t.label) << ',' << t.path.frequency << ','
        << t.participating << ',' << t.non_participating;
    for (const auto& l : bin_labels) out << ',' << count_of(t.table, l, 0);
    for (const auto& l : bin_labels) out << ',' << count_of(t.table, l, 1);
    if (t.result) {
      out << ',' << num(t.result->statistic) << ',' << t.result->dof << ','
          << num(t.result->p_value);
    } else {
      out << ",,,";
    }
    out << ',' << (r.q_value ? num(*r.q_value) : "") << ','
        << (r.significant ? "true" : "false") << ',';
    std::string note = t.note;
    if (t.result && t.result->low_expected) note = "expected count below 5";
    out << csv_field(note) << '\n';
  }
}

void write_report_json(std::ostream& out, std::span<const RankedPath> ranked,
                       std::span<const std::string> bin_labels, const std::string& attribute) {
  json rows = json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    const auto& t = r.test;
    json table = json::object();
    for (const auto& l : bin_labels) {
      table[l] = json::array({count_of(t.table, l, 0), count_of(t.table, l, 1)});
    }
    json row = {{"rank", i + 1},
                {"path", t.label},
                {"frequency", t.path.frequency},
                {"participating", t.participating},
                {"non_participating", t.non_participating},
                {"table", std::move(table)},
                {"significant", r.significant},
                {"bh_significant", r.bh_significant}};
    if (t.result) {
      row["chi2"] = t.result->statistic;
      row["dof"] = t.result->dof;
      row["p"] = t.result->p_value;
      row["low_expected"] = t.result->low_expected;
    }
    if (r.q_value) row["q"] = *r.q_value;
    if (!t.note.empty()) row["note"] = t.note;
    rows.push_back(std::move(row));
  }
  json doc = {{"attribute", attribute}, {"bins", bin_labels}, {"paths", std::move(rows)}};
  out << doc.dump(2) << '\n';
}

PartitionFixture read_partition_fixture(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  try {
    PartitionFixture f;
    f.attribute = j.value("attribute", std::string("label"));
    for (const auto& [id, label] : j.at("cases").items()) f.labels[id] = label.get<std::string>();
    for (const auto& p : j.at("paths")) {
      PartitionFixture::Path path;
      path.label = p.at("path").get<std::string>();
      path.frequency = p.value("frequency", std::size_t{1});
      path.participating = p.at("participating").get<std::vector<std::string>>();
      path.non_participating = p.at("non_participating").get<std::vector<std::string>>();
      f.paths.push_back(std::move(path));
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

void write_partition_fixture(std::ostream& out, const PartitionFixture& fixture) {
  json paths = json::array();
  for (const auto& p : fixture.paths) {
    paths.push_back({{"path", p.label},
                     {"frequency", p.frequency},
                     {"participating", p.participating},
                     {"non_participating", p.non_participating}});
  }
  json doc = {{"attribute", fixture.attribute}, {"cases", fixture.labels}, {"paths", paths}};
  out << doc.dump() << '\n';
}

std::vector<std::string> fixture_bin_labels(const PartitionFixture& fixture) {
  std::set<std::string> labels;
  for (const auto& [id, label] : fixture.labels) labels.insert(label);
  return {labels.begin(), labels.end()};
}

std::vector<PathTest> test_fixture(const PartitionFixture& fixture, double alpha) {
  const auto labels = fixture_bin_labels(fixture);
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < labels.size(); ++i) row_of[labels[i]] = i;

  std::vector<PathTest> out;
  for (const auto& p : fixture.paths) {
    std::vector<std::vector<std::uint64_t>> counts(labels.size(), std::vector<std::uint64_t>(2, 0));
    const auto tally = [&](const std::vector<std::string>& cases, std::size_t col) {
      for (const auto& c : cases) {
        const auto it = fixture.labels.find(c);
        if (it == fixture.labels.end()) {
          throw ConfigError("case '" + c + "' of path '" + p.label + "' has no attribute value");
        }
        ++counts[row_of.at(it->second)][col];
      }
    };
    tally(p.participating, 0);
    tally(p.non_participating, 1);
    HighLevelPath path;
    path.frequency = p.frequency;
    PathTest t = test_table(path, p.participating.size(), p.non_participating.size(),
                            make_table(labels, std::move(counts)), alpha);
    t.label = p.label;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace hlem
