#include "hlem/config.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <sstream>

namespace hlem {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  value = trim(value);
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) +
                    "' (expected " + std::string(expected) + ")");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return out;
}

std::size_t to_size(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

std::string fmt(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

constexpr std::array<std::string_view, 3> kFormats = {"csv", "xes", "jsonl"};

}  // namespace

void set_config_value(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "input") c.input = std::string(value);
  else if (key == "format") {
    for (std::size_t i = 0; i < kFormats.size(); ++i) {
      if (kFormats[i] == value) {
        c.format = static_cast<InputFormat>(i);
        return;
      }
    }
    bad_value(key, value, "csv, xes or jsonl");
  } else if (key == "csv.case") c.csv.case_column = std::string(value);
  else if (key == "csv.activity") c.csv.activity_column = std::string(value);
  else if (key == "csv.timestamp") c.csv.timestamp_column = std::string(value);
  else if (key == "csv.resource") c.csv.resource_column = std::string(value);
  else if (key == "csv.lifecycle") c.csv.lifecycle_column = std::string(value);
  else if (key == "csv.id") c.csv.id_column = std::string(value);
  else if (key == "csv.delimiter") {
    if (value == "tab" || value == "\\t") c.csv.delimiter = '\t';
    else if (value.size() == 1) c.csv.delimiter = value[0];
    else bad_value(key, value, "a single character or 'tab'");
  } else if (key == "duplicates") {
    if (value == "offset") c.load.duplicates = DuplicatePolicy::offset;
    else if (value == "error") c.load.duplicates = DuplicatePolicy::error;
    else bad_value(key, value, "offset or error");
  } else if (key == "lifecycle_case") {
    if (value == "upper") c.load.lifecycle_case = LifecycleCase::upper;
    else if (value == "lower") c.load.lifecycle_case = LifecycleCase::lower;
    else if (value == "verbatim") c.load.lifecycle_case = LifecycleCase::verbatim;
    else bad_value(key, value, "upper, lower or verbatim");
  } else if (key == "window") {
    const auto d = parse_duration(value);
    if (!d || *d <= Duration::zero()) bad_value(key, value, "a positive duration such as 1d or 4h");
    c.window = *d;
  } else if (key == "origin") {
    if (value.empty() || value == "auto") {
      c.origin.reset();
      return;
    }
    const auto t = parse_timestamp(value);
    if (!t) bad_value(key, value, "an ISO-8601 timestamp or 'auto'");
    c.origin = *t;
  } else if (key == "types") {
    c.types.clear();
    for (const auto& name : split_list(value)) {
      const auto t = parse_feature_type(name);
      if (!t) throw ConfigError("unknown feature type '" + name + "'");
      c.types.push_back(*t);
    }
    if (c.types.empty()) bad_value(key, value, "a comma-separated list of feature types");
  } else if (key == "top_k") c.top_k = to_size(key, value);
  else if (key == "resource_blacklist") c.resource_blacklist = split_list(value);
  else if (key == "percentile") c.percentile = to_double(key, value);
  else if (key.starts_with("percentile.")) {
    const auto name = key.substr(std::string_view("percentile.").size());
    const auto t = parse_feature_type(name);
    if (!t) throw ConfigError("unknown feature type '" + std::string(name) + "'");
    c.per_type_percentile[*t] = to_double(key, value);
  } else if (key == "delay_percentile") c.delay_percentile = to_double(key, value);
  else if (key == "include_empty_windows") c.include_empty_windows = to_bool(key, value);
  else if (key == "include_empty_pairs") c.include_empty_pairs = to_bool(key, value);
  else if (key == "lambda") c.lambda = to_double(key, value);
  else if (key == "max_len") c.max_len = to_size(key, value);
  else if (key == "min_path_freq") c.min_path_freq = to_size(key, value);
  else if (key == "episode_condition") {
    if (value == "jaccard") c.episode_condition = EpisodeCondition::jaccard;
    else if (value == "min_fraction") c.episode_condition = EpisodeCondition::min_fraction;
    else bad_value(key, value, "jaccard or min_fraction");
  } else if (key == "attribute") {
    if (value.empty() || value == "none") c.attribute.reset();
    else c.attribute = parse_attribute_spec(value);
  } else if (key == "alpha") c.alpha = to_double(key, value);
  else if (key == "benjamini_hochberg") c.benjamini_hochberg = to_bool(key, value);
  else if (key == "out") c.out = std::string(value);
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void read_config(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(config, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  const auto line = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  line("input", c.input);
  line("format", std::string(kFormats[static_cast<std::size_t>(c.format)]));
  line("csv.case", c.csv.case_column);
  line("csv.activity", c.csv.activity_column);
  line("csv.timestamp", c.csv.timestamp_column);
  line("csv.resource", c.csv.resource_column);
  line("csv.lifecycle", c.csv.lifecycle_column);
  line("csv.id", c.csv.id_column);
  line("csv.delimiter", c.csv.delimiter == '\t' ? "tab" : std::string(1, c.csv.delimiter));
  line("duplicates", c.load.duplicates == DuplicatePolicy::offset ? "offset" : "error");
  line("lifecycle_case", c.load.lifecycle_case == LifecycleCase::upper   ? "upper"
                         : c.load.lifecycle_case == LifecycleCase::lower ? "lower"
                                                                         : "verbatim");
  line("window", format_duration(c.window));
  line("origin", c.origin ? format_timestamp(*c.origin) : "auto");
  std::vector<std::string> types;
  for (FeatureType t : c.types) types.emplace_back(to_string(t));
  line("types", join(types));
  line("top_k", std::to_string(c.top_k));
  line("resource_blacklist", join(c.resource_blacklist));
  line("percentile", fmt(c.percentile));
  for (const auto& [type, p] : c.per_type_percentile) {
    line("percentile." + std::string(to_string(type)), fmt(p));
  }
  line("delay_percentile", fmt(c.delay_percentile));
  line("include_empty_windows", c.include_empty_windows ? "true" : "false");
  line("include_empty_pairs", c.include_empty_pairs ? "true" : "false");
  line("lambda", fmt(c.lambda));
  line("max_len", std::to_string(c.max_len));
  line("min_path_freq", std::to_string(c.min_path_freq));
  line("episode_condition",
       c.episode_condition == EpisodeCondition::jaccard ? "jaccard" : "min_fraction");
  line("attribute", c.attribute ? format_attribute_spec(*c.attribute) : "none");
  line("alpha", fmt(c.alpha));
  line("benjamini_hochberg", c.benjamini_hochberg ? "true" : "false");
  line("out", c.out);
  return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

void validate(const RunConfig& c) {
  const auto in_range = [](double v, double lo, double hi, const char* what) {
    if (!(v >= lo && v <= hi)) {
      throw ConfigError(std::string(what) + " must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
  };
  in_range(c.percentile, 0.0, 100.0, "percentile");
  for (const auto& [type, p] : c.per_type_percentile) in_range(p, 0.0, 100.0, "percentile override");
  in_range(c.delay_percentile, 0.0, 100.0, "delay_percentile");
  in_range(c.lambda, 0.0, 1.0, "lambda");
  in_range(c.alpha, 0.0, 1.0, "alpha");
  if (c.max_len < 1) throw ConfigError("max_len must be at least 1");
  if (c.types.empty()) throw ConfigError("at least one feature type is required");
  if (c.window <= Duration::zero()) throw ConfigError("window must be positive");
}

}  // namespace hlem
