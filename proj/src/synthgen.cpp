#include "hlem/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <random>

namespace hlem::synth {
namespace {

using nlohmann::json;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }
  bool bernoulli(double p) { return uniform() < p; }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }
  /// Knuth's multiplicative method; mean is bounded by validate().
  std::size_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

std::size_t segment_position(const InjectionSpec& spec, const Injection& inj) {
  for (std::size_t i = 0; i + 1 < spec.activities.size(); ++i) {
    if (spec.activities[i] == inj.from && spec.activities[i + 1] == inj.to) return i;
  }
  throw ConfigError("injection segment (" + inj.from + ", " + inj.to +
                    ") is not a step of the base process");
}

std::string case_name(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%06zu", n);
  return buf;
}

class Generator {
 public:
  Generator(const InjectionSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
    truth_.seed = seed;
    width_ms_ = static_cast<double>(spec.window_width.count());
  }

  Generated run() {
    for (std::int64_t w = 0; w < spec_.num_windows; ++w) {
      const std::size_t arrivals = rng_.poisson(spec_.arrivals_per_window);
      for (std::size_t k = 0; k < arrivals; ++k) base_case(w);
    }
    for (const Injection& inj : spec_.injections) inject(inj);
    Generated out;
    out.log = EventLog::from_events(std::move(events_), {});
    out.truth = std::move(truth_);
    return out;
  }

 private:
  Timestamp window_start(WindowIndex w) const { return spec_.origin + w * spec_.window_width; }
  Timestamp at(WindowIndex w, double fraction) const {
    return window_start(w) + Duration{static_cast<std::int64_t>(std::llround(fraction * width_ms_))};
  }
  Duration step_duration() {
    const double ms = rng_.exponential(spec_.mean_step_fraction * width_ms_);
    return std::max(kTick, Duration{static_cast<std::int64_t>(std::llround(ms))});
  }
  std::string resource(std::size_t r) const { return "R" + std::to_string(r + 1); }
  std::size_t other_resource(std::size_t r) {
    const std::size_t pick = rng_.below(spec_.resource_pool - 1);
    return pick >= r ? pick + 1 : pick;
  }
  std::size_t next_resource(std::size_t r) {
    if (spec_.resource_pool < 2 || rng_.bernoulli(spec_.same_resource_probability)) return r;
    return other_resource(r);
  }

  void emit(const std::string& case_id, const std::string& activity, std::size_t res, Timestamp t) {
    Event e;
    e.id = std::to_string(events_.size());
    e.case_id = case_id;
    e.activity = activity;
    e.resource = resource(res);
    e.time = t;
    events_.push_back(std::move(e));
  }

  const std::string& outcome(std::optional<double> unsuccessful) {
    const double p = unsuccessful.value_or(spec_.base_unsuccessful);
    return rng_.bernoulli(p) ? spec_.failure_activity : spec_.success_activity;
  }

  void base_case(WindowIndex w) {
    const std::string id = case_name(next_case_++);
    std::vector<std::string> route = spec_.activities;
    if (spec_.ping_pong_index && rng_.bernoulli(spec_.ping_pong_probability)) {
      const std::size_t i = *spec_.ping_pong_index;
      route.insert(route.begin() + static_cast<std::ptrdiff_t>(i + 2),
                   {spec_.activities[i], spec_.activities[i + 1]});
    }
    Timestamp t = at(w, rng_.uniform());
    std::size_t res = rng_.below(spec_.resource_pool);
    for (const auto& activity : route) {
      emit(id, activity, res, t);
      t += step_duration();
      res = next_resource(res);
    }
    emit(id, outcome(std::nullopt), res, t);
  }

  void inject(const Injection& inj) {
    const std::size_t i = segment_position(spec_, inj);
    InjectedTruth truth{inj.type, inj.from, inj.to, Theta{inj.window}, {}};
    if (uses_window_pair(inj.type)) truth.theta = WindowPair{inj.window, inj.exit_window};

    for (std::size_t k = 0; k < inj.magnitude; ++k) {
      const std::string id = case_name(next_case_++);
      truth.cases.push_back(id);

      Timestamp t_from;
      Timestamp t_to;
      switch (inj.type) {
        case FeatureType::enter:
          t_from = at(inj.window, rng_.uniform(0.3, 0.6));
          t_to = t_from + step_duration();
          break;
        case FeatureType::exit:
        case FeatureType::workload:
        case FeatureType::handover: {
          t_to = at(inj.window, rng_.uniform(0.5, 0.8));
          const Duration back = std::min(step_duration(),
                                         Duration{static_cast<std::int64_t>(0.2 * width_ms_)});
          t_from = t_to - std::max(kTick, back);
          break;
        }
        case FeatureType::batch:
        case FeatureType::delay:
          t_from = at(inj.window, rng_.uniform(0.3, 0.6));
          if (inj.exit_window == inj.window) {
            t_to = at(inj.window, rng_.uniform(0.65, 0.95));
          } else {
            t_to = at(inj.exit_window, rng_.uniform(0.1, 0.9));
          }
          break;
      }

      std::size_t res_from = rng_.below(spec_.resource_pool);
      std::size_t res_to = next_resource(res_from);
      if (inj.type == FeatureType::workload) res_to = res_from;
      if (inj.type == FeatureType::handover) res_to = other_resource(res_from);

      // Predecessors sit shortly before the pinned step, inside 0.25 windows.
      const double gap = 0.25 * width_ms_ / static_cast<double>(i + 1);
      std::size_t res = res_from;
      for (std::size_t j = 0; j < i; ++j) {
        const auto offset = static_cast<std::int64_t>(std::llround(gap * static_cast<double>(i - j)));
        const std::size_t r = rng_.below(spec_.resource_pool);
        emit(id, spec_.activities[j], r, t_from - Duration{offset});
      }
      emit(id, spec_.activities[i], res_from, t_from);
      emit(id, spec_.activities[i + 1], res_to, t_to);
      Timestamp t = t_to;
      res = res_to;
      for (std::size_t j = i + 2; j < spec_.activities.size(); ++j) {
        t += step_duration();
        res = next_resource(res);
        emit(id, spec_.activities[j], res, t);
      }
      t += step_duration();
      emit(id, outcome(inj.unsuccessful_probability), next_resource(res), t);
    }
    truth_.injections.push_back(std::move(truth));
  }

  const InjectionSpec& spec_;
  Rng rng_;
  double width_ms_ = 0.0;
  std::size_t next_case_ = 0;
  std::vector<Event> events_;
  GroundTruth truth_;
};

json theta_json(const Theta& theta) {
  if (const auto* w = std::get_if<WindowIndex>(&theta)) return json::array({*w});
  const auto& p = std::get<WindowPair>(theta);
  return json::array({p.first, p.second});
}

Theta theta_from_json(const json& j) {
  if (j.size() == 1) return j[0].get<WindowIndex>();
  if (j.size() == 2) return WindowPair{j[0].get<WindowIndex>(), j[1].get<WindowIndex>()};
  throw ParseError("theta must have one or two windows");
}

FeatureType type_from_json(const json& j) {
  const auto name = j.get<std::string>();
  const auto type = parse_feature_type(name);
  if (!type) throw ConfigError("unknown feature type '" + name + "'");
  return *type;
}

Duration duration_from_json(const json& j) {
  const auto text = j.get<std::string>();
  const auto d = parse_duration(text);
  if (!d) throw ConfigError("invalid duration '" + text + "'");
  return *d;
}

}  // namespace

void validate(const InjectionSpec& spec) {
  if (spec.activities.size() < 2) throw ConfigError("base process needs at least two activities");
  if (spec.num_windows < 1) throw ConfigError("num_windows must be positive");
  if (spec.window_width <= Duration::zero()) throw ConfigError("window width must be positive");
  if (!(spec.arrivals_per_window >= 0.0 && spec.arrivals_per_window <= 500.0)) {
    throw ConfigError("arrivals_per_window must lie in [0, 500]");
  }
  if (!(spec.mean_step_fraction > 0.0)) throw ConfigError("mean_step_fraction must be positive");
  if (spec.resource_pool < 1) throw ConfigError("resource_pool must be at least 1");
  const auto probability = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
  };
  probability(spec.base_unsuccessful, "base_unsuccessful");
  probability(spec.same_resource_probability, "same_resource_probability");
  probability(spec.ping_pong_probability, "ping_pong_probability");
  if (spec.ping_pong_index && *spec.ping_pong_index + 1 >= spec.activities.size()) {
    throw ConfigError("ping_pong_index must name a segment of the base process");
  }

  std::map<WindowIndex, double> load;
  for (const Injection& inj : spec.injections) {
    segment_position(spec, inj);
    if (inj.magnitude == 0) throw ConfigError("injection magnitude must be positive");
    if (inj.window < 0 || inj.window >= spec.num_windows) {
      throw ConfigError("injection window outside the log horizon");
    }
    if (uses_window_pair(inj.type)) {
      if (inj.exit_window < inj.window || inj.exit_window >= spec.num_windows) {
        throw ConfigError("injection exit_window must lie in [window, num_windows)");
      }
      if (inj.type == FeatureType::delay && inj.exit_window == inj.window) {
        throw ConfigError("delay injections need exit_window > window");
      }
    }
    if (inj.type == FeatureType::handover && spec.resource_pool < 2) {
      throw ConfigError("handover injections need at least two resources");
    }
    if (inj.unsuccessful_probability) probability(*inj.unsuccessful_probability, "unsuccessful_probability");
    load[inj.window] += static_cast<double>(inj.magnitude);
  }
  for (const auto& [w, injected] : load) {
    if (injected + spec.arrivals_per_window > static_cast<double>(spec.max_arrivals_per_window)) {
      throw ConfigError("injection exceeds the arrivals allowed in window " + std::to_string(w));
    }
  }
}

Generated generate_log(const InjectionSpec& spec, std::uint64_t seed) {
  validate(spec);
  return Generator(spec, seed).run();
}

InjectionSpec read_spec(std::istream& in) {
  InjectionSpec spec;
  json j;
  try {
    j = json::parse(in);
    if (j.contains("activities")) spec.activities = j["activities"].get<std::vector<std::string>>();
    if (j.contains("ping_pong_index")) spec.ping_pong_index = j["ping_pong_index"].get<std::size_t>();
    spec.ping_pong_probability = j.value("ping_pong_probability", spec.ping_pong_probability);
    spec.success_activity = j.value("success_activity", spec.success_activity);
    spec.failure_activity = j.value("failure_activity", spec.failure_activity);
    spec.base_unsuccessful = j.value("base_unsuccessful", spec.base_unsuccessful);
    spec.num_windows = j.value("num_windows", spec.num_windows);
    if (j.contains("window_width")) spec.window_width = duration_from_json(j["window_width"]);
    if (j.contains("origin")) {
      const auto text = j["origin"].get<std::string>();
      const auto t = parse_timestamp(text);
      if (!t) throw ConfigError("invalid origin '" + text + "'");
      spec.origin = *t;
    }
    spec.arrivals_per_window = j.value("arrivals_per_window", spec.arrivals_per_window);
    spec.mean_step_fraction = j.value("mean_step_fraction", spec.mean_step_fraction);
    spec.resource_pool = j.value("resource_pool", spec.resource_pool);
    spec.same_resource_probability =
        j.value("same_resource_probability", spec.same_resource_probability);
    spec.max_arrivals_per_window = j.value("max_arrivals_per_window", spec.max_arrivals_per_window);
    for (const auto& item : j.value("injections", json::array())) {
      Injection inj;
      inj.type = type_from_json(item.at("type"));
      inj.from = item.at("segment").at(0).get<std::string>();
      inj.to = item.at("segment").at(1).get<std::string>();
      inj.window = item.at("window").get<WindowIndex>();
      inj.exit_window = item.value("exit_window", inj.window);
      inj.magnitude = item.at("magnitude").get<std::size_t>();
      if (item.contains("unsuccessful_probability")) {
        inj.unsuccessful_probability = item["unsuccessful_probability"].get<double>();
      }
      spec.injections.push_back(std::move(inj));
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("invalid generator spec: ") + ex.what());
  }
  return spec;
}

void write_spec(std::ostream& out, const InjectionSpec& spec) {
  json j = {{"activities", spec.activities},
            {"ping_pong_probability", spec.ping_pong_probability},
            {"success_activity", spec.success_activity},
            {"failure_activity", spec.failure_activity},
            {"base_unsuccessful", spec.base_unsuccessful},
            {"num_windows", spec.num_windows},
            {"window_width", format_duration(spec.window_width)},
            {"origin", format_timestamp(spec.origin)},
            {"arrivals_per_window", spec.arrivals_per_window},
            {"mean_step_fraction", spec.mean_step_fraction},
            {"resource_pool", spec.resource_pool},
            {"same_resource_probability", spec.same_resource_probability},
            {"max_arrivals_per_window", spec.max_arrivals_per_window}};
  if (spec.ping_pong_index) j["ping_pong_index"] = *spec.ping_pong_index;
  json injections = json::array();
  for (const auto& inj : spec.injections) {
    json item = {{"type", std::string(to_string(inj.type))},
                 {"segment", {inj.from, inj.to}},
                 {"window", inj.window},
                 {"magnitude", inj.magnitude}};
    if (uses_window_pair(inj.type)) item["exit_window"] = inj.exit_window;
    if (inj.unsuccessful_probability) item["unsuccessful_probability"] = *inj.unsuccessful_probability;
    injections.push_back(std::move(item));
  }
  j["injections"] = std::move(injections);
  out << j.dump(2) << '\n';
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  json items = json::array();
  for (const auto& t : truth.injections) {
    items.push_back({{"type", std::string(to_string(t.type))},
                     {"segment", {t.from, t.to}},
                     {"theta", theta_json(t.theta)},
                     {"cases", t.cases}});
  }
  out << json{{"seed", truth.seed}, {"injections", items}}.dump(2) << '\n';
}

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  try {
    const json j = json::parse(in);
    truth.seed = j.value("seed", std::uint64_t{0});
    for (const auto& item : j.at("injections")) {
      truth.injections.push_back({type_from_json(item.at("type")),
                                  item.at("segment").at(0).get<std::string>(),
                                  item.at("segment").at(1).get<std::string>(),
                                  theta_from_json(item.at("theta")),
                                  item.at("cases").get<std::vector<std::string>>()});
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("invalid ground truth: ") + ex.what());
  }
  return truth;
}

}  // namespace hlem::synth
