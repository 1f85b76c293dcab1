#pragma once

#include <random>
#include <string>
#include <vector>

#include "hlem/event_log.hpp"

namespace testing_support {

struct RandomLogParams {
  std::size_t max_events = 500;
  std::size_t activities = 4;
  std::size_t resources = 4;
  int days = 10;
  int max_trace = 6;
  /// Probability of an empty resource, and of the blacklisted "User_1".
  double empty_resource = 0.1;
  double blacklisted = 0.1;
};

/// Small random log: traces over a tiny alphabet with random ping-pong,
/// millisecond timestamps spread over `days` days from 2021-03-01.
inline hlem::EventLog random_log(std::uint64_t seed, const RandomLogParams& p = {}) {
  std::mt19937_64 rng(seed);
  const auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const hlem::Timestamp origin = std::chrono::sys_days{std::chrono::year{2021} / 3 / 1};
  const std::int64_t day_ms = 86'400'000;

  std::vector<hlem::Event> events;
  std::size_t c = 0;
  while (events.size() < p.max_events) {
    const int len = 2 + static_cast<int>(pick(static_cast<std::size_t>(p.max_trace - 1)));
    std::int64_t t = static_cast<std::int64_t>(uni(0.0, static_cast<double>(p.days) * 0.7) * day_ms);
    std::size_t act = pick(p.activities);
    for (int i = 0; i < len && events.size() < p.max_events; ++i) {
      hlem::Event e;
      e.id = "e" + std::to_string(events.size());
      e.case_id = "case" + std::to_string(c);
      e.activity = std::string(1, static_cast<char>('a' + act));
      const double r = uni(0.0, 1.0);
      if (r < p.empty_resource) e.resource = "";
      else if (r < p.empty_resource + p.blacklisted) e.resource = "User_1";
      else e.resource = "R" + std::to_string(pick(p.resources));
      e.time = origin + std::chrono::milliseconds(t);
      events.push_back(std::move(e));
      t += 1 + static_cast<std::int64_t>(uni(0.0, 1.6) * uni(0.0, 1.0) * day_ms);
      act = uni(0.0, 1.0) < 0.7 ? (act + 1) % p.activities : pick(p.activities);
    }
    ++c;
  }
  return hlem::EventLog::from_events(std::move(events), {});
}

}  // namespace testing_support
