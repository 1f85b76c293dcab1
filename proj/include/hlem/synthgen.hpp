#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hlem/detection.hpp"

namespace hlem::synth {

/// One labeled burst of high-level behavior. Injected cases are extra
/// arrivals whose step over `segment` is pinned to the coordinate:
///   enter     first event in `window`
///   exit      second event in `window`
///   workload  second event in `window`, same resource on both events
///   handover  second event in `window`, different resources
///   batch     first event in `window`, second in `exit_window`
///   delay     as batch; exit_window - window must be >= 1
struct Injection {
  FeatureType type = FeatureType::batch;
  std::string from;
  std::string to;
  WindowIndex window = 0;
  WindowIndex exit_window = 0;
  std::size_t magnitude = 0;
  /// Probability that an injected case ends unsuccessful; unset = baseline.
  std::optional<double> unsuccessful_probability;
};

struct InjectionSpec {
  /// Linear activity chain every case follows.
  std::vector<std::string> activities{"a", "b", "c", "d"};
  /// Optional suspend/resume style loop: after reaching activities[i + 1]
  /// a case returns to activities[i] and then to activities[i + 1] again.
  std::optional<std::size_t> ping_pong_index;
  double ping_pong_probability = 0.0;
  std::string success_activity = "A_Pending";
  std::string failure_activity = "A_Denied";
  double base_unsuccessful = 0.4;

  std::int64_t num_windows = 30;
  Duration window_width = std::chrono::days{1};
  Timestamp origin = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};
  /// Mean of the Poisson arrival count per window.
  double arrivals_per_window = 5.0;
  /// Mean step duration as a fraction of the window width (exponential).
  double mean_step_fraction = 0.15;
  std::size_t resource_pool = 6;
  double same_resource_probability = 0.5;
  /// Upper bound on the arrivals of a single window, injected cases included.
  std::size_t max_arrivals_per_window = 1000;

  std::vector<Injection> injections;
};

struct InjectedTruth {
  FeatureType type;
  std::string from;
  std::string to;
  Theta theta;
  std::vector<std::string> cases;
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<InjectedTruth> injections;
};

struct Generated {
  EventLog log;
  GroundTruth truth;
};

/// Throws ConfigError for infeasible specs.
void validate(const InjectionSpec& spec);

/// Deterministic for a given (spec, seed): std::mt19937_64 drives all
/// sampling through distribution code defined here, so output is identical
/// across standard libraries.
Generated generate_log(const InjectionSpec& spec, std::uint64_t seed);

InjectionSpec read_spec(std::istream& in);
void write_spec(std::ostream& out, const InjectionSpec& spec);
void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& in);

}  // namespace hlem::synth
