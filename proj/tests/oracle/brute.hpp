#pragma once

// Brute-force reference implementations. Everything here works from the raw
// event list and names only, with std::set bookkeeping and exhaustive scans.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hlem/detection.hpp"

namespace oracle {

using hlem::EventRef;
using hlem::FeatureType;
using hlem::Theta;
using hlem::Timestamp;

using StepKey = std::pair<EventRef, EventRef>;
using SegKey = std::pair<std::string, std::string>;

struct OStep {
  EventRef first;
  EventRef second;
  SegKey segment;
  std::int64_t w_in;
  std::int64_t w_out;
  bool staffed;
  bool same_resource;
};

struct Model {
  const hlem::EventLog* log = nullptr;
  std::vector<OStep> steps;
  std::set<SegKey> segments;  // retained
  std::int64_t w_min = 0;
  std::int64_t w_max = -1;
};

/// `retained` empty keeps every segment.
Model build(const hlem::EventLog& log, hlem::Duration width, Timestamp origin,
            const std::set<std::string>& blacklist, const std::set<SegKey>& retained = {});

/// Smallest k in 1..n with k > p*n/100, capped at n; value of sorted[k-1].
double nearest_rank(std::vector<double> values, double p);

std::set<StepKey> pattern(const Model& m, FeatureType type, const SegKey& s, const Theta& theta,
                          const std::map<SegKey, std::int64_t>& deltas);

std::map<SegKey, std::int64_t> deltas(const Model& m, double q);

using ThrKey = std::pair<FeatureType, SegKey>;
std::map<ThrKey, double> thresholds(const Model& m, const std::vector<FeatureType>& types, double p,
                                    const std::map<SegKey, std::int64_t>& deltas);

struct OHle {
  FeatureType type;
  SegKey segment;
  Theta theta;
  std::set<StepKey> steps;
  std::set<std::string> cases;
  Timestamp s0, s1, e0, e1;  // start and end spreads
  friend bool operator==(const OHle&, const OHle&) = default;
};

std::vector<OHle> hles(const Model& m, const std::vector<FeatureType>& types,
                       const std::map<ThrKey, double>& thr,
                       const std::map<SegKey, std::int64_t>& deltas);

/// Same shape from the production detector's output, for comparison.
OHle to_oracle(const hlem::HighLevelEvent& h, const hlem::StepIndex& idx);

bool edge(const OHle& a, const OHle& b, double lambda);
std::set<std::pair<std::size_t, std::size_t>> edges(const std::vector<OHle>& h, double lambda);

struct OEpisode {
  std::vector<std::size_t> members;
  std::set<std::string> common;
  friend bool operator==(const OEpisode&, const OEpisode&) = default;
};

/// Every sequence of distinct HLEs of length 1..max_len whose consecutive
/// pairs are edges and whose case condition holds, in lexicographic order.
std::vector<OEpisode> episodes(const std::vector<OHle>& h, double lambda, std::size_t max_len,
                               bool min_fraction = false);

}  // namespace oracle
