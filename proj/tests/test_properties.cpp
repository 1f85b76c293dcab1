#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "hlem/artifacts.hpp"
#include "hlem/correlation.hpp"
#include "hlem/synthgen.hpp"
#include "random_log.hpp"

using namespace hlem;
using testing_support::random_log;

namespace {

const std::vector<FeatureType> kAll(kAllFeatureTypes.begin(), kAllFeatureTypes.end());

struct Run {
  explicit Run(std::uint64_t seed)
      : log(random_log(seed, {.max_events = 300 + seed % 5 * 40})),
        idx(StepIndex::build(log, Framing::for_log(log), IndexOptions{{"User_1"}})),
        deltas(compute_deltas(idx, 70)) {}
  Run(const Run&) = delete;
  Run& operator=(const Run&) = delete;

  EventLog log;
  StepIndex idx;
  DelayThresholds deltas;
};

std::unique_ptr<Run> indexed(std::uint64_t seed) { return std::make_unique<Run>(seed); }

std::vector<HighLevelEvent> detect(const Run& r, double p) {
  ThresholdOptions o;
  o.percentile = p;
  return detect_hles(r.idx, kAll, compute_thresholds(r.idx, kAll, r.deltas, o), r.deltas);
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const PropagationGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (auto j : g.successors[i]) out.insert({i, j});
  }
  return out;
}

constexpr int kSeeds = 25;

}  // namespace

TEST(Properties, EnterExitBatchConserveSteps) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    for (Segment s : r->idx.segments()) {
      const double total = static_cast<double>(r->idx.steps_of(s).size());
      double enter = 0, exit = 0, batch = 0;
      for (WindowIndex w = r->idx.first_window(); w <= r->idx.last_window(); ++w) {
        enter += pattern_value(FeatureType::enter, {s, w}, r->idx);
        exit += pattern_value(FeatureType::exit, {s, w}, r->idx);
        for (WindowIndex w2 = w; w2 <= r->idx.last_window(); ++w2) {
          batch += pattern_value(FeatureType::batch, {s, WindowPair{w, w2}}, r->idx);
        }
      }
      ASSERT_EQ(enter, total) << "seed " << seed;
      ASSERT_EQ(exit, total);
      ASSERT_EQ(batch, total);
    }
  }
}

TEST(Properties, WorkloadAndHandoverPartitionStaffedExits) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    for (Segment s : r->idx.segments()) {
      for (WindowIndex w = r->idx.first_window(); w <= r->idx.last_window(); ++w) {
        const auto ex = evaluate_pattern(FeatureType::exit, {s, w}, r->idx).steps;
        const auto wl = evaluate_pattern(FeatureType::workload, {s, w}, r->idx).steps;
        const auto ho = evaluate_pattern(FeatureType::handover, {s, w}, r->idx).steps;
        std::set<StepId> exits(ex.begin(), ex.end()), both;
        for (auto id : wl) {
          ASSERT_TRUE(exits.contains(id));
          both.insert(id);
        }
        for (auto id : ho) {
          ASSERT_TRUE(exits.contains(id));
          ASSERT_TRUE(both.insert(id).second) << "step in workload and handover";
        }
        std::size_t staffed = 0;
        for (auto id : ex) staffed += r->idx.staffed(id);
        ASSERT_EQ(both.size(), staffed);
      }
    }
  }
}

TEST(Properties, DelayIsSubsetOfBatch) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    for (Segment s : r->idx.segments()) {
      for (const auto& [pair, steps] : r->idx.occupied_pairs(s)) {
        const auto d = pattern_value(FeatureType::delay, {s, pair}, r->idx, r->deltas);
        const auto b = pattern_value(FeatureType::batch, {s, pair}, r->idx);
        ASSERT_TRUE(d == 0 || d == b);
        ASSERT_EQ(d == b, pair.second - pair.first >= r->deltas.at(s));
      }
    }
  }
}

TEST(Properties, HlesMeetTheirThreshold) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto thr = compute_thresholds(r->idx, kAll, r->deltas);
    for (const auto& h : detect_hles(r->idx, kAll, thr, r->deltas)) {
      ASSERT_GE(h.value, std::max(1.0, thr.at(h.type, h.coordinate.segment)));
      ASSERT_EQ(h.value, static_cast<double>(h.steps.size()));
      ASSERT_LE(h.cases.count(), h.steps.size());
      ASSERT_LE(h.start_spread.first, h.start_spread.last);
      ASSERT_LE(h.start_spread.first, h.end_spread.first);
    }
  }
}

TEST(Properties, HigherPercentileNeverAddsHles) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    std::optional<std::set<std::pair<FeatureType, Coordinate>>> previous;
    for (double p : {0.0, 30.0, 50.0, 75.0, 90.0, 95.0, 100.0}) {
      std::set<std::pair<FeatureType, Coordinate>> now;
      for (const auto& h : detect(*r, p)) now.insert({h.type, h.coordinate});
      if (previous) {
        ASSERT_TRUE(std::includes(previous->begin(), previous->end(), now.begin(), now.end()))
            << "seed " << seed << " p " << p;
      }
      previous = std::move(now);
    }
  }
}

TEST(Properties, JaccardIsSymmetric) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto hles = detect(*r, 75);
    for (std::size_t i = 0; i < hles.size(); ++i) {
      for (std::size_t j = i; j < hles.size(); ++j) {
        ASSERT_EQ(jaccard(hles[i].cases, hles[j].cases), jaccard(hles[j].cases, hles[i].cases));
        const double v = jaccard(hles[i].cases, hles[j].cases);
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
    }
  }
}

TEST(Properties, LargerLambdaPrunesEdgesAndEpisodes) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto hles = detect(*r, 75);
    std::optional<std::set<std::pair<std::size_t, std::size_t>>> prev_edges;
    std::optional<std::set<std::vector<std::size_t>>> prev_eps;
    for (double lambda : {0.0, 0.1, 0.3, 0.5, 0.7, 1.0}) {
      const auto g = build_propagation_graph(hles, lambda);
      const auto edges = edge_set(g);
      EpisodeOptions o;
      o.lambda = lambda;
      std::set<std::vector<std::size_t>> eps;
      for (const auto& e : enumerate_episodes(g, hles, o)) eps.insert(e.hles);
      if (prev_edges) {
        ASSERT_TRUE(std::includes(prev_edges->begin(), prev_edges->end(), edges.begin(), edges.end()));
        ASSERT_TRUE(std::includes(prev_eps->begin(), prev_eps->end(), eps.begin(), eps.end()));
      }
      prev_edges = edges;
      prev_eps = std::move(eps);
    }
  }
}

TEST(Properties, EpisodesClosedUnderSubChains) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto hles = detect(*r, 75);
    const auto g = build_propagation_graph(hles, 0.3);
    EpisodeOptions o;
    o.lambda = 0.3;
    const auto eps = enumerate_episodes(g, hles, o);
    std::set<std::vector<std::size_t>> all;
    for (const auto& e : eps) all.insert(e.hles);
    for (const auto& e : eps) {
      for (std::size_t b = 0; b < e.hles.size(); ++b) {
        for (std::size_t len = 1; b + len <= e.hles.size(); ++len) {
          std::vector<std::size_t> sub(e.hles.begin() + b, e.hles.begin() + b + len);
          ASSERT_TRUE(all.contains(sub));
        }
      }
      // common cases really are shared by every member
      for (CaseIndex c : e.common_cases) {
        for (auto m : e.hles) ASSERT_TRUE(hles[m].cases.contains(c));
      }
      std::set<std::size_t> distinct(e.hles.begin(), e.hles.end());
      ASSERT_EQ(distinct.size(), e.hles.size());
    }
  }
}

TEST(Properties, PathFrequenciesSumToEpisodes) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto hles = detect(*r, 75);
    const auto g = build_propagation_graph(hles, 0.5);
    const auto eps = enumerate_episodes(g, hles, {});
    const auto paths = project_paths(eps, hles);
    std::size_t total = 0;
    for (const auto& p : paths) {
      total += p.frequency;
      ASSERT_EQ(p.frequency, p.episodes.size());
      for (auto e : p.episodes) {
        ASSERT_EQ(eps[e].hles.size(), p.steps.size());
        for (std::size_t k = 0; k < p.steps.size(); ++k) {
          ASSERT_EQ(hles[eps[e].hles[k]].activity(), p.steps[k]);
        }
      }
    }
    ASSERT_EQ(total, eps.size());
  }
}

TEST(Properties, ContingencyColumnsResumToPartition) {
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const auto r = indexed(seed);
    const auto hles = detect(*r, 75);
    const auto g = build_propagation_graph(hles, 0.5);
    const auto eps = enumerate_episodes(g, hles, {});
    const auto paths = project_paths(eps, hles);
    for (const AttributeSpec& spec : {AttributeSpec{OutcomeAttribute{"d"}},
                                      AttributeSpec{ThroughputAttribute{{std::chrono::days{1},
                                                                         std::chrono::days{2}}}}}) {
      const auto binning = AttributeBinning::create(spec, r->log);
      for (const auto& p : paths) {
        const auto t = test_path(p, eps, r->log, binning);
        const auto part = participating_cases(p, eps);
        const auto non = non_participating_cases(p.steps, r->log, part);
        ASSERT_EQ(t.participating, part.size());
        ASSERT_EQ(t.non_participating, non.size());
        std::vector<CaseIndex> overlap;
        std::set_intersection(part.begin(), part.end(), non.begin(), non.end(),
                              std::back_inserter(overlap));
        ASSERT_TRUE(overlap.empty());
        if (t.table.counts.empty()) continue;
        ASSERT_EQ(t.table.column_total(0), part.size());
        ASSERT_EQ(t.table.column_total(1), non.size());
        if (t.result) {
          ASSERT_GE(t.result->statistic, 0.0);
          ASSERT_GE(t.result->p_value, 0.0);
          ASSERT_LE(t.result->p_value, 1.0);
        }
      }
    }
  }
}

TEST(Properties, BhQValuesDominatePAndKeepOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(1 + rng() % 40);
    for (auto& x : p) x = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto q = benjamini_hochberg(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_GE(q[i], p[i]);
      ASSERT_LE(q[i], 1.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[i] < p[j]) ASSERT_LE(q[i], q[j]);
      }
    }
  }
}

TEST(Properties, EndToEndDeterminism) {
  for (std::uint64_t seed : {3u, 8u}) {
    const auto once = [&] {
      synth::InjectionSpec spec;
      spec.injections.push_back({FeatureType::batch, "b", "c", 4, 6, 20, 0.9});
      const auto g = synth::generate_log(spec, seed);
      const auto idx = StepIndex::build(g.log, Framing::for_log(g.log));
      const auto deltas = compute_deltas(idx, 70);
      const auto hles = detect_hles(idx, kAll, compute_thresholds(idx, kAll, deltas), deltas);
      const auto eps = enumerate_episodes(build_propagation_graph(hles, 0.5), hles, {});
      const auto paths = project_paths(eps, hles);
      const auto binning = AttributeBinning::create(OutcomeAttribute{}, g.log);
      std::vector<PathTest> tests;
      for (const auto& p : paths) {
        tests.push_back(test_path(p, eps, g.log, binning));
        tests.back().label = path_label(p.steps, g.log);
      }
      const auto ranked = rank_paths(tests, {});
      std::ostringstream out;
      write_hles(out, hles, g.log);
      write_episodes(out, eps, hles, g.log);
      write_report_csv(out, ranked, binning.labels());
      return out.str();
    };
    EXPECT_EQ(once(), once());
  }
}

TEST(Properties, PercentileHundredFiresOnlyPopulationMaxima) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto g = synth::generate_log(synth::InjectionSpec{}, seed);
    const auto idx = StepIndex::build(g.log, Framing::for_log(g.log));
    const auto deltas = compute_deltas(idx, 70);
    ThresholdOptions o;
    o.percentile = 100;
    const auto thr = compute_thresholds(idx, kAll, deltas, o);
    for (const auto& h : detect_hles(idx, kAll, thr, deltas)) {
      const auto pop = threshold_population(h.type, h.coordinate.segment, idx, deltas, o);
      ASSERT_EQ(h.value, *std::max_element(pop.values.begin(), pop.values.end()));
    }
  }
}
