#include "hlem/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hlem {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read '" + p.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

fs::path out_dir(const RunConfig& config) {
  const fs::path dir(config.out);
  fs::create_directories(dir);
  return dir;
}

std::string keep_keys(const RunConfig& config, std::initializer_list<std::string_view> prefixes) {
  std::istringstream in(serialize_config(config));
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    for (auto p : prefixes) {
      if (line.starts_with(p)) {
        out += line;
        out += '\n';
        break;
      }
    }
  }
  return out;
}

std::string read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestFile, std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_manifest(const fs::path& dir, const std::string& text) {
  auto out = open_out(dir / kManifestFile);
  out << text;
}

void report_warnings(const Diagnostics& diag, std::ostream& err) {
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

void write_detection(const fs::path& dir, const EventLog& log, const Detection& d,
                     const RunConfig& config) {
  {
    auto out = open_out(dir / kHlesFile);
    write_hles(out, d.hles, log);
  }
  {
    auto out = open_out(dir / kSummaryFile);
    write_summary_csv(out, d.hles, config.types, log);
  }
  {
    auto out = open_out(dir / kThresholdsFile);
    write_thresholds_csv(out, d.thresholds, d.delays, log);
  }
}

void write_linkage(const fs::path& dir, const EventLog& log, std::span<const HighLevelEvent> hles,
                   const Linkage& l) {
  {
    auto out = open_out(dir / kEpisodesFile);
    write_episodes(out, l.episodes, hles, log);
  }
  {
    auto out = open_out(dir / kPathsFile);
    write_paths(out, l.paths, log);
  }
}

void write_correlation(const fs::path& dir, const Correlation& c) {
  {
    auto out = open_out(dir / kReportCsvFile);
    write_report_csv(out, c.ranked, c.bins);
  }
  {
    auto out = open_out(dir / kReportJsonFile);
    write_report_json(out, c.ranked, c.bins, c.attribute);
  }
}

void print_report(std::ostream& out, const Correlation& c, std::size_t num_hles,
                  std::size_t num_episodes) {
  out << "high-level events: " << num_hles << '\n';
  out << "episodes: " << num_episodes << '\n';
  out << "attribute: " << c.attribute << '\n';
  out << "paths tested: " << c.ranked.size() << '\n';
  std::size_t shown = 0;
  for (std::size_t i = 0; i < c.ranked.size() && shown < 20; ++i) {
    const auto& r = c.ranked[i];
    if (!r.test.result) continue;
    ++shown;
    out << std::setw(3) << i + 1 << "  " << r.test.label << "\n     freq " << r.test.path.frequency
        << ", |C_p| " << r.test.participating << ", |C_not_p| " << r.test.non_participating
        << ", chi2 " << std::setprecision(4) << r.test.result->statistic << ", dof "
        << r.test.result->dof << ", p " << std::setprecision(3) << r.test.result->p_value
        << (r.significant ? "  *" : "") << '\n';
  }
}

// Everything a downstream stage needs, from persisted artifacts when they
// match the config, otherwise recomputed and persisted.
struct Upstream {
  std::vector<HighLevelEvent> hles;
  std::optional<Linkage> linkage;
};

Upstream obtain_upstream(const fs::path& dir, const EventLog& log, const RunConfig& config,
                         bool need_linkage, bool fresh, Diagnostics* diag) {
  Upstream up;
  const std::string manifest = read_manifest(dir);
  const std::string det_key = detect_fingerprint(config);
  const std::string link_key = link_fingerprint(config);
  const bool detect_ok = !fresh && manifest.starts_with(det_key) && fs::exists(dir / kHlesFile);
  if (detect_ok) {
    auto in = open_in(dir / kHlesFile);
    up.hles = read_hles(in, log);
  } else {
    Detection d = run_detection(log, config, diag);
    write_detection(dir, log, d, config);
    write_manifest(dir, det_key);
    up.hles = std::move(d.hles);
  }
  if (!need_linkage) return up;

  const bool link_ok = detect_ok && manifest == det_key + link_key && fs::exists(dir / kEpisodesFile);
  if (link_ok) {
    auto in = open_in(dir / kEpisodesFile);
    up.linkage = linkage_from_episodes(read_episodes(in, up.hles, log), up.hles, config);
  } else {
    up.linkage = run_linkage(up.hles, config);
    write_linkage(dir, log, up.hles, *up.linkage);
    write_manifest(dir, det_key + link_key);
  }
  return up;
}

}  // namespace

EventLog load_log(const RunConfig& config, Diagnostics* diag) {
  if (config.input.empty()) throw ConfigError("no input log given");
  auto in = open_in(config.input);
  switch (config.format) {
    case InputFormat::csv:
      return parse_csv(in, config.csv, config.load, diag);
    case InputFormat::xes:
      return parse_xes(in, config.load, diag);
    case InputFormat::jsonl:
      return read_jsonl(in, config.load, diag);
  }
  throw ConfigError("unknown input format");
}

Detection run_detection(const EventLog& log, const RunConfig& config, Diagnostics* diag) {
  const Framing framing = config.origin ? Framing(config.window, *config.origin)
                                        : Framing::for_log(log, config.window);
  const StepTable table = derive_steps(log);
  std::vector<Segment> segments =
      config.top_k == 0 || table.segments.empty()
          ? table.segments
          : select_top_segments(table, config.top_k, diag);
  IndexOptions io;
  io.resource_blacklist = config.resource_blacklist;
  StepIndex index = StepIndex::build(log, framing, segments, io);

  DelayThresholds delays;
  if (std::find(config.types.begin(), config.types.end(), FeatureType::delay) != config.types.end()) {
    delays = compute_deltas(index, config.delay_percentile);
  }
  ThresholdOptions to;
  to.percentile = config.percentile;
  to.per_type_percentile = config.per_type_percentile;
  to.include_empty_windows = config.include_empty_windows;
  to.include_empty_pairs = config.include_empty_pairs;
  ThresholdTable thresholds = compute_thresholds(index, config.types, delays, to);
  std::vector<HighLevelEvent> hles = detect_hles(index, config.types, thresholds, delays);
  return Detection{framing,          std::move(segments),   std::move(index),
                   std::move(delays), std::move(thresholds), std::move(hles)};
}

Linkage run_linkage(std::span<const HighLevelEvent> hles, const RunConfig& config) {
  Linkage l;
  l.graph = build_propagation_graph(hles, config.lambda);
  EpisodeOptions eo;
  eo.lambda = config.lambda;
  eo.max_len = config.max_len;
  eo.condition = config.episode_condition;
  l.episodes = enumerate_episodes(l.graph, hles, eo);
  l.paths = project_paths(l.episodes, hles, config.min_path_freq);
  return l;
}

Linkage linkage_from_episodes(std::vector<Episode> episodes, std::span<const HighLevelEvent> hles,
                              const RunConfig& config) {
  Linkage l;
  l.episodes = std::move(episodes);
  l.paths = project_paths(l.episodes, hles, config.min_path_freq);
  return l;
}

Correlation run_correlation(const EventLog& log, const Linkage& linkage, const RunConfig& config) {
  const AttributeSpec spec = config.attribute.value_or(AttributeSpec{OutcomeAttribute{}});
  const AttributeBinning binning = AttributeBinning::create(spec, log);
  std::vector<PathTest> tests;
  tests.reserve(linkage.paths.size());
  for (const auto& p : linkage.paths) {
    PathTest t = test_path(p, linkage.episodes, log, binning, config.alpha);
    t.label = path_label(p.steps, log);
    tests.push_back(std::move(t));
  }
  RankOptions ro;
  ro.alpha = config.alpha;
  ro.min_freq = config.min_path_freq;
  ro.benjamini_hochberg = config.benjamini_hochberg;
  return Correlation{format_attribute_spec(spec), binning.labels(),
                     rank_paths(std::move(tests), ro)};
}

Correlation run_fixture_correlation(const PartitionFixture& fixture, const RunConfig& config) {
  RankOptions ro;
  ro.alpha = config.alpha;
  ro.min_freq = config.min_path_freq;
  ro.benjamini_hochberg = config.benjamini_hochberg;
  return Correlation{fixture.attribute, fixture_bin_labels(fixture),
                     rank_paths(test_fixture(fixture, config.alpha), ro)};
}

std::string detect_fingerprint(const RunConfig& config) {
  return keep_keys(config, {"input ", "format ", "csv.", "duplicates ", "lifecycle_case ",
                            "window ", "origin ", "types ", "top_k ", "resource_blacklist ",
                            "percentile", "delay_percentile ", "include_empty_"});
}

std::string link_fingerprint(const RunConfig& config) {
  return keep_keys(config, {"lambda ", "max_len ", "min_path_freq ", "episode_condition "});
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_generate(const GenerateOptions& options, const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    synth::InjectionSpec spec;
    if (!options.spec.empty()) {
      auto in = open_in(options.spec);
      spec = synth::read_spec(in);
    }
    const synth::Generated g = synth::generate_log(spec, options.seed);
    const fs::path dir = out_dir(config);
    {
      auto out = open_out(dir / kLogFile);
      write_csv(out, g.log);
    }
    {
      auto out = open_out(dir / kTruthFile);
      synth::write_ground_truth(out, g.truth);
    }
    return 0;
  });
}

int cmd_detect(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    Diagnostics diag;
    const EventLog log = load_log(config, &diag);
    if (log.empty()) diag.warn("input log has no events");
    const fs::path dir = out_dir(config);
    const Detection d = run_detection(log, config, &diag);
    write_detection(dir, log, d, config);
    write_manifest(dir, detect_fingerprint(config));
    report_warnings(diag, err);
    return 0;
  });
}

int cmd_link(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    Diagnostics diag;
    const EventLog log = load_log(config, &diag);
    if (log.empty()) diag.warn("input log has no events");
    obtain_upstream(out_dir(config), log, config, true, false, &diag);
    report_warnings(diag, err);
    return 0;
  });
}

int cmd_correlate(const RunConfig& config, const std::optional<fs::path>& fixture,
                  std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    const fs::path dir = out_dir(config);
    if (fixture) {
      auto in = open_in(*fixture);
      write_correlation(dir, run_fixture_correlation(read_partition_fixture(in), config));
      return 0;
    }
    Diagnostics diag;
    const EventLog log = load_log(config, &diag);
    if (log.empty()) diag.warn("input log has no events");
    const Upstream up = obtain_upstream(dir, log, config, true, false, &diag);
    write_correlation(dir, run_correlation(log, *up.linkage, config));
    report_warnings(diag, err);
    return 0;
  });
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    Diagnostics diag;
    const EventLog log = load_log(config, &diag);
    if (log.empty()) diag.warn("input log has no events");
    const fs::path dir = out_dir(config);
    const Upstream up = obtain_upstream(dir, log, config, true, true, &diag);
    const Correlation c = run_correlation(log, *up.linkage, config);
    write_correlation(dir, c);
    std::ostringstream text;
    print_report(text, c, up.hles.size(), up.linkage->episodes.size());
    {
      auto f = open_out(dir / kReportTextFile);
      f << text.str();
    }
    out << text.str();
    report_warnings(diag, err);
    return 0;
  });
}

}  // namespace hlem
