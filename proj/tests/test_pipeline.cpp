#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "figures.hpp"
#include "hlem/pipeline.hpp"

using namespace hlem;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("hlem_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const char* name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + HLEM_CLI_PATH + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

std::string demo_spec() { return std::string(HLEM_DATA_DIR) + "/demo_spec.json"; }

RunConfig demo_config(const TempDir& dir) {
  RunConfig c;
  c.input = (dir / "log.csv").string();
  c.csv.id_column = "id";
  c.out = dir.path().string();
  return c;
}

void generate_demo(const TempDir& dir, std::uint64_t seed = 42) {
  std::ostringstream err;
  RunConfig c;
  c.out = dir.path().string();
  ASSERT_EQ(cmd_generate({demo_spec(), seed}, c, err), 0) << err.str();
}

}  // namespace

TEST(Pipeline, GenerateIsDeterministic) {
  TempDir a, b;
  const std::string args = " generate --spec \"" + demo_spec() + "\" --seed 42 --out ";
  ASSERT_EQ(cli(a, args + "\"" + a.path().string() + "\"").code, 0);
  ASSERT_EQ(cli(b, args + "\"" + b.path().string() + "\"").code, 0);
  EXPECT_EQ(slurp(a / "log.csv"), slurp(b / "log.csv"));
  EXPECT_EQ(slurp(a / "truth.json"), slurp(b / "truth.json"));
  EXPECT_FALSE(slurp(a / "log.csv").empty());
}

TEST(Pipeline, InfeasibleSpecExitsTwo) {
  TempDir d;
  spit(d / "spec.json",
       R"({"num_windows": 5, "injections": [{"type": "delay", "segment": ["a", "b"], "window": 2,
          "exit_window": 2, "magnitude": 3}]})");
  const auto r = cli(d, "generate --spec \"" + (d / "spec.json").string() + "\" --out \"" +
                            d.path().string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config error"), std::string::npos);
}

TEST(Pipeline, DetectWritesDumpAndSummary) {
  TempDir d;
  generate_demo(d);
  std::ostringstream err;
  ASSERT_EQ(cmd_detect(demo_config(d), err), 0) << err.str();
  const auto summary = slurp(d / kSummaryFile);
  EXPECT_EQ(summary.rfind("type,segment,count,percent\n", 0), 0u);
  EXPECT_NE(summary.find("all,*,"), std::string::npos);
  EXPECT_FALSE(slurp(d / kHlesFile).empty());

  // Reloading the dump restores the detected events.
  const auto config = demo_config(d);
  const auto log = load_log(config);
  const auto det = run_detection(log, config);
  std::ifstream in(d / kHlesFile);
  const auto back = read_hles(in, log);
  ASSERT_EQ(back.size(), det.hles.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].coordinate, det.hles[i].coordinate);
    EXPECT_EQ(back[i].type, det.hles[i].type);
    EXPECT_EQ(back[i].cases.ids(), det.hles[i].cases.ids());
    EXPECT_EQ(back[i].start_spread, det.hles[i].start_spread);
  }
}

TEST(Pipeline, SummaryMatchesGroundTruthCoordinates) {
  TempDir d;
  generate_demo(d);
  const auto config = demo_config(d);
  const auto log = load_log(config);
  const auto det = run_detection(log, config);
  std::ifstream tin(d / kTruthFile);
  const auto truth = synth::read_ground_truth(tin);
  for (const auto& inj : truth.injections) {
    const Segment s{static_cast<ActivityId>(log.find_activity(inj.from)),
                    static_cast<ActivityId>(log.find_activity(inj.to))};
    const auto it = std::find_if(det.hles.begin(), det.hles.end(), [&](const HighLevelEvent& h) {
      return h.type == inj.type && h.coordinate == Coordinate{s, inj.theta};
    });
    ASSERT_NE(it, det.hles.end()) << to_string(inj.type) << " " << inj.from << "->" << inj.to;
    for (const auto& name : inj.cases) {
      EXPECT_TRUE(it->cases.contains(static_cast<CaseIndex>(log.find_case(name))));
    }
  }
}

TEST(Pipeline, EmptyLogWarnsAndSucceeds) {
  TempDir d;
  spit(d / "log.csv", "case,activity,timestamp,resource\n");
  const auto r = cli(d, "detect --input \"" + (d / "log.csv").string() + "\" --out \"" +
                            d.path().string() + "\"");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(slurp(d / kHlesFile).empty());
  const auto rep = cli(d, "report --input \"" + (d / "log.csv").string() + "\" --out \"" +
                              d.path().string() + "\"");
  EXPECT_EQ(rep.code, 0) << rep.err;
}

TEST(Pipeline, UnknownFeatureTypeExitsTwo) {
  TempDir d;
  spit(d / "log.csv", "case,activity,timestamp\n1,a,2021-01-01 10:00:00\n");
  const auto r = cli(d, "detect --types enter,spike --input \"" + (d / "log.csv").string() +
                            "\" --out \"" + d.path().string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("spike"), std::string::npos);
  spit(d / "bad.conf", "types = enter, spike\n");
  EXPECT_EQ(cli(d, "-c \"" + (d / "bad.conf").string() + "\" detect").code, 2);
}

TEST(Pipeline, UnreadableInputExitsOne) {
  TempDir d;
  const auto r = cli(d, "detect --input \"" + (d / "missing.csv").string() + "\" --out \"" +
                            d.path().string() + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
  spit(d / "broken.csv", "case,activity,timestamp\n1,a,yesterday\n");
  const auto p = cli(d, "detect --input \"" + (d / "broken.csv").string() + "\" --out \"" +
                            d.path().string() + "\"");
  EXPECT_EQ(p.code, 1);
  EXPECT_NE(p.err.find("line 2"), std::string::npos);
}

TEST(Pipeline, MissingAttributeColumnNamesIt) {
  TempDir d;
  generate_demo(d);
  auto config = demo_config(d);
  config.attribute = CategoricalAttribute{"LoanGoal"};
  std::ostringstream err;
  EXPECT_NE(cmd_correlate(config, std::nullopt, err), 0);
  EXPECT_NE(err.str().find("LoanGoal"), std::string::npos);
}

TEST(Pipeline, PublishedFixtureThroughCli) {
  TempDir d;
  const auto& fig3 = testing_support::published_tables()[0];
  {
    std::ofstream out(d / "fig3.json");
    write_partition_fixture(out, testing_support::fixture_for(fig3));
  }
  const auto r = cli(d, "correlate --partitions \"" + (d / "fig3.json").string() + "\" --out \"" +
                            d.path().string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(d / kReportCsvFile);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header.rfind("rank,path,frequency,participating,non_participating", 0), 0u);
  EXPECT_NE(row.find("fig3"), std::string::npos);
  EXPECT_NE(row.find(",2129,20767,"), std::string::npos);

  std::ifstream in(d / "fig3.json");
  const auto c = run_fixture_correlation(read_partition_fixture(in), RunConfig{});
  ASSERT_EQ(c.ranked.size(), 1u);
  ASSERT_TRUE(c.ranked[0].test.result.has_value());
  EXPECT_NEAR(c.ranked[0].test.result->statistic, 4.55, 0.02);
  EXPECT_NEAR(c.ranked[0].test.result->p_value, 0.0329, 0.0329 * 0.05);
}

TEST(Pipeline, MinFreqAboveEveryPathGivesEmptyReport) {
  TempDir d;
  generate_demo(d);
  auto config = demo_config(d);
  config.min_path_freq = 100000;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_report(config, out, err), 0) << err.str();
  const auto csv = slurp(d / kReportCsvFile);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);  // header only
  EXPECT_NE(out.str().find("paths tested: 0"), std::string::npos);
}

TEST(Pipeline, StagesReuseMatchingArtifacts) {
  TempDir d;
  generate_demo(d);
  auto config = demo_config(d);
  std::ostringstream err;
  ASSERT_EQ(cmd_detect(config, err), 0);
  ASSERT_EQ(cmd_link(config, err), 0);
  const auto episodes = slurp(d / kEpisodesFile);
  ASSERT_EQ(cmd_correlate(config, std::nullopt, err), 0);
  const auto report = slurp(d / kReportCsvFile);

  // A fresh directory computing everything in one go gives the same report.
  TempDir e;
  fs::copy_file(d / "log.csv", e / "log.csv");
  auto config2 = demo_config(e);
  ASSERT_EQ(cmd_correlate(config2, std::nullopt, err), 0);
  EXPECT_EQ(slurp(e / kReportCsvFile), report);
  EXPECT_EQ(slurp(e / kEpisodesFile), episodes);

  // A changed linkage knob is not served from the stale episode dump.
  config.lambda = 0.9;
  ASSERT_EQ(cmd_correlate(config, std::nullopt, err), 0);
  EXPECT_NE(slurp(d / kEpisodesFile), episodes);
  EXPECT_EQ(slurp(d / kManifestFile), detect_fingerprint(config) + link_fingerprint(config));
}

TEST(Pipeline, ReportIsByteDeterministic) {
  TempDir d;
  generate_demo(d, 7);
  const auto config = demo_config(d);
  std::ostringstream out1, out2, err;
  ASSERT_EQ(cmd_report(config, out1, err), 0);
  const auto csv1 = slurp(d / kReportCsvFile);
  const auto json1 = slurp(d / kReportJsonFile);
  ASSERT_EQ(cmd_report(config, out2, err), 0);
  EXPECT_EQ(out1.str(), out2.str());
  EXPECT_EQ(slurp(d / kReportCsvFile), csv1);
  EXPECT_EQ(slurp(d / kReportJsonFile), json1);
}

TEST(Pipeline, DemoRunsQuicklyThroughCli) {
  TempDir d;
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(cli(d, "generate --spec \"" + demo_spec() + "\" --out \"" + d.path().string() + "\"").code,
            0);
  spit(d / "demo.conf", "csv.id = id\ninput = " + (d / "log.csv").string() + "\nout = " +
                            d.path().string() + "\n");
  const auto det = cli(d, "-c \"" + (d / "demo.conf").string() + "\" detect");
  ASSERT_EQ(det.code, 0) << det.err;
  const auto cor = cli(d, "-c \"" + (d / "demo.conf").string() + "\" correlate");
  ASSERT_EQ(cor.code, 0) << cor.err;
  const auto rep = cli(d, "-c \"" + (d / "demo.conf").string() + "\" report --lambda 0.5");
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("high-level events:"), std::string::npos);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 10.0);
}

TEST(Pipeline, BiasedInjectionRanksFirst) {
  synth::InjectionSpec spec;
  spec.base_unsuccessful = 0.3;
  spec.arrivals_per_window = 6;
  synth::Injection inj;
  inj.type = FeatureType::batch;
  inj.from = "b";
  inj.to = "c";
  inj.window = 12;
  inj.exit_window = 13;
  inj.magnitude = 40;
  inj.unsuccessful_probability = 0.95;
  spec.injections.push_back(inj);
  const auto g = synth::generate_log(spec, 1001);
  const RunConfig config;
  const auto det = run_detection(g.log, config);
  const auto link = run_linkage(det.hles, config);
  const auto corr = run_correlation(g.log, link, config);
  ASSERT_FALSE(corr.ranked.empty());
  ASSERT_TRUE(corr.ranked[0].significant);
  const auto part = participating_cases(corr.ranked[0].test.path, link.episodes);
  std::size_t hit = 0;
  for (const auto& name : g.truth.injections[0].cases) {
    hit += std::binary_search(part.begin(), part.end(), static_cast<CaseIndex>(g.log.find_case(name)));
  }
  EXPECT_GE(10 * hit, 9 * inj.magnitude);
}
