#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "hlem/pipeline.hpp"

namespace {

// Flag name -> config key. Values are applied after the config file.
const std::map<std::string, std::string> kFlagKeys = {
    {"input", "input"},           {"format", "format"},
    {"window", "window"},         {"origin", "origin"},
    {"percentile", "percentile"}, {"delay-percentile", "delay_percentile"},
    {"lambda", "lambda"},         {"max-len", "max_len"},
    {"min-freq", "min_path_freq"}, {"types", "types"},
    {"top-k", "top_k"},           {"blacklist", "resource_blacklist"},
    {"attribute", "attribute"},   {"alpha", "alpha"},
    {"out", "out"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect high-level congestion behavior in event logs and correlate it with case outcomes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> flags;
  for (const auto& [flag, key] : kFlagKeys) {
    app.add_option("--" + flag, flags[flag], "overrides '" + key + "'");
  }

  auto* generate = app.add_subcommand("generate", "write a synthetic log with injected behavior");
  std::string spec_path;
  std::uint64_t seed = 42;
  generate->add_option("--spec", spec_path, "injection spec (JSON); built-in default when omitted");
  generate->add_option("--seed", seed, "random seed");

  app.add_subcommand("detect", "detect high-level events");
  app.add_subcommand("link", "link high-level events into episodes and paths");
  auto* correlate = app.add_subcommand("correlate", "test paths against a case attribute");
  std::string partitions;
  correlate->add_option("--partitions", partitions, "pre-partitioned case sets (JSON)");
  app.add_subcommand("report", "run every stage and print the ranked paths");

  CLI11_PARSE(app, argc, argv);

  hlem::RunConfig config;
  const int rc = hlem::guarded(std::cerr, [&] {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw hlem::ConfigError("cannot read config file '" + config_path + "'");
      hlem::read_config(in, config);
    }
    for (const auto& [flag, key] : kFlagKeys) {
      if (app.count("--" + flag) > 0) hlem::set_config_value(config, key, flags[flag]);
    }
    return 0;
  });
  if (rc != 0) return rc;

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "generate") {
    hlem::GenerateOptions options;
    options.spec = spec_path;
    options.seed = seed;
    return hlem::cmd_generate(options, config, std::cerr);
  }
  if (name == "detect") return hlem::cmd_detect(config, std::cerr);
  if (name == "link") return hlem::cmd_link(config, std::cerr);
  if (name == "correlate") {
    std::optional<std::filesystem::path> fixture;
    if (!partitions.empty()) fixture = partitions;
    return hlem::cmd_correlate(config, fixture, std::cerr);
  }
  return hlem::cmd_report(config, std::cout, std::cerr);
}
