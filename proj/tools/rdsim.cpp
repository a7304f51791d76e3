// rdsim: batch driver for the random Dirichlet series experiments.
//
//   rdsim run [--config FILE] [--threads N] [--key value]...
//   rdsim replay MANIFEST [--threads N]

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rds/config.hpp"
#include "rds/errors.hpp"
#include "rds/runner.hpp"

namespace {

// Turns the unparsed "--key value" / "--key=value" tokens into pairs.
std::vector<std::pair<std::string, std::string>> overrides_from(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) throw rds::ConfigError("unexpected argument '" + tok + "'");
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(tok.substr(2, eq - 2), tok.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw rds::ConfigError("option " + tok + " needs a value");
    out.emplace_back(tok.substr(2), extras[++i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Dirichlet series experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RDS_TOOL_VERSION));

  auto* run = app.add_subcommand("run", "Run one experiment and write its artifacts");
  std::string config_path;
  unsigned threads = 1;
  run->add_option("--config", config_path, "Key-value config file");
  run->add_option("--threads", threads, "Worker threads (does not change outputs)")->check(CLI::Range(1u, 256u));
  run->allow_extras();

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and byte-compare its CSV outputs");
  std::string manifest;
  unsigned replay_threads = 1;
  replay->add_option("manifest", manifest, "Path to manifest.json")->required();
  replay->add_option("--threads", replay_threads, "Worker threads")->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rds::kExitConfig;
  }

  if (*run) {
    rds::Config cfg;
    try {
      if (!config_path.empty()) cfg = rds::Config::load(config_path);
      cfg.apply_overrides(overrides_from(run->remaining()));
    } catch (const rds::ConfigError& e) {
      std::cerr << "rdsim: config error: " << e.what() << "\n";
      return rds::kExitConfig;
    }
    const auto outcome = rds::run(cfg, threads);
    if (outcome.exit_code == rds::kExitConfig) {
      std::cerr << "rdsim: config error: " << outcome.message << "\n";
      return outcome.exit_code;
    }
    if (outcome.exit_code == rds::kExitResource) {
      std::cerr << "rdsim: resource cap exceeded: " << outcome.message << "\n";
      return outcome.exit_code;
    }
    for (const auto& r : outcome.reports) {
      std::cout << r.name << ": " << rds::to_string(r.verdict) << " (statistic " << r.statistic;
      if (r.p_value) std::cout << ", p " << *r.p_value;
      if (r.tv_distance) std::cout << ", tv " << *r.tv_distance;
      std::cout << ")\n";
    }
    return outcome.exit_code;
  }
  return rds::replay(manifest, replay_threads, std::cout);
}
