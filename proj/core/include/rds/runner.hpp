#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rds/config.hpp"
#include "rds/stats.hpp"

namespace rds {

/// Written into every manifest; replay refuses manifests with another value.
inline constexpr const char* kArtifactVersion = "rds-artifacts/1";

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,  // a hard criterion failed
  kExitConfig = 2,
  kExitResource = 3,
  kExitReplay = 4,
};

/// clt, covariance, zeros-complex, zeros-real, nr-dist, lil, zeta-check, gaf-sample, sigma-c.
const std::vector<std::string>& experiment_names();

struct RunOutcome {
  int exit_code = kExitPass;
  std::vector<StatReport> reports;
  std::vector<std::string> files;  // relative to the output directory
  std::string message;             // set for exit codes 2 and 3
};

/// Validates the config, runs the experiment and writes manifest.json,
/// report.json and the CSV tables into output_dir (config key, default "out").
/// `threads` only schedules replicates; it never changes the output bytes.
RunOutcome run(const Config& cfg, unsigned threads = 1,
               const std::optional<std::filesystem::path>& output_dir = std::nullopt);

/// Re-runs the manifest's config into a scratch directory and compares every
/// CSV byte for byte. Returns 0 on identity, 4 on mismatch or version change.
int replay(const std::filesystem::path& manifest, unsigned threads, std::ostream& log);

}  // namespace rds
