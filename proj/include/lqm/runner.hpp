#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqm/scenario.hpp"

namespace lqm {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNotConverged = 2, kExitIo = 3 };

struct RunOptions {
  std::optional<std::string> out_dir;      // overrides output.dir
  std::optional<std::size_t> stride;       // overrides output.record_stride
  bool quiet = false;
};

struct RunManifest {
  std::string scenario_name;
  std::string scenario_hash;
  std::string version;
  std::string task;
  std::string output_dir;
  double wall_time_seconds = 0.0;
  std::map<std::string, bool> flags;                    // converged, verify_passed, ...
  std::vector<std::pair<std::string, double>> summary;  // same rows as summary.csv
  int exit_code = kExitOk;
};

// Executes the scenario and writes diagnostics.csv, summary.csv,
// manifest.json, snapshots/ (and verify.csv for the verify task) into the
// output directory. Throws ConfigError for invalid scenarios and IoError when
// files cannot be written.
RunManifest run(Scenario scenario, const RunOptions& opts, std::ostream& log);

// Runs every *.json scenario in dir (sorted by name), each into
// out_root/<file stem>. Up to `jobs` scenarios run at once. Returns the
// largest exit code.
int run_batch(const std::string& dir, const std::string& out_root, unsigned jobs, bool quiet,
              std::ostream& log);

// Exit code for an exception escaping run().
int exit_code_for(const std::exception& e);

}  // namespace lqm
