// lqm: run, validate or batch-run scenario files.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lqm/runner.hpp"

namespace {

unsigned batch_jobs() {
  const char* env = std::getenv("LQM_BATCH_JOBS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    std::cerr << "warning: ignoring LQM_BATCH_JOBS='" << env << "'\n";
    return 1;
  }
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-action quantum mechanics toolkit"};
  app.set_version_flag("--version", std::string(lqm::kToolkitVersion));
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out_dir;
  std::size_t stride = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("--stride", stride, "Record every N-th step (overrides output.record_stride)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Print nothing on success");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", validate_file, "Scenario JSON file")->required();

  std::string batch_dir;
  std::string batch_out;
  bool batch_quiet = false;
  auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
  batch->add_option("dir", batch_dir, "Directory of scenario files")->required();
  batch->add_option("--out", batch_out, "Output root (default: <dir>/out)");
  batch->add_flag("--quiet", batch_quiet, "Only print one status line per scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lqm::kExitConfig;
  }

  try {
    if (*run) {
      lqm::RunOptions opts;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      if (stride > 0) opts.stride = stride;
      opts.quiet = quiet;
      const lqm::RunManifest m = lqm::run(lqm::parse_scenario(scenario_file), opts, std::cout);
      if (m.exit_code != lqm::kExitOk) {
        std::cerr << m.scenario_name << ": ";
        if (m.flags.count("verify_passed") && !m.flags.at("verify_passed")) std::cerr << "verification failed";
        else std::cerr << "did not converge";
        std::cerr << " (see " << m.output_dir << ")\n";
      }
      return m.exit_code;
    }
    if (*validate) {
      const lqm::Scenario s = lqm::parse_scenario(validate_file);
      std::cout << "ok: " << s.name << " (" << s.task << ")\n";
      return lqm::kExitOk;
    }
    const std::string root = batch_out.empty() ? batch_dir + "/out" : batch_out;
    return lqm::run_batch(batch_dir, root, batch_jobs(), batch_quiet, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lqm::exit_code_for(e);
  }
}
