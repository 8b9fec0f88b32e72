// Command-line front end. Talks to the solver exclusively through the C API
// of the shared library.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "radshoot.h"

namespace {

int fail(const char* what) {
  std::fprintf(stderr, "radshoot: %s: %s\n", what, rs_last_error());
  return 2;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            long long seed, bool seed_set, unsigned jobs, bool quiet) {
  rs_config* cfg = nullptr;
  if (rs_config_parse_file(config_path.c_str(), &cfg) != RS_OK)
    return fail("config");
  if (seed_set &&
      rs_config_override(cfg, "seed", std::to_string(seed).c_str()) != RS_OK) {
    rs_config_free(cfg);
    return fail("seed override");
  }
  rs_result* res = nullptr;
  if (rs_run(cfg, out_dir.c_str(), jobs, &res) != RS_OK) {
    rs_config_free(cfg);
    return fail("run");
  }
  if (!quiet) std::fputs(rs_result_json(res), stdout);
  const int code = rs_result_exit_code(res);
  rs_result_free(res);
  rs_config_free(cfg);
  return code;
}

int cmd_regress(const std::string& golden, const std::string& work,
                unsigned jobs, const std::string& policy, bool quiet) {
  rs_result* res = nullptr;
  if (rs_regress(golden.c_str(), work.c_str(), jobs, policy.c_str(), &res) !=
      RS_OK)
    return fail("regress");
  if (!quiet) std::fputs(rs_result_json(res), stdout);
  const int code = rs_result_exit_code(res);
  rs_result_free(res);
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial shooting solver for coupled cubic Schrödinger systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  long long seed = 0;
  unsigned jobs = 1;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run the experiment in a config file");
  run->add_option("--config", config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt =
      run->add_option("--seed", seed, "override the configured seed");
  run->add_option("--jobs", jobs, "worker threads for sweeps");
  run->add_flag("--quiet", quiet, "suppress the summary JSON on stdout");

  std::string golden_dir, work_dir = "regress_work", policy = "default";
  auto* regress =
      app.add_subcommand("regress", "re-run golden cases and compare");
  regress->add_option("--golden", golden_dir, "golden directory")->required();
  regress->add_option("--work", work_dir, "scratch directory for fresh runs");
  regress->add_option("--policy", policy, "default|exact")
      ->check(CLI::IsMember({"default", "exact"}));
  regress->add_option("--jobs", jobs, "worker threads");
  regress->add_flag("--quiet", quiet, "suppress the report JSON on stdout");

  auto* version = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::printf("radshoot %s\n", rs_version());
    return 0;
  }
  if (run->parsed())
    return cmd_run(config_path, out_dir, seed, seed_opt->count() > 0, jobs,
                   quiet);
  if (regress->parsed())
    return cmd_regress(golden_dir, work_dir, jobs, policy, quiet);
  return 2;
}
