#ifndef RADSHOOT_HARNESS_HPP
#define RADSHOOT_HARNESS_HPP

#include <string>
#include <vector>

#include "radshoot/config.hpp"

namespace radshoot {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOutput {
  std::string path; // relative to the output directory
  std::uint64_t bytes = 0;
  std::string fnv1a64;
};

struct RunSummary {
  std::string kind;
  std::string config_hash;
  int exit_code = 0; // 0 ok, 1 solver failure, 2 invalid config
  std::string error;
  std::string out_dir;
  std::vector<RunOutput> outputs;

  std::string to_json() const;
};

// Dispatches the experiment, writes its outputs plus manifest.json under
// out_dir and returns the summary. Solver failures produce an error.json
// record and exit code 1 instead of throwing.
RunSummary run_experiment(const RunConfig& config, const std::string& out_dir,
                          int jobs = 1);

struct RegressCaseResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> failures;
};

struct RegressReport {
  bool passed = false;
  std::vector<RegressCaseResult> cases;

  std::string to_json() const;
};

// Re-runs every golden case (a subdirectory with config.txt) into
// work_dir/<case> and compares outputs field by field. policy: "default"
// (per-field numeric tolerances) or "exact" (byte compare).
RegressReport run_regression(const std::string& golden_dir,
                             const std::string& work_dir, int jobs = 1,
                             const std::string& policy = "default");

} // namespace radshoot

#endif
