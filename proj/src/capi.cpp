#include "radshoot.h"

#include <cstring>
#include <json.hpp>
#include <string>

#include "radshoot/config.hpp"
#include "radshoot/harness.hpp"
#include "radshoot/scalar.hpp"

using namespace radshoot;

struct rs_config {
  KeyValueFile raw;
  RunConfig parsed;
  std::string hash;
};

struct rs_result {
  std::string json;
  int exit_code = 0;
};

namespace {

thread_local std::string t_last_error;

rs_status status_of(Errc code) {
  switch (code) {
  case Errc::invalid_argument: return RS_ERR_INVALID_ARGUMENT;
  case Errc::parse_error: return RS_ERR_PARSE;
  case Errc::solver_failure: return RS_ERR_SOLVER;
  case Errc::io_error: return RS_ERR_IO;
  case Errc::internal: return RS_ERR_INTERNAL;
  }
  return RS_ERR_INTERNAL;
}

template <typename Fn> rs_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return RS_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RS_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return RS_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

} // namespace

extern "C" {

const char* rs_version(void) { return kToolVersion; }

const char* rs_last_error(void) { return t_last_error.c_str(); }

rs_status rs_config_parse_file(const char* path, rs_config** out) {
  if (!path || !out) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    auto cfg = new rs_config;
    try {
      cfg->raw = KeyValueFile::parse_file(path);
      cfg->parsed = reload_config(cfg->raw);
      cfg->hash = cfg->parsed.config_hash();
    } catch (...) {
      delete cfg;
      throw;
    }
    *out = cfg;
  });
}

rs_status rs_config_parse_text(const char* text, rs_config** out) {
  if (!text || !out) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    auto cfg = new rs_config;
    try {
      cfg->raw = KeyValueFile::parse_text(text);
      cfg->parsed = reload_config(cfg->raw);
      cfg->hash = cfg->parsed.config_hash();
    } catch (...) {
      delete cfg;
      throw;
    }
    *out = cfg;
  });
}

rs_status rs_config_override(rs_config* cfg, const char* key,
                             const char* value) {
  if (!cfg || !key || !value) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() {
    KeyValueFile updated = cfg->raw;
    updated.set(key, value);
    cfg->parsed = reload_config(updated); // validate before committing
    cfg->raw = updated;
    cfg->hash = cfg->parsed.config_hash();
  });
}

const char* rs_config_hash(const rs_config* cfg) {
  return cfg ? cfg->hash.c_str() : "";
}

void rs_config_free(rs_config* cfg) { delete cfg; }

rs_status rs_run(const rs_config* cfg, const char* out_dir, unsigned jobs,
                 rs_result** out) {
  if (!cfg || !out_dir || !out) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    RunSummary summary =
        run_experiment(cfg->parsed, out_dir, jobs == 0 ? 1 : (int)jobs);
    auto res = new rs_result;
    res->json = summary.to_json();
    res->exit_code = summary.exit_code;
    *out = res;
  });
}

rs_status rs_regress(const char* golden_dir, const char* work_dir,
                     unsigned jobs, const char* policy, rs_result** out) {
  if (!golden_dir || !work_dir || !out) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    RegressReport rep =
        run_regression(golden_dir, work_dir, jobs == 0 ? 1 : (int)jobs,
                       policy ? policy : "default");
    auto res = new rs_result;
    res->json = rep.to_json();
    res->exit_code = rep.passed ? 0 : 1;
    *out = res;
  });
}

const char* rs_result_json(const rs_result* res) {
  return res ? res->json.c_str() : "";
}

int rs_result_exit_code(const rs_result* res) {
  return res ? res->exit_code : RS_ERR_INVALID_ARGUMENT;
}

void rs_result_free(rs_result* res) { delete res; }

rs_status rs_solve_scalar(double lambda, double mu, int nodes,
                          char** record_json) {
  if (!record_json) {
    t_last_error = "null argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  *record_json = nullptr;
  return guarded([&]() {
    SolutionRecord rec = find_amplitude(lambda, mu, nodes);
    nlohmann::json j{{"lambda", lambda},
                     {"mu", mu},
                     {"nodes", nodes},
                     {"amplitude", rec.amplitudes[0]},
                     {"boundary_residual", rec.boundary_residual},
                     {"ode_residual", rec.ode_residual},
                     {"energy", rec.energy},
                     {"zero_crossings", rec.profile.zero_crossings[0]}};
    *record_json = dup_string(j.dump(2));
  });
}

rs_status rs_scalar_nondegeneracy(double lambda, double mu, int nodes,
                                  double* z_end, double* v_end,
                                  int* nondegenerate) {
  return guarded([&]() {
    SolutionRecord rec = find_amplitude(lambda, mu, nodes);
    NondegeneracyResult nd = nondegeneracy_scalar(lambda, mu, rec);
    if (z_end) *z_end = nd.z_end;
    if (v_end) *v_end = nd.v_end;
    if (nondegenerate) *nondegenerate = nd.nondegenerate ? 1 : 0;
  });
}

void rs_string_free(char* s) { delete[] s; }

} // extern "C"
