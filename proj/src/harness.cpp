#include "radshoot/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "radshoot/energy.hpp"
#include "radshoot/liouville.hpp"
#include "radshoot/nodal.hpp"
#include "radshoot/scalar.hpp"
#include "radshoot/system.hpp"

namespace radshoot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json params_to_json(const SystemParams& p) {
  return json{{"n", p.n},
              {"geometry", geometry_name(p.geometry)},
              {"lambda", p.lambda},
              {"mu", p.mu},
              {"beta", p.beta}};
}

json record_to_json(const SolutionRecord& rec, const std::string& config_hash,
                    std::uint64_t seed, const std::string& profile_csv) {
  return json{{"config_hash", config_hash},
              {"seed", seed},
              {"params", params_to_json(rec.params)},
              {"amplitudes", rec.amplitudes},
              {"nodal_counts", rec.nodal_counts},
              {"boundary_residual", rec.boundary_residual},
              {"ode_residual", rec.ode_residual},
              {"energy", rec.energy},
              {"triviality",
               triviality_name(classify_triviality(rec.profile))},
              {"zero_crossings", rec.profile.zero_crossings},
              {"profile_csv", profile_csv}};
}

// accumulates output files and their checksums; manifest written last
class OutputSink {
public:
  OutputSink(std::string dir, std::string config_hash)
      : dir_(std::move(dir)), hash_(std::move(config_hash)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& body) {
    const fs::path p = fs::path(dir_) / name;
    {
      std::ofstream out(p, std::ios::binary);
      if (!out) throw Error(Errc::io_error, "cannot write " + p.string());
      out << body;
    }
    outputs_.push_back({name, (std::uint64_t)body.size(), fnv1a64_hex(body)});
  }

  void write_json(const std::string& name, const json& j) {
    write(name, j.dump(2) + "\n");
  }

  void write_manifest(const std::string& started, const std::string& finished) {
    json m{{"config_hash", hash_},
           {"tool_version", kToolVersion},
           {"started_at", started},
           {"finished_at", finished}};
    m["outputs"] = json::array();
    for (const auto& o : outputs_)
      m["outputs"].push_back(
          {{"path", o.path}, {"bytes", o.bytes}, {"fnv1a64", o.fnv1a64}});
    write("manifest.json", m.dump(2) + "\n");
  }

  const std::vector<RunOutput>& outputs() const { return outputs_; }
  const std::string& hash() const { return hash_; }

private:
  std::string dir_;
  std::string hash_;
  std::vector<RunOutput> outputs_;
};

std::string profile_csv_text(const SampledProfile& profile,
                             const std::string& config_hash,
                             std::uint64_t seed) {
  std::ostringstream os;
  std::ostringstream seed_line;
  seed_line << "seed=" << seed;
  write_profile_csv(os, profile, {"config_hash=" + config_hash,
                                  seed_line.str()});
  return os.str();
}

std::string csv_head(const std::string& config_hash, std::uint64_t seed) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n# seed=" << seed << "\n";
  return os.str();
}

void emit_record(OutputSink& sink, const RunConfig& cfg,
                 const SolutionRecord& rec, const std::string& stem) {
  const std::string csv_name = stem + "_profile.csv";
  sink.write(csv_name, profile_csv_text(rec.profile, sink.hash(), cfg.seed));
  sink.write_json(stem + ".json",
                  record_to_json(rec, sink.hash(), cfg.seed, csv_name));
}

// --- experiment bodies ---

void run_solve_scalar(const RunConfig& cfg, OutputSink& sink) {
  ScalarSolveOptions opt;
  opt.integrator = cfg.integrator;
  SolutionRecord rec = find_amplitude(cfg.system.lambda[0], cfg.system.mu[0],
                                      cfg.nodal.counts[0], opt);
  emit_record(sink, cfg, rec, cfg.out_prefix);
}

ContinuationPath run_continuation(const RunConfig& cfg) {
  NewtonOptions newton;
  newton.integrator = cfg.integrator;
  SystemParams base = cfg.system.with_uniform_beta(0.0);
  return continue_in_beta(base, cfg.system.beta, cfg.nodal, cfg.continuation,
                          newton);
}

std::string path_csv_text(const RunConfig& cfg, const ContinuationPath& path,
                          const std::string& hash) {
  std::ostringstream os;
  os << csv_head(hash, cfg.seed);
  os << "step,s";
  const int n = cfg.system.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      os << ",beta_" << (i + 1) << "_" << (j + 1);
  for (int j = 0; j < n; ++j) os << ",a_" << (j + 1);
  os << ",boundary_residual,ode_residual,det_L,nondegenerate,energy\n";
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const auto& st = path.steps[k];
    os << k << "," << format_double(st.s);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        os << "," << format_double(st.beta[(std::size_t)i][(std::size_t)j]);
    for (int j = 0; j < n; ++j)
      os << "," << format_double(st.record.amplitudes[(std::size_t)j]);
    os << "," << format_double(st.record.boundary_residual) << ","
       << format_double(st.record.ode_residual) << ","
       << format_double(st.boundary_map.det) << ","
       << (st.boundary_map.nondegenerate ? 1 : 0) << ","
       << format_double(st.record.energy) << "\n";
  }
  return os.str();
}

void run_continue_beta(const RunConfig& cfg, OutputSink& sink,
                       bool final_record_only) {
  ContinuationPath path = run_continuation(cfg);
  if (!final_record_only)
    sink.write(cfg.out_prefix + "_path.csv",
               path_csv_text(cfg, path, sink.hash()));
  if (path.stalled)
    throw Error(Errc::solver_failure,
                path.message + " at s=" + format_double(path.reached_fraction));
  emit_record(sink, cfg, path.steps.back().record, cfg.out_prefix);
}

void run_check_nondegeneracy(const RunConfig& cfg, OutputSink& sink) {
  std::ostringstream csv;
  csv << csv_head(sink.hash(), cfg.seed);
  csv << "lambda,mu,nodes,amplitude,z_T,v_1,z_sup,v_sup,nondegenerate\n";
  ScalarSolveOptions opt;
  opt.integrator = cfg.integrator;
  NondegeneracyOptions nopt;
  nopt.integrator = cfg.integrator;
  for (double lambda : cfg.scalar_lambda_list) {
    for (int p : cfg.scalar_p_list) {
      SolutionRecord rec = find_amplitude(lambda, cfg.scalar_mu, p, opt);
      NondegeneracyResult nd =
          nondegeneracy_scalar(lambda, cfg.scalar_mu, rec, nopt);
      csv << format_double(lambda) << "," << format_double(cfg.scalar_mu)
          << "," << p << "," << format_double(rec.amplitudes[0]) << ","
          << format_double(nd.z_end) << "," << format_double(nd.v_end) << ","
          << format_double(nd.z_sup) << "," << format_double(nd.v_sup) << ","
          << (nd.nondegenerate ? 1 : 0) << "\n";
      std::ostringstream stem;
      stem << cfg.out_prefix << "_l" << format_double(lambda) << "_p" << p;
      emit_record(sink, cfg, rec, stem.str());
    }
  }
  sink.write(cfg.out_prefix + ".csv", csv.str());
}

void run_transform_check(const RunConfig& cfg, OutputSink& sink) {
  std::ostringstream csv;
  csv << csv_head(sink.hash(), cfg.seed);
  csv << "lambda,mu,nodes,amplitude,T,sup_transform_residual,"
         "round_trip_error,dydt_cross_check\n";
  ScalarSolveOptions opt;
  opt.integrator = cfg.integrator;
  TransformOptions topt;
  topt.integrator = cfg.integrator;
  for (double lambda : cfg.scalar_lambda_list) {
    for (int p : cfg.scalar_p_list) {
      SolutionRecord rec = find_amplitude(lambda, cfg.scalar_mu, p, opt);
      TransformedProfile tp =
          transform_profile(lambda, cfg.scalar_mu, rec.profile, topt);
      csv << format_double(lambda) << "," << format_double(cfg.scalar_mu)
          << "," << p << "," << format_double(rec.amplitudes[0]) << ","
          << format_double(tp.T) << ","
          << format_double(tp.sup_transform_residual) << ","
          << format_double(tp.round_trip_error) << ","
          << format_double(tp.dydt_cross_check) << "\n";
    }
  }
  sink.write(cfg.out_prefix + ".csv", csv.str());
}

void run_uniqueness(const RunConfig& cfg, OutputSink& sink, int jobs) {
  UniquenessOptions opt = cfg.sweep;
  opt.seed = cfg.seed;
  opt.jobs = jobs;
  opt.newton.integrator = cfg.integrator;
  UniquenessReport rep = uniqueness_sweep(cfg.system, cfg.nodal, opt);
  json j{{"config_hash", sink.hash()},
         {"seed", rep.seed},
         {"params", params_to_json(cfg.system)},
         {"nodal", rep.target.counts},
         {"launches", rep.launches},
         {"box_hi", rep.box_hi},
         {"kept", rep.kept},
         {"verdict", rep.verdict}};
  j["clusters"] = json::array();
  for (const auto& c : rep.clusters)
    j["clusters"].push_back(
        {{"amplitudes", c.amplitudes}, {"count", c.count}});
  sink.write_json(cfg.out_prefix + ".json", j);
}

void run_liouville(const RunConfig& cfg, OutputSink& sink, int jobs) {
  LiouvilleOptions opt = cfg.liouville;
  opt.seed = cfg.seed;
  opt.jobs = jobs;
  opt.integrator = cfg.integrator;
  LiouvilleReport rep = liouville_sweep(cfg.system.mu, cfg.nodal, opt);

  std::ostringstream csv;
  csv << csv_head(sink.hash(), cfg.seed);
  csv << "beta,geometry,oscillates,blows_up,undecided_nontrivial,"
         "undecided_trivial,total\n";
  for (const auto& c : rep.counts)
    csv << format_double(c.beta) << "," << geometry_name(c.geometry) << ","
        << c.oscillates << "," << c.blows_up << "," << c.undecided_nontrivial
        << "," << c.undecided_trivial << "," << c.total << "\n";
  sink.write(cfg.out_prefix + "_verdicts.csv", csv.str());

  json rows = json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"beta", row.beta},
                    {"geometry", geometry_name(row.geometry)},
                    {"initial", row.tc.initial},
                    {"sigma", row.tc.sigma},
                    {"verdict", verdict_name(row.tc.verdict)},
                    {"node_counts", row.tc.node_counts},
                    {"escape_radius", row.tc.escape_radius},
                    {"horizon", row.tc.horizon},
                    {"trivial", row.tc.trivial}});
  sink.write_json(cfg.out_prefix + "_trajectories.json",
                  json{{"config_hash", sink.hash()},
                       {"seed", cfg.seed},
                       {"undecided_nontrivial_total",
                        rep.undecided_nontrivial_total},
                       {"rows", rows}});
}

void run_apriori(const RunConfig& cfg, OutputSink& sink) {
  NewtonOptions newton;
  newton.integrator = cfg.integrator;
  AprioriReport rep = apriori_sweep(cfg.system, cfg.apriori_beta_grid,
                                    cfg.nodal, cfg.continuation, newton);
  std::ostringstream csv;
  csv << csv_head(sink.hash(), cfg.seed);
  csv << "beta,reached,sup_norm,boundary_residual,ode_residual,energy\n";
  for (const auto& row : rep.rows)
    csv << format_double(row.beta) << "," << (row.reached ? 1 : 0) << ","
        << format_double(row.sup_norm) << ","
        << format_double(row.boundary_residual) << ","
        << format_double(row.ode_residual) << ","
        << format_double(row.energy) << "\n";
  sink.write(cfg.out_prefix + ".csv", csv.str());
}

} // namespace

std::string RunSummary::to_json() const {
  json j{{"kind", kind},
         {"config_hash", config_hash},
         {"exit_code", exit_code},
         {"out_dir", out_dir}};
  if (!error.empty()) j["error"] = error;
  j["outputs"] = json::array();
  for (const auto& o : outputs)
    j["outputs"].push_back(
        {{"path", o.path}, {"bytes", o.bytes}, {"fnv1a64", o.fnv1a64}});
  return j.dump(2) + "\n";
}

RunSummary run_experiment(const RunConfig& config, const std::string& out_dir,
                          int jobs) {
  RunSummary summary;
  summary.kind = config.kind;
  summary.config_hash = config.config_hash();
  summary.out_dir = out_dir;
  const std::string started = utc_timestamp();
  OutputSink sink(out_dir, summary.config_hash);
  try {
    if (config.kind == "solve-scalar") {
      run_solve_scalar(config, sink);
    } else if (config.kind == "solve-system") {
      run_continue_beta(config, sink, true);
    } else if (config.kind == "continue-beta") {
      run_continue_beta(config, sink, false);
    } else if (config.kind == "check-nondegeneracy") {
      run_check_nondegeneracy(config, sink);
    } else if (config.kind == "transform-check") {
      run_transform_check(config, sink);
    } else if (config.kind == "uniqueness-sweep") {
      run_uniqueness(config, sink, jobs);
    } else if (config.kind == "liouville-sweep") {
      run_liouville(config, sink, jobs);
    } else if (config.kind == "apriori-sweep") {
      run_apriori(config, sink);
    } else {
      throw Error(Errc::invalid_argument, "kind: unknown experiment");
    }
    summary.exit_code = 0;
  } catch (const Error& e) {
    summary.exit_code = e.code() == Errc::invalid_argument ? 2 : 1;
    summary.error = e.what();
    sink.write_json("error.json", json{{"exit_code", summary.exit_code},
                                       {"error", summary.error}});
  }
  sink.write_manifest(started, utc_timestamp());
  summary.outputs = sink.outputs();
  return summary;
}

// --- regression against golden outputs ---

namespace {

struct TolerancePolicy {
  bool exact = false;

  // tolerance for a numeric field; `name` is the JSON key or CSV column
  bool matches(const std::string& name, double got, double want) const {
    if (got == want) return true;
    if (std::isnan(got) && std::isnan(want)) return true;
    const double diff = std::abs(got - want);
    auto contains = [&](const char* s) {
      return name.find(s) != std::string::npos;
    };
    if (contains("amplitude") || contains("a_"))
      return diff <= 1e-8 * std::max(1.0, std::abs(want));
    if (contains("residual")) return diff <= 1e-8;
    if (contains("count") || contains("total") || contains("oscillates") ||
        contains("blows_up") || contains("undecided") || contains("nodes") ||
        contains("nodal"))
      return false; // integers compare exactly
    return diff <= 1e-6 * std::max(1.0, std::abs(want));
  }
};

bool numeric_cell(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

void compare_json(const std::string& where, const json& got, const json& want,
                  const TolerancePolicy& tol, std::vector<std::string>& fails);

void compare_json_value(const std::string& where, const std::string& name,
                        const json& got, const json& want,
                        const TolerancePolicy& tol,
                        std::vector<std::string>& fails) {
  if (got.is_number() && want.is_number()) {
    if (got.is_number_integer() && want.is_number_integer()) {
      if (got != want)
        fails.push_back(where + ": " + got.dump() + " != " + want.dump());
      return;
    }
    if (!tol.matches(name, got.get<double>(), want.get<double>()))
      fails.push_back(where + ": " + got.dump() + " !~ " + want.dump());
    return;
  }
  if (got.is_object() && want.is_object()) {
    compare_json(where, got, want, tol, fails);
    return;
  }
  if (got.is_array() && want.is_array()) {
    if (got.size() != want.size()) {
      fails.push_back(where + ": array size " + std::to_string(got.size()) +
                      " != " + std::to_string(want.size()));
      return;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      compare_json_value(where + "[" + std::to_string(i) + "]", name, got[i],
                         want[i], tol, fails);
    return;
  }
  if (got != want)
    fails.push_back(where + ": " + got.dump() + " != " + want.dump());
}

void compare_json(const std::string& where, const json& got, const json& want,
                  const TolerancePolicy& tol, std::vector<std::string>& fails) {
  for (auto it = want.begin(); it != want.end(); ++it) {
    if (!got.contains(it.key())) {
      fails.push_back(where + "." + it.key() + ": missing");
      continue;
    }
    compare_json_value(where + "." + it.key(), it.key(), got[it.key()],
                       it.value(), tol, fails);
  }
}

void compare_csv(const std::string& name, const std::string& got,
                 const std::string& want, const TolerancePolicy& tol,
                 std::vector<std::string>& fails) {
  auto rows = [](const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      out.push_back(std::move(cells));
    }
    return out;
  };
  const auto g = rows(got), w = rows(want);
  if (g.empty() || w.empty() || g[0] != w[0]) {
    fails.push_back(name + ": header mismatch");
    return;
  }
  if (g.size() != w.size()) {
    fails.push_back(name + ": row count " + std::to_string(g.size()) +
                    " != " + std::to_string(w.size()));
    return;
  }
  const auto& header = w[0];
  for (std::size_t r = 1; r < w.size(); ++r) {
    if (g[r].size() != w[r].size()) {
      fails.push_back(name + " row " + std::to_string(r) + ": width mismatch");
      continue;
    }
    for (std::size_t c = 0; c < w[r].size(); ++c) {
      const std::string col = c < header.size() ? header[c] : "";
      double gv, wv;
      if (numeric_cell(g[r][c], gv) && numeric_cell(w[r][c], wv)) {
        if (!tol.matches(col, gv, wv))
          fails.push_back(name + " row " + std::to_string(r) + " col " + col +
                          ": " + g[r][c] + " !~ " + w[r][c]);
      } else if (g[r][c] != w[r][c]) {
        fails.push_back(name + " row " + std::to_string(r) + " col " + col +
                        ": " + g[r][c] + " != " + w[r][c]);
      }
    }
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

std::string RegressReport::to_json() const {
  json j{{"passed", passed}};
  j["cases"] = json::array();
  for (const auto& c : cases)
    j["cases"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"failures", c.failures}});
  return j.dump(2) + "\n";
}

RegressReport run_regression(const std::string& golden_dir,
                             const std::string& work_dir, int jobs,
                             const std::string& policy) {
  RegressReport report;
  TolerancePolicy tol;
  tol.exact = (policy == "exact");
  if (!fs::is_directory(golden_dir)) {
    report.passed = false;
    report.cases.push_back(
        {golden_dir, false, {"missing golden directory " + golden_dir}});
    return report;
  }

  std::vector<fs::path> cases;
  for (const auto& entry : fs::directory_iterator(golden_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "config.txt"))
      cases.push_back(entry.path());
  std::sort(cases.begin(), cases.end());
  if (cases.empty()) {
    report.passed = false;
    report.cases.push_back(
        {golden_dir, false, {"no golden cases (subdirectories with config.txt) in " + golden_dir}});
    return report;
  }

  for (const auto& dir : cases) {
    RegressCaseResult res;
    res.name = dir.filename().string();
    try {
      RunConfig cfg = load_config_file((dir / "config.txt").string());
      const std::string out =
          (fs::path(work_dir) / dir.filename()).string();
      RunSummary summary = run_experiment(cfg, out, jobs);
      if (summary.exit_code != 0)
        res.failures.push_back("run failed: " + summary.error);
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name == "config.txt" || name == "manifest.json") continue;
        const fs::path fresh = fs::path(out) / name;
        if (!fs::exists(fresh)) {
          res.failures.push_back(name + ": missing from the fresh run");
          continue;
        }
        const std::string want = slurp(entry.path());
        const std::string got = slurp(fresh);
        if (tol.exact) {
          if (want != got) res.failures.push_back(name + ": bytes differ");
          continue;
        }
        try {
          if (entry.path().extension() == ".json") {
            compare_json(name, json::parse(got), json::parse(want), tol,
                         res.failures);
          } else if (entry.path().extension() == ".csv") {
            compare_csv(name, got, want, tol, res.failures);
          } else if (want != got) {
            res.failures.push_back(name + ": bytes differ");
          }
        } catch (const json::exception& e) {
          res.failures.push_back(name + ": unreadable golden or output (" +
                                 e.what() + ")");
        }
      }
    } catch (const Error& e) {
      res.failures.push_back(e.what());
    }
    res.passed = res.failures.empty();
    report.cases.push_back(std::move(res));
  }
  report.passed = true;
  for (const auto& c : report.cases)
    if (!c.passed) report.passed = false;
  return report;
}

} // namespace radshoot
