#include "radshoot/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace radshoot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::string body = value;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']')
      throw Error(Errc::parse_error, "unterminated list '" + value + "'");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> items;
  std::string cell;
  std::istringstream is(body);
  while (std::getline(is, cell, ',')) {
    const std::string t = trim(cell);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, key + ": expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return (int)x;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error,
                key + ": expected an integer, got '" + v + "'");
  }
}

} // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << line_no << ": expected 'key = value'";
      throw Error(Errc::parse_error, os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << "config line " << line_no << ": empty key";
      throw Error(Errc::parse_error, os.str());
    }
    kv.entries_[key] = split_list(value);
  }
  return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config '" + path + "'");
  std::ostringstream body;
  body << in.rdbuf();
  return parse_text(body.str());
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  entries_[key] = split_list(value);
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty()) return fallback;
  if (it->second.size() != 1)
    throw Error(Errc::parse_error, key + ": expected a single value");
  return it->second[0];
}

double KeyValueFile::get_double(const std::string& key,
                                double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second.size() != 1)
    throw Error(Errc::parse_error, key + ": expected a single number");
  return parse_double(key, it->second[0]);
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second.size() != 1)
    throw Error(Errc::parse_error, key + ": expected a single integer");
  return parse_int(key, it->second[0]);
}

std::uint64_t KeyValueFile::get_uint64(const std::string& key,
                                       std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second.size() != 1)
    throw Error(Errc::parse_error, key + ": expected a single integer");
  try {
    return (std::uint64_t)std::stoull(it->second[0]);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, key + ": expected an unsigned integer");
  }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second.at(0);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(Errc::parse_error, key + ": expected true or false");
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
  std::vector<double> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  for (const auto& v : it->second) out.push_back(parse_double(key, v));
  return out;
}

std::vector<int> KeyValueFile::get_int_list(const std::string& key) const {
  std::vector<int> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  for (const auto& v : it->second) out.push_back(parse_int(key, v));
  return out;
}

std::vector<std::string>
KeyValueFile::get_string_list(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return it->second;
}

std::string KeyValueFile::canonical_text() const {
  std::ostringstream out;
  for (const auto& [key, values] : entries_) {
    out << key << " = [";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ", ";
      out << values[i];
    }
    out << "]\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= (std::uint64_t)c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                (unsigned long long)fnv1a64(bytes));
  return buf;
}

std::string RunConfig::config_hash() const {
  return fnv1a64_hex(raw.canonical_text());
}

namespace {

void parse_system(const KeyValueFile& kv, RunConfig& cfg,
                  std::vector<std::string>& problems) {
  if (!kv.has("system.lambda") && !kv.has("system.mu")) return;
  cfg.has_system = true;
  SystemParams p;
  p.n = kv.get_int("system.n", 0);
  p.lambda = kv.get_double_list("system.lambda");
  p.mu = kv.get_double_list("system.mu");
  if (p.n == 0) p.n = (int)p.mu.size();
  p.geometry = Geometry::ball3d;
  try {
    p.geometry = geometry_from_name(kv.get_string("system.geometry", "ball3d"));
  } catch (const Error& e) {
    problems.push_back(std::string("system.geometry: ") + e.what());
  }
  if (!has_lambda_term(p.geometry) && p.lambda.empty())
    p.lambda.assign((std::size_t)std::max(p.n, 1), 1.0);
  const auto upper = kv.get_double_list("system.beta_upper");
  const std::size_t expected =
      (std::size_t)(p.n > 1 ? p.n * (p.n - 1) / 2 : 0);
  p.beta.assign((std::size_t)std::max(p.n, 1),
                std::vector<double>((std::size_t)std::max(p.n, 1), 0.0));
  if (!upper.empty() && upper.size() != expected) {
    std::ostringstream os;
    os << "system.beta_upper: expected " << expected
       << " upper-triangular entries for n=" << p.n << ", got "
       << upper.size();
    problems.push_back(os.str());
  } else {
    std::size_t idx = 0;
    for (int i = 0; i < p.n && !upper.empty(); ++i)
      for (int j = i + 1; j < p.n; ++j, ++idx) {
        p.beta[(std::size_t)i][(std::size_t)j] = upper[idx];
        p.beta[(std::size_t)j][(std::size_t)i] = upper[idx];
      }
  }
  try {
    p.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  cfg.system = std::move(p);
}

void parse_integrator(const KeyValueFile& kv, RunConfig& cfg,
                      std::vector<std::string>& problems) {
  IntegratorConfig& ic = cfg.integrator;
  ic.rel_tol = kv.get_double("integrator.rel_tol", ic.rel_tol);
  ic.abs_tol = kv.get_double("integrator.abs_tol", ic.abs_tol);
  ic.max_step = kv.get_double("integrator.max_step", ic.max_step);
  ic.blowup_threshold =
      kv.get_double("integrator.blowup_threshold", ic.blowup_threshold);
  ic.r_max = kv.get_double("integrator.r_max", ic.r_max);
  ic.origin_h0 = kv.get_double("integrator.origin_h0", ic.origin_h0);
  ic.zero_tol = kv.get_double("integrator.zero_tol", ic.zero_tol);
  ic.profile_points =
      kv.get_int("integrator.profile_points", ic.profile_points);
  try {
    ic.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
}

} // namespace

RunConfig reload_config(const KeyValueFile& raw) {
  std::vector<std::string> problems;
  RunConfig cfg;
  cfg.raw = raw;
  const KeyValueFile& kv = cfg.raw;

  cfg.kind = kv.get_string("kind", "");
  bool known_kind = false;
  for (const char* k : kRunKinds)
    if (cfg.kind == k) known_kind = true;
  if (!known_kind)
    problems.push_back("kind: must be one of solve-scalar, solve-system, "
                       "continue-beta, check-nondegeneracy, uniqueness-sweep, "
                       "liouville-sweep, apriori-sweep, transform-check");
  cfg.out_prefix = kv.get_string("out_prefix", cfg.kind);
  cfg.seed = kv.get_uint64("seed", 12345);

  try {
    parse_system(kv, cfg, problems);
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  try {
    parse_integrator(kv, cfg, problems);
  } catch (const Error& e) {
    problems.push_back(e.what());
  }

  const auto p_list = kv.get_int_list("nodal.p");
  if (!p_list.empty()) {
    cfg.has_nodal = true;
    cfg.nodal.counts = p_list;
    for (int c : p_list)
      if (c < 0) problems.push_back("nodal.p: counts must be non-negative");
  }

  cfg.scalar_lambda_list = kv.get_double_list("scalar.lambda_list");
  cfg.scalar_p_list = kv.get_int_list("scalar.p_list");
  cfg.scalar_mu = kv.get_double("scalar.mu", 1.0);

  cfg.continuation.initial_fraction =
      kv.get_double("continuation.initial_step", 0.1);
  cfg.continuation.min_fraction = kv.get_double("continuation.min_step", 1e-6);
  cfg.continuation.growth = kv.get_double("continuation.growth", 2.0);
  cfg.continuation.max_fraction = kv.get_double("continuation.max_step", 0.25);

  cfg.sweep.launches = kv.get_int("sweep.launches", 100);
  cfg.sweep.box_hi = kv.get_double("sweep.box_hi", 0.0);
  cfg.sweep.cluster_radius = kv.get_double("sweep.cluster_radius", 1e-6);

  cfg.liouville.beta_grid = kv.get_double_list("liouville.beta_grid");
  cfg.liouville.points = kv.get_int("liouville.points", 50);
  cfg.liouville.amp_min = kv.get_double("liouville.amp_min", 1e-2);
  cfg.liouville.amp_max = kv.get_double("liouville.amp_max", 1e2);
  cfg.liouville.r_max = kv.get_double("liouville.r_max", 300.0);
  cfg.liouville.normalize = kv.get_bool("liouville.normalize", true);
  cfg.liouville.include_zero = kv.get_bool("liouville.include_zero", false);
  const auto geoms = kv.get_string_list("liouville.geometries");
  if (!geoms.empty()) {
    cfg.liouville.geometries.clear();
    for (const auto& g : geoms) {
      try {
        cfg.liouville.geometries.push_back(geometry_from_name(g));
      } catch (const Error& e) {
        problems.push_back(std::string("liouville.geometries: ") + e.what());
      }
    }
  }

  cfg.apriori_beta_grid = kv.get_double_list("apriori.beta_grid");

  // per-kind required fields
  auto require_system = [&](const char* kind) {
    if (cfg.kind != kind) return;
    if (!cfg.has_system)
      problems.push_back("system.lambda/system.mu: required for " +
                         std::string(kind));
    if (!cfg.has_nodal)
      problems.push_back("nodal.p: required for " + std::string(kind));
    else if (cfg.has_system &&
             (int)cfg.nodal.counts.size() != cfg.system.n)
      problems.push_back("nodal.p: length must equal system.n");
  };
  require_system("solve-scalar");
  require_system("solve-system");
  require_system("continue-beta");
  require_system("uniqueness-sweep");
  require_system("apriori-sweep");
  if (cfg.kind == "solve-scalar" && cfg.has_system && cfg.system.n != 1)
    problems.push_back("system.n: solve-scalar requires n = 1");
  if (cfg.kind == "check-nondegeneracy" || cfg.kind == "transform-check") {
    if (cfg.scalar_lambda_list.empty())
      problems.push_back("scalar.lambda_list: required for " + cfg.kind);
    if (cfg.scalar_p_list.empty())
      problems.push_back("scalar.p_list: required for " + cfg.kind);
    for (double l : cfg.scalar_lambda_list)
      if (!(l > 0.0))
        problems.push_back("scalar.lambda_list: entries must be > 0");
    for (int p : cfg.scalar_p_list)
      if (p < 0) problems.push_back("scalar.p_list: entries must be >= 0");
    if (!(cfg.scalar_mu > 0.0)) problems.push_back("scalar.mu: must be > 0");
  }
  if (cfg.kind == "liouville-sweep") {
    if (!cfg.has_system)
      problems.push_back("system.mu: required for liouville-sweep");
    if (!cfg.has_nodal)
      problems.push_back("nodal.p: required for liouville-sweep");
    if (cfg.liouville.beta_grid.empty())
      problems.push_back("liouville.beta_grid: required for liouville-sweep");
  }
  if (cfg.kind == "apriori-sweep" && cfg.apriori_beta_grid.empty())
    problems.push_back("apriori.beta_grid: required for apriori-sweep");

  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& p : problems) os << "\n  - " << p;
    throw Error(Errc::invalid_argument, os.str());
  }
  return cfg;
}

RunConfig load_config_text(const std::string& text) {
  return reload_config(KeyValueFile::parse_text(text));
}

RunConfig load_config_file(const std::string& path) {
  return reload_config(KeyValueFile::parse_file(path));
}

} // namespace radshoot
