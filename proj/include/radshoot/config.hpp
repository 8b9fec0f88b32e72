#ifndef RADSHOOT_CONFIG_HPP
#define RADSHOOT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radshoot/liouville.hpp"
#include "radshoot/ode.hpp"
#include "radshoot/system.hpp"
#include "radshoot/types.hpp"

namespace radshoot {

// Flat key = value configuration ("a.b.c = 1", "a.list = [1, 2, 3]",
// '#' comments). Parsed keys are kept for canonicalization and hashing.
class KeyValueFile {
public:
  static KeyValueFile parse_text(const std::string& text);
  static KeyValueFile parse_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  // sorted "key = [v, ...]" lines; comments and formatting do not survive
  std::string canonical_text() const;
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

private:
  std::map<std::string, std::vector<std::string>> entries_;
};

inline constexpr const char* kRunKinds[] = {
    "solve-scalar",       "solve-system",   "continue-beta",
    "check-nondegeneracy", "uniqueness-sweep", "liouville-sweep",
    "apriori-sweep",      "transform-check"};

struct RunConfig {
  std::string kind;
  std::string out_prefix; // defaults to the kind
  std::uint64_t seed = 12345;

  SystemParams system;
  bool has_system = false;
  NodalProfile nodal;
  bool has_nodal = false;
  IntegratorConfig integrator;

  // scalar batch kinds
  std::vector<double> scalar_lambda_list;
  std::vector<int> scalar_p_list;
  double scalar_mu = 1.0;

  StepPolicy continuation;
  UniquenessOptions sweep;
  LiouvilleOptions liouville;
  std::vector<double> apriori_beta_grid;

  KeyValueFile raw;

  std::string config_hash() const; // fnv1a64 of the canonical text
};

// Parses and validates; throws Error(invalid_argument|parse_error) whose
// message lists every offending field.
RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Re-derives the typed fields after raw.set(...) overrides (e.g. the seed).
RunConfig reload_config(const KeyValueFile& raw);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

} // namespace radshoot

#endif
