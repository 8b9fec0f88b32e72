#include "radshoot/profile.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace radshoot {

double SampledProfile::sup_norm(int component) const {
  double m = 0.0;
  for (double v : values.at(component)) m = std::max(m, std::abs(v));
  return m;
}

double SampledProfile::sup_norm() const {
  double m = 0.0;
  for (int j = 0; j < components(); ++j) m = std::max(m, sup_norm(j));
  return m;
}

void SampledProfile::validate() const {
  if (radii.empty()) throw Error(Errc::invalid_argument, "empty input");
  if (values.size() != derivatives.size())
    throw Error(Errc::invalid_argument, "profile: values/derivatives mismatch");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw Error(Errc::invalid_argument,
                  "profile: radii must be strictly increasing");
  for (double r : radii)
    if (!std::isfinite(r))
      throw Error(Errc::invalid_argument, "profile: non-finite radius");
  for (const auto* comp : {&values, &derivatives})
    for (const auto& seq : *comp) {
      if (seq.size() != radii.size())
        throw Error(Errc::invalid_argument, "profile: ragged component");
      for (double v : seq)
        if (!std::isfinite(v))
          throw Error(Errc::invalid_argument, "profile: non-finite sample");
    }
  for (const auto& roots : zero_crossings)
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0 && !(roots[i] > roots[i - 1]))
        throw Error(Errc::invalid_argument,
                    "profile: zero crossings must increase");
      if (roots[i] < radii.front() - 1e-12 || roots[i] > radii.back() + 1e-12)
        throw Error(Errc::invalid_argument,
                    "profile: zero crossing outside radius span");
    }
}

void SolutionRecord::validate(double boundary_tolerance) const {
  profile.validate();
  if ((int)amplitudes.size() != params.n)
    throw Error(Errc::invalid_argument, "record: amplitude length mismatch");
  if (boundary_residual > boundary_tolerance)
    throw Error(Errc::solver_failure,
                "record: boundary residual above declared tolerance");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_profile_csv(std::ostream& out, const SampledProfile& profile,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "r";
  for (int j = 0; j < profile.components(); ++j)
    out << ",u_" << (j + 1) << ",du_" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << format_double(profile.radii[i]);
    for (int j = 0; j < profile.components(); ++j)
      out << "," << format_double(profile.values[j][i]) << ","
          << format_double(profile.derivatives[j][i]);
    out << "\n";
  }
}

SampledProfile read_profile_csv(std::istream& in) {
  SampledProfile p;
  std::string line;
  bool header_seen = false;
  int n_components = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      n_components = 0;
      for (char c : line)
        if (c == ',') ++n_components;
      n_components /= 2;
      if (n_components < 1)
        throw Error(Errc::parse_error, "profile csv: bad header");
      p.values.resize(n_components);
      p.derivatives.resize(n_components);
      p.zero_crossings.resize(n_components);
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ','))
      cells.push_back(std::stod(cell));
    if ((int)cells.size() != 1 + 2 * n_components)
      throw Error(Errc::parse_error, "profile csv: bad row width");
    p.radii.push_back(cells[0]);
    for (int j = 0; j < n_components; ++j) {
      p.values[j].push_back(cells[1 + 2 * j]);
      p.derivatives[j].push_back(cells[2 + 2 * j]);
    }
  }
  if (!header_seen) throw Error(Errc::parse_error, "profile csv: empty file");
  return p;
}

} // namespace radshoot
