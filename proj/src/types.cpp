#include "radshoot/types.hpp"

#include <cmath>
#include <sstream>

namespace radshoot {

const char* geometry_name(Geometry g) {
  switch (g) {
  case Geometry::ball3d: return "ball3d";
  case Geometry::entire3d: return "entire3d";
  case Geometry::line: return "line";
  case Geometry::halfline: return "halfline";
  }
  return "unknown";
}

Geometry geometry_from_name(const std::string& name) {
  if (name == "ball3d") return Geometry::ball3d;
  if (name == "entire3d") return Geometry::entire3d;
  if (name == "line") return Geometry::line;
  if (name == "halfline") return Geometry::halfline;
  throw Error(Errc::parse_error, "unknown geometry '" + name + "'");
}

SystemParams SystemParams::scalar(double lambda_value, double mu_value,
                                  Geometry g) {
  SystemParams p;
  p.n = 1;
  p.lambda = {lambda_value};
  p.mu = {mu_value};
  p.beta = {{0.0}};
  p.geometry = g;
  p.validate();
  return p;
}

SystemParams SystemParams::coupled2(double lambda1, double lambda2, double mu1,
                                    double mu2, double beta12, Geometry g) {
  SystemParams p;
  p.n = 2;
  p.lambda = {lambda1, lambda2};
  p.mu = {mu1, mu2};
  p.beta = {{0.0, beta12}, {beta12, 0.0}};
  p.geometry = g;
  p.validate();
  return p;
}

SystemParams SystemParams::with_uniform_beta(double b) const {
  SystemParams p = *this;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.beta[i][j] = (i == j) ? 0.0 : b;
  return p;
}

void SystemParams::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(Errc::invalid_argument, "params." + field + ": " + why);
  };
  if (n < 1) fail("n", "component count must be positive");
  if ((int)lambda.size() != n) fail("lambda", "length must equal n");
  if ((int)mu.size() != n) fail("mu", "length must equal n");
  if ((int)beta.size() != n) fail("beta", "must be n x n");
  for (int j = 0; j < n; ++j) {
    if (!(mu[j] > 0.0) || !std::isfinite(mu[j])) {
      std::ostringstream os;
      os << "mu[" << j << "]";
      fail(os.str(), "must be finite and > 0");
    }
    if (has_lambda_term(geometry) &&
        (!(lambda[j] > 0.0) || !std::isfinite(lambda[j]))) {
      std::ostringstream os;
      os << "lambda[" << j << "]";
      fail(os.str(), "must be finite and > 0 on the ball");
    }
    if ((int)beta[j].size() != n) fail("beta", "must be n x n");
  }
  for (int i = 0; i < n; ++i) {
    if (beta[i][i] != 0.0) fail("beta", "diagonal entries must be zero");
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(beta[i][j])) fail("beta", "entries must be finite");
      if (beta[i][j] != beta[j][i]) fail("beta", "matrix must be symmetric");
    }
  }
}

void NodalProfile::validate(int n_components) const {
  if ((int)counts.size() != n_components)
    throw Error(Errc::invalid_argument,
                "nodal.p: length must equal the component count");
  for (int c : counts)
    if (c < 0)
      throw Error(Errc::invalid_argument,
                  "nodal.p: counts must be non-negative");
}

} // namespace radshoot
