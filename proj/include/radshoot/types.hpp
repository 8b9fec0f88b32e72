#ifndef RADSHOOT_TYPES_HPP
#define RADSHOOT_TYPES_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace radshoot {

enum class Errc {
  invalid_argument,
  parse_error,
  solver_failure,
  io_error,
  internal
};

// All recoverable failures in the library are reported through this type.
// `what()` carries the human-readable message quoted by the CLI and C API.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

// Domain the radial problem lives on. ball3d is the unit ball in R^3 with the
// linear lambda-term present; the entire-space variants drop the lambda-term.
enum class Geometry { ball3d, entire3d, line, halfline };

const char* geometry_name(Geometry g);
Geometry geometry_from_name(const std::string& name);

// True for the 3-d radial Laplacian (has the 2/r first-order term).
inline bool is_three_dimensional(Geometry g) {
  return g == Geometry::ball3d || g == Geometry::entire3d;
}

// True when the linear lambda*u term is part of the equation.
inline bool has_lambda_term(Geometry g) { return g == Geometry::ball3d; }

// Coefficients of the coupled cubic system
//   -Lap u_j + lambda_j u_j = mu_j u_j^3 + sum_{i != j} beta_ij u_i^2 u_j.
// beta is stored as a dense symmetric matrix with zero diagonal.
struct SystemParams {
  int n = 1;
  std::vector<double> lambda;            // length n, > 0 where the term exists
  std::vector<double> mu;                // length n, > 0
  std::vector<std::vector<double>> beta; // n x n, symmetric, zero diagonal
  Geometry geometry = Geometry::ball3d;

  static SystemParams scalar(double lambda_value, double mu_value,
                             Geometry g = Geometry::ball3d);
  static SystemParams coupled2(double lambda1, double lambda2, double mu1,
                               double mu2, double beta12,
                               Geometry g = Geometry::ball3d);

  // Same params with every off-diagonal coupling replaced by `b`.
  SystemParams with_uniform_beta(double b) const;

  void validate() const; // throws Error(invalid_argument) naming the field
};

// Prescribed sign-change counts, one per component.
struct NodalProfile {
  std::vector<int> counts;

  void validate(int n_components) const;
};

} // namespace radshoot

#endif
