#include <doctest.h>

#include <cmath>

#include "radshoot/energy.hpp"
#include "radshoot/nodal.hpp"
#include "radshoot/quadrature.hpp"
#include "radshoot/scalar.hpp"

#include "support/oracles.hpp"

using namespace radshoot;

// amplitudes of the lambda=1..5, mu=1 nodal classes, frozen from the
// bisection-shooting oracle (fixed-step RK4, h=1e-4); the oracle's own
// truncation bias at the P=3 amplitudes is ~1e-6 absolute
namespace {
struct Golden {
  double lambda;
  int nodes;
  double amplitude;
};
constexpr Golden kGoldenAmplitudes[] = {
    {1.0, 0, 7.584139191244},   {1.0, 1, 37.098469184855},
    {1.0, 2, 104.193070236507}, {1.0, 3, 224.283007926144},
    {2.0, 0, 8.295397148355},   {2.0, 1, 38.259149445658},
    {5.0, 0, 10.482894764705},  {5.0, 1, 41.920181695920},
};
} // namespace

TEST_CASE("shoot_scalar basics") {
  SUBCASE("zero amplitude: zero boundary value, zero nodes") {
    const ScalarShot shot = shoot_scalar(1.0, 1.0, 0.0);
    CHECK(shot.boundary_value == 0.0);
    CHECK(shot.node_count == 0);
    CHECK(shot.outcome.profile.sup_norm() == 0.0);
  }
  SUBCASE("near-linear regime: u(1) ~ a sinh(1)") {
    const ScalarShot shot = shoot_scalar(1.0, 1.0, 0.1);
    CHECK(shot.node_count == 0);
    CHECK(std::abs(shot.boundary_value - 0.1 * std::sinh(1.0)) <= 2e-3);
  }
}

TEST_CASE("find_amplitude hits the golden oracle values") {
  for (const auto& g : kGoldenAmplitudes) {
    CAPTURE(g.lambda);
    CAPTURE(g.nodes);
    const SolutionRecord rec = find_amplitude(g.lambda, 1.0, g.nodes);
    CHECK(std::abs(rec.amplitudes[0] - g.amplitude) <=
          1e-6 * std::max(1.0, g.amplitude));
    CHECK(rec.boundary_residual <= 1e-10);
    CHECK(rec.nodal_counts[0] == g.nodes);
    CHECK(rec.ode_residual <= 1e-6);
    CHECK(rec.amplitudes[0] > 0.0);
  }
}

TEST_CASE("find_amplitude agrees with a freshly run bisection oracle") {
  const double a_oracle = oracles::find_amplitude_bisection(1.0, 1.0, 2);
  const SolutionRecord rec = find_amplitude(1.0, 1.0, 2);
  CHECK(std::abs(rec.amplitudes[0] - a_oracle) <= 1e-6 * a_oracle);
}

TEST_CASE("boundary value vanishes at the found amplitude") {
  const SolutionRecord rec = find_amplitude(1.0, 1.0, 0);
  const ScalarShot shot = shoot_scalar(1.0, 1.0, rec.amplitudes[0]);
  CHECK(std::abs(shot.boundary_value) <= 1e-8);
  CHECK(shot.node_count == 0);
}

TEST_CASE("amplitudes are strictly increasing in the nodal count") {
  double prev = 0.0;
  for (int p = 0; p <= 3; ++p) {
    const SolutionRecord rec = find_amplitude(1.0, 1.0, p);
    CHECK(rec.amplitudes[0] > prev);
    prev = rec.amplitudes[0];
  }
}

TEST_CASE("mu-scaling: quadrupling mu halves the amplitude") {
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const double a4 = find_amplitude(1.0, 4.0, 1).amplitudes[0];
  CHECK(std::abs(a4 - a1 / 2.0) <= 1e-8 * a1);
}

TEST_CASE("unreachable class reports an error") {
  ScalarSolveOptions opt;
  opt.amplitude_cap = 5.0;
  CHECK_THROWS_WITH_AS(find_amplitude(1.0, 1.0, 3, opt),
                       "nodal class unreachable", Error);
}

TEST_CASE("transform endpoints in closed form") {
  CHECK(std::abs(transform_T(1.0) - std::tanh(1.0)) <= 1e-15);
  CHECK(std::abs(companion_phi(1.0, 1.0) - std::cosh(1.0)) <= 1e-15);
  // quadrature cross-check of T for the general-lambda density
  for (double lambda : {1.0, 2.0, 5.0}) {
    const double s = std::sqrt(lambda);
    const double quad = oracles::adaptive_simpson(
        [&](double r) {
          const double c = std::cosh(s * r);
          return lambda / (c * c);
        },
        0.0, 1.0, 1e-15);
    CHECK(std::abs(transform_T(lambda) - quad) <= 1e-12);
  }
}

TEST_CASE("transform of the zero solution is identically zero") {
  SampledProfile zero;
  zero.radii = {0.0, 0.5, 1.0};
  zero.values = {{0.0, 0.0, 0.0}};
  zero.derivatives = {{0.0, 0.0, 0.0}};
  zero.zero_crossings.resize(1);
  TransformOptions topt;
  topt.t_points = 2001;
  const TransformedProfile tp = transform_profile(1.0, 1.0, zero, topt);
  CHECK(tp.sup_transform_residual <= 1e-14);
  CHECK(tp.round_trip_error <= 1e-14);
  for (double y : tp.y) CHECK(y == 0.0);
}

TEST_CASE("transform chain on converged solutions") {
  for (const auto& [lambda, p] : {std::pair{1.0, 0}, {1.0, 2}, {2.0, 1}}) {
    CAPTURE(lambda);
    CAPTURE(p);
    const SolutionRecord rec = find_amplitude(lambda, 1.0, p);
    const TransformedProfile tp = transform_profile(lambda, 1.0, rec.profile);
    CHECK(tp.sup_transform_residual <= 1e-6);
    CHECK(tp.round_trip_error <= 1e-8);
    CHECK(tp.dydt_cross_check <= 1e-6);
    CHECK(tp.T == transform_T(lambda));
    CHECK(tp.t_grid.front() == 0.0);
    CHECK(tp.y.front() == 0.0);
  }
}

TEST_CASE("nondegeneracy: trivial record integrates z'' = 0 to z(T) = tanh 1") {
  SolutionRecord rec;
  rec.params = SystemParams::scalar(1.0, 1.0);
  rec.amplitudes = {0.0};
  const NondegeneracyResult nd = nondegeneracy_scalar(1.0, 1.0, rec);
  CHECK(std::abs(nd.z_end - std::tanh(1.0)) <= 1e-10);
  CHECK(std::abs(nd.v_end - std::sinh(1.0)) <= 1e-10);
  CHECK(nd.nondegenerate);
}

TEST_CASE("nondegeneracy of converged solutions and route consistency") {
  for (const auto& [lambda, p] : {std::pair{1.0, 0}, {1.0, 1}, {2.0, 0}}) {
    CAPTURE(lambda);
    CAPTURE(p);
    const SolutionRecord rec = find_amplitude(lambda, 1.0, p);
    const NondegeneracyResult nd = nondegeneracy_scalar(lambda, 1.0, rec);
    CHECK(nd.nondegenerate);
    // the transformed and radial flows are linked by z = v/phi up to the
    // initial-slope normalization
    const double predicted =
        std::pow(lambda, 1.5) * nd.v_end / companion_phi(lambda, 1.0);
    CHECK(std::abs(nd.z_end - predicted) <=
          1e-6 * std::max(1.0, std::abs(nd.z_end)));
  }
}

TEST_CASE("z-flow is linear in the initial slope") {
  const SolutionRecord rec = find_amplitude(1.0, 1.0, 1);
  NondegeneracyOptions opt;
  const NondegeneracyResult base = nondegeneracy_scalar(1.0, 1.0, rec, opt);
  opt.z_slope = 2.0;
  const NondegeneracyResult doubled = nondegeneracy_scalar(1.0, 1.0, rec, opt);
  CHECK(std::abs(doubled.z_end - 2.0 * base.z_end) <=
        1e-12 * std::abs(base.z_end));
}

TEST_CASE("bump diagnostics of the P=1 solution") {
  const SolutionRecord rec = find_amplitude(1.0, 1.0, 1);
  const auto bumps = decompose_bumps(rec.params, rec.profile);
  REQUIRE(bumps.per_component[0].size() == 2);
  for (const auto& b : bumps.per_component[0]) {
    CHECK(b.l4_norm >= 0.1);
    // quadrature oracle over the bump support
    const auto& prof = rec.profile;
    auto u_at = [&](double r) {
      auto it = std::lower_bound(prof.radii.begin(), prof.radii.end(), r);
      std::size_t i = (std::size_t)(it - prof.radii.begin());
      if (i == 0) return prof.values[0][0];
      if (i >= prof.size()) return prof.values[0].back();
      const double w =
          (r - prof.radii[i - 1]) / (prof.radii[i] - prof.radii[i - 1]);
      return prof.values[0][i - 1] + w * (prof.values[0][i] - prof.values[0][i - 1]);
    };
    const double m4 = oracles::adaptive_simpson(
        [&](double r) {
          const double u = u_at(r);
          return 4.0 * std::numbers::pi * r * r * u * u * u * u;
        },
        b.r_lo, b.r_hi, 1e-12);
    CHECK(b.l4_norm == doctest::Approx(std::pow(m4, 0.25)).epsilon(1e-4));
  }

  // bumps partition the support: the fourth powers add up to |u|_4^4
  double sum4 = 0.0;
  for (const auto& b : bumps.per_component[0])
    sum4 += std::pow(b.l4_norm, 4.0);
  std::vector<double> u4(rec.profile.size());
  for (std::size_t i = 0; i < rec.profile.size(); ++i) {
    const double u = rec.profile.values[0][i];
    u4[i] = u * u * u * u;
  }
  const double total4 =
      radial_integral(rec.profile.radii, u4, Geometry::ball3d);
  CHECK(std::abs(sum4 - total4) <= 1e-10 * std::max(1.0, total4));
}
