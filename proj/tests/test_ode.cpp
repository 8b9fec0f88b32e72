#include <doctest.h>

#include <cmath>

#include "radshoot/ode.hpp"

#include "support/oracles.hpp"

using namespace radshoot;

TEST_CASE("rhs: cancellation, entire-space and coupled substitution") {
  std::vector<double> du_out(2), ddu_out(2);

  const SystemParams ball = SystemParams::scalar(1.0, 1.0);
  rhs(ball, 0.5, std::vector<double>{1.0}, std::vector<double>{0.0},
      std::span<double>(du_out.data(), 1), std::span<double>(ddu_out.data(), 1));
  CHECK(ddu_out[0] == doctest::Approx(0.0));

  const SystemParams entire = SystemParams::scalar(1.0, 1.0, Geometry::entire3d);
  rhs(entire, 1.0, std::vector<double>{1.0}, std::vector<double>{0.0},
      std::span<double>(du_out.data(), 1), std::span<double>(ddu_out.data(), 1));
  CHECK(ddu_out[0] == doctest::Approx(-1.0));

  const SystemParams pair = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.5);
  rhs(pair, 1.0, std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0},
      du_out, ddu_out);
  CHECK(ddu_out[0] == doctest::Approx(-0.5));
  CHECK(ddu_out[1] == doctest::Approx(-0.5));

  CHECK_THROWS_WITH_AS(
      rhs(ball, 0.0, std::vector<double>{1.0}, std::vector<double>{0.0},
          std::span<double>(du_out.data(), 1),
          std::span<double>(ddu_out.data(), 1)),
      "origin requires series start", Error);
}

TEST_CASE("origin series start") {
  SUBCASE("ball, lambda=mu=1, a=2: c = -1") {
    const SystemParams params = SystemParams::scalar(1.0, 1.0);
    const double h0 = 1e-3;
    const ShootState s = origin_series_start(params, std::vector<double>{2.0}, h0);
    CHECK(s.u[0] == doctest::Approx(2.0 - h0 * h0).epsilon(1e-12));
    CHECK(s.du[0] == doctest::Approx(-2.0 * h0).epsilon(1e-12));
  }
  SUBCASE("zero amplitude is the fixed point") {
    const SystemParams params = SystemParams::scalar(1.0, 1.0);
    const ShootState s =
        origin_series_start(params, std::vector<double>{0.0}, 1e-6);
    CHECK(s.u[0] == 0.0);
    CHECK(s.du[0] == 0.0);
  }
  SUBCASE("entire3d drops the lambda term: c = -1/6") {
    const SystemParams params =
        SystemParams::scalar(1.0, 1.0, Geometry::entire3d);
    const auto c = origin_series_coefficients(params, std::vector<double>{1.0});
    CHECK(c[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  }
  SUBCASE("h0 <= 0 is rejected") {
    const SystemParams params = SystemParams::scalar(1.0, 1.0);
    CHECK_THROWS_AS(origin_series_start(params, std::vector<double>{1.0}, 0.0),
                    Error);
  }
}

TEST_CASE("integrate: zero start state gives a zero profile with no events") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0);
  IntegratorConfig cfg;
  const ShootState start =
      origin_series_start(params, std::vector<double>{0.0}, cfg.origin_h0);
  const IntegrationOutcome out = integrate(params, cfg, start);
  CHECK(out.reason == Termination::reached_end);
  CHECK(out.events.empty());
  CHECK(out.profile.sup_norm() == 0.0);
}

TEST_CASE("integrate: near-linear regime matches a sinh/r profile") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0);
  IntegratorConfig cfg;
  const ShootState start =
      origin_series_start(params, std::vector<double>{0.1}, cfg.origin_h0);
  const IntegrationOutcome out = integrate(params, cfg, start);
  CHECK(out.counted_nodes()[0] == 0);
  CHECK(std::abs(out.dense.value(1.0, 0) - 0.1 * std::sinh(1.0)) <= 2e-3);
}

TEST_CASE("integrate: entire-space unit amplitude oscillates") {
  // fixed-step RK4 places the first crossings near r = 6.90, 35.96, 102.60
  const SystemParams params = SystemParams::scalar(1.0, 1.0, Geometry::entire3d);
  IntegratorConfig cfg;
  cfg.r_max = 120.0;
  const ShootState start =
      origin_series_start(params, std::vector<double>{1.0}, cfg.origin_h0);
  const IntegrationOutcome out = integrate(params, cfg, start);
  REQUIRE(out.counted_nodes()[0] >= 3);
  const auto& roots = out.profile.zero_crossings[0];
  CHECK(roots[0] == doctest::Approx(6.8969).epsilon(1e-3));
  CHECK(roots[1] == doctest::Approx(35.962).epsilon(1e-3));
  CHECK(roots[2] == doctest::Approx(102.60).epsilon(1e-3));
}

TEST_CASE("oracle equivalence: adaptive vs fixed-step RK4 at h=1e-4") {
  for (double lambda : {1.0, 2.0}) {
    for (double a : {0.5, 3.0}) {
      const SystemParams params = SystemParams::scalar(lambda, 1.0);
      IntegratorConfig cfg;
      const ShootState start =
          origin_series_start(params, std::vector<double>{a}, cfg.origin_h0);
      const IntegrationOutcome out = integrate(params, cfg, start);

      const auto oracle = oracles::shoot_scalar_rk4(lambda, 1.0, a, 1e-4);
      double worst = 0.0;
      for (std::size_t i = 0; i < oracle.trace.t.size(); i += 7) {
        const double r = oracle.trace.t[i];
        worst = std::max(worst, std::abs(out.dense.value(r, 0) -
                                         oracle.trace.y[i][0]));
      }
      CAPTURE(lambda);
      CAPTURE(a);
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("odd symmetry: flipping one amplitude flips exactly one component") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.5, 1.0, 2.0, 0.1);
  IntegratorConfig cfg;
  const std::vector<double> a = {1.2, 0.7};
  const std::vector<double> a_flipped = {1.2, -0.7};
  const auto out = integrate(
      params, cfg, origin_series_start(params, a, cfg.origin_h0));
  const auto out_f = integrate(
      params, cfg, origin_series_start(params, a_flipped, cfg.origin_h0));
  REQUIRE(out.profile.size() == out_f.profile.size());
  for (std::size_t i = 0; i < out.profile.size(); ++i) {
    CHECK(out.profile.values[0][i] == out_f.profile.values[0][i]);
    CHECK(out.profile.values[1][i] == -out_f.profile.values[1][i]);
  }
}

TEST_CASE("entire-space scaling symmetry") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0, Geometry::entire3d);
  const double sigma = 2.0;
  IntegratorConfig cfg;
  cfg.r_max = 20.0;
  const auto base = integrate(
      params, cfg, origin_series_start(params, std::vector<double>{1.0},
                                       cfg.origin_h0));
  IntegratorConfig cfg2 = cfg;
  cfg2.r_max = 20.0 / sigma;
  const auto scaled = integrate(
      params, cfg2, origin_series_start(params, std::vector<double>{sigma},
                                        cfg2.origin_h0));
  double worst = 0.0;
  for (double r : {0.5, 1.0, 3.0, 7.0, 9.5}) {
    worst = std::max(worst, std::abs(scaled.dense.value(r, 0) -
                                     sigma * base.dense.value(sigma * r, 0)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("event roots are bracketed by opposite-sign samples") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0, Geometry::entire3d);
  IntegratorConfig cfg;
  cfg.r_max = 50.0;
  const auto out = integrate(
      params, cfg, origin_series_start(params, std::vector<double>{1.0},
                                       cfg.origin_h0));
  REQUIRE(!out.profile.zero_crossings[0].empty());
  for (double root : out.profile.zero_crossings[0]) {
    auto it = std::lower_bound(out.profile.radii.begin(),
                               out.profile.radii.end(), root);
    REQUIRE(it != out.profile.radii.begin());
    REQUIRE(it != out.profile.radii.end());
    const std::size_t hi = (std::size_t)(it - out.profile.radii.begin());
    const double before = out.profile.values[0][hi - 1];
    const double after = out.profile.values[0][hi];
    CHECK(before * after < 0.0);
  }
}

TEST_CASE("blow-up detection with a strongly negative coupling") {
  // beta = -3 makes the symmetric direction grow: u'' ~ lambda u + 2 u^3
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, -3.0);
  IntegratorConfig cfg;
  cfg.r_max = 10.0;
  const auto out = integrate(
      params, cfg, origin_series_start(params, std::vector<double>{2.0, 2.0},
                                       cfg.origin_h0));
  CHECK(out.reason == Termination::blow_up);
  CHECK(out.end_r < 10.0);
  CHECK(out.end_r > 0.0);
}

TEST_CASE("variational Jacobian: decoupled diagonal and closed form at zero") {
  IntegratorConfig cfg;
  SUBCASE("beta = 0 gives a diagonal boundary Jacobian") {
    const SystemParams params = SystemParams::coupled2(1.0, 2.0, 1.0, 1.0, 0.0);
    const auto sens = integrate_with_sensitivity(
        params, cfg, std::vector<double>{1.0, 1.5});
    CHECK(std::abs(sens.boundary_jacobian[0][1]) <= 1e-10);
    CHECK(std::abs(sens.boundary_jacobian[1][0]) <= 1e-10);
  }
  SUBCASE("zero amplitude: diagonal entries sinh(sqrt(lambda))/sqrt(lambda)") {
    const SystemParams params = SystemParams::coupled2(1.0, 2.0, 1.0, 1.0, 0.3);
    const auto sens = integrate_with_sensitivity(
        params, cfg, std::vector<double>{0.0, 0.0});
    CHECK(sens.boundary_jacobian[0][0] ==
          doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
    CHECK(sens.boundary_jacobian[1][1] ==
          doctest::Approx(std::sinh(std::sqrt(2.0)) / std::sqrt(2.0))
              .epsilon(1e-9));
  }
}

TEST_CASE("variational Jacobian matches central finite differences") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.5, 1.0, 2.0, 0.1);
  IntegratorConfig cfg;
  const std::vector<double> a = {1.5, 1.0};
  const auto sens = integrate_with_sensitivity(params, cfg, a);
  const double eps = 1e-6;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> ap = a, am = a;
    ap[(std::size_t)k] += eps;
    am[(std::size_t)k] -= eps;
    const auto outp = integrate(
        params, cfg, origin_series_start(params, ap, cfg.origin_h0));
    const auto outm = integrate(
        params, cfg, origin_series_start(params, am, cfg.origin_h0));
    for (int i = 0; i < 2; ++i) {
      const double fd =
          (outp.dense.value(1.0, i) - outm.dense.value(1.0, i)) / (2.0 * eps);
      const double var = sens.boundary_jacobian[i][k];
      CHECK(std::abs(fd - var) <= 1e-5 * std::max(1.0, std::abs(var)));
    }
  }
}

TEST_CASE("ode defect of an integrated trajectory is small") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0);
  IntegratorConfig cfg;
  const ShootState start =
      origin_series_start(params, std::vector<double>{4.0}, cfg.origin_h0);
  CHECK(ode_defect_sup(params, cfg, start) <= 1e-8);
}
