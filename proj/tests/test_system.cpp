#include <doctest.h>

#include <cmath>
#include <numbers>

#include "radshoot/energy.hpp"
#include "radshoot/quadrature.hpp"
#include "radshoot/scalar.hpp"
#include "radshoot/system.hpp"

using namespace radshoot;

TEST_CASE("newton from the decoupled scalar seeds converges immediately") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.0);
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const double a2 = find_amplitude(1.5, 1.0, 2).amplitudes[0];
  const SolutionRecord rec =
      newton_refine(params, std::vector<double>{a1, a2});
  CHECK(rec.nodal_counts == std::vector<int>{1, 2});
  CHECK(rec.boundary_residual <= 1e-10);
  CHECK(std::abs(rec.amplitudes[0] - a1) <= 1e-8 * a1);
  CHECK(std::abs(rec.amplitudes[1] - a2) <= 1e-8 * a2);
}

TEST_CASE("newton from zero returns the trivial record") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.1);
  const SolutionRecord rec =
      newton_refine(params, std::vector<double>{0.0, 0.0});
  CHECK(rec.boundary_residual == 0.0);
  CHECK(classify_triviality(rec.profile) == Triviality::trivial);
}

TEST_CASE("shooting-map consistency at the returned amplitudes") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.05);
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const SolutionRecord rec =
      newton_refine(params, std::vector<double>{a1, a1});
  IntegratorConfig cfg;
  const auto out = integrate(
      params, cfg, origin_series_start(params, rec.amplitudes, cfg.origin_h0));
  double fresh = 0.0;
  for (int j = 0; j < 2; ++j)
    fresh = std::max(fresh, std::abs(out.dense.value(1.0, j)));
  CHECK(std::abs(fresh - rec.boundary_residual) <= 1e-12);
}

TEST_CASE("sign normalization flips negative components exactly") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.05);
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const SolutionRecord plus =
      newton_refine(params, std::vector<double>{a1, a1});
  const SolutionRecord mixed =
      newton_refine(params, std::vector<double>{a1, -a1});
  REQUIRE(plus.amplitudes.size() == 2);
  CHECK(plus.amplitudes[0] > 0.0);
  CHECK(plus.amplitudes[1] > 0.0);
  CHECK(mixed.amplitudes[0] == plus.amplitudes[0]);
  CHECK(mixed.amplitudes[1] == plus.amplitudes[1]);
  CHECK(mixed.nodal_counts == plus.nodal_counts);
  CHECK(mixed.profile.values[1] == plus.profile.values[1]);
}

TEST_CASE("boundary map on the zero record is the linear closed form") {
  const SystemParams params = SystemParams::coupled2(1.0, 2.0, 1.0, 1.0, 0.3);
  SolutionRecord trivial;
  trivial.params = params;
  trivial.amplitudes = {0.0, 0.0};
  const BoundaryMapResult bm = linearized_boundary_map(params, trivial);
  CHECK(bm.L[0][0] == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
  CHECK(bm.L[1][1] ==
        doctest::Approx(std::sinh(std::sqrt(2.0)) / std::sqrt(2.0))
            .epsilon(1e-9));
  CHECK(std::abs(bm.L[0][1]) <= 1e-10);
  CHECK(std::abs(bm.L[1][0]) <= 1e-10);
}

TEST_CASE("det L at beta=0 is the product of the scalar linearized values") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.0);
  const SolutionRecord r1 = find_amplitude(1.0, 1.0, 1);
  const SolutionRecord r2 = find_amplitude(1.5, 1.0, 0);
  const SolutionRecord rec = newton_refine(
      params, std::vector<double>{r1.amplitudes[0], r2.amplitudes[0]});
  const BoundaryMapResult bm = linearized_boundary_map(params, rec);
  const double v1 = nondegeneracy_scalar(1.0, 1.0, r1).v_end;
  const double v2 = nondegeneracy_scalar(1.5, 1.0, r2).v_end;
  CHECK(std::abs(bm.det - v1 * v2) <= 1e-8 * std::abs(v1 * v2));
}

TEST_CASE("nondegenerate coupled record near beta=0.05") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.05);
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const SolutionRecord rec =
      newton_refine(params, std::vector<double>{a1, a1});
  CHECK(rec.nodal_counts == std::vector<int>{1, 1});
  CHECK(linearized_boundary_map(params, rec).nondegenerate);
}

TEST_CASE("continuation to beta=0 returns the seed alone") {
  const SystemParams base = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.0);
  const NodalProfile nodes{{1, 2}};
  const ContinuationPath path =
      continue_in_beta(base, base.beta, nodes);
  CHECK(path.reached_target);
  CHECK(path.steps.size() == 1);
  CHECK(path.steps[0].record.nodal_counts == nodes.counts);
}

TEST_CASE("continuation walks to both coupling signs") {
  const SystemParams base = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.0);
  const NodalProfile nodes{{1, 2}};
  for (double beta : {-0.05, 0.05}) {
    CAPTURE(beta);
    const SystemParams target =
        SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, beta);
    const ContinuationPath path =
        continue_in_beta(base, target.beta, nodes);
    REQUIRE(path.reached_target);
    REQUIRE(path.steps.size() >= 2);

    double dF_dbeta = 0.0; // scale of the beta-derivative of the shooting map
    for (std::size_t k = 0; k + 1 < path.steps.size(); ++k) {
      const auto& cur = path.steps[k];
      const auto& nxt = path.steps[k + 1];
      CHECK(cur.record.nodal_counts == nodes.counts);
      CHECK(cur.boundary_map.nondegenerate);
      CHECK(cur.record.boundary_residual <= 1e-10);

      const double dbeta = std::abs(nxt.beta[0][1] - cur.beta[0][1]);
      if (k == 0) {
        // probe |dF/dbeta| once: boundary values of the old amplitudes
        // under the next coupling
        SystemParams probe_params = base;
        probe_params.beta = nxt.beta;
        IntegratorConfig cfg;
        const auto out = integrate(
            probe_params, cfg,
            origin_series_start(probe_params, cur.record.amplitudes,
                                cfg.origin_h0));
        for (int j = 0; j < 2; ++j)
          dF_dbeta = std::max(
              dF_dbeta, std::abs(out.dense.value(1.0, j)) / dbeta);
      }
      Eigen::Matrix2d L;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L(i, j) = cur.boundary_map.L[i][j];
      const double inv_norm = L.inverse().cwiseAbs().rowwise().sum().maxCoeff();
      double da = 0.0;
      for (int j = 0; j < 2; ++j)
        da = std::max(da, std::abs(nxt.record.amplitudes[j] -
                                   cur.record.amplitudes[j]));
      CHECK(da <= 10.0 * dbeta * inv_norm * std::max(1.0, dF_dbeta));
    }
    CHECK(path.steps.back().record.nodal_counts == nodes.counts);
    CHECK(path.steps.back().boundary_map.nondegenerate);
  }
}

TEST_CASE("continuation energy shift is first order in beta") {
  const SystemParams base = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.0);
  const NodalProfile nodes{{1, 2}};
  const SystemParams target = SystemParams::coupled2(1.0, 1.5, 1.0, 1.0, 0.05);
  const ContinuationPath path = continue_in_beta(base, target.beta, nodes);
  REQUIRE(path.reached_target);
  const SolutionRecord& at_zero = path.steps.front().record;
  const SolutionRecord& at_end = path.steps.back().record;

  std::vector<double> cross(at_zero.profile.size());
  for (std::size_t i = 0; i < cross.size(); ++i) {
    const double u1 = at_zero.profile.values[0][i];
    const double u2 = at_zero.profile.values[1][i];
    cross[i] = u1 * u1 * u2 * u2;
  }
  const double coupling_mass =
      radial_integral(at_zero.profile.radii, cross, Geometry::ball3d);
  CHECK(std::abs(at_end.energy - at_zero.energy) <= 0.05 * coupling_mass);
}

TEST_CASE("continuation stalls gracefully past the existence range") {
  // beta -> -2 crosses -mu where the symmetric coupled problem degenerates
  const SystemParams base = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.0);
  const SystemParams target = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, -2.0);
  const NodalProfile nodes{{0, 0}};
  StepPolicy policy;
  policy.min_fraction = 1e-3;
  const ContinuationPath path =
      continue_in_beta(base, target.beta, nodes, policy);
  CHECK(!path.reached_target);
  CHECK(path.stalled);
  CHECK(path.message == "continuation stalled");
  CHECK(!path.steps.empty());
  CHECK(path.reached_fraction < 1.0);
  CHECK(path.steps.back().record.boundary_residual <= 1e-10);
}

TEST_CASE("bump diagnostic rows and the partition identity") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.02);
  const double a1 = find_amplitude(1.0, 1.0, 1).amplitudes[0];
  const SolutionRecord rec =
      newton_refine(params, std::vector<double>{a1, a1});
  const auto rows = bump_l4_diagnostic(params, rec);
  REQUIRE(rows.size() == 4); // two bumps per component
  for (const auto& row : rows) {
    CHECK(row.l4_norm > 0.0);
    CHECK(row.h1_quotient > 0.0);
  }

  SolutionRecord trivial;
  trivial.params = params;
  trivial.amplitudes = {0.0, 0.0};
  trivial.profile.radii = {0.0, 0.5, 1.0};
  trivial.profile.values = {{0, 0, 0}, {0, 0, 0}};
  trivial.profile.derivatives = trivial.profile.values;
  trivial.profile.zero_crossings.resize(2);
  CHECK(bump_l4_diagnostic(params, trivial).empty());
}

TEST_CASE("uniqueness sweep: empty box yields none-found") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0);
  UniquenessOptions opt;
  opt.launches = 20;
  opt.box_hi = 1.0; // far below the smallest nodal amplitude
  const UniquenessReport rep =
      uniqueness_sweep(params, NodalProfile{{0}}, opt);
  CHECK(rep.verdict == "none-found");
  CHECK(rep.clusters.empty());
}

TEST_CASE("uniqueness sweep finds the single scalar ground state") {
  const SystemParams params = SystemParams::scalar(1.0, 1.0);
  UniquenessOptions opt;
  opt.launches = 60;
  opt.box_hi = 10.0;
  const UniquenessReport rep =
      uniqueness_sweep(params, NodalProfile{{0}}, opt);
  CHECK(rep.verdict == "unique");
  REQUIRE(rep.clusters.size() == 1);
  CHECK(rep.clusters[0].amplitudes[0] == doctest::Approx(7.5841391912).epsilon(1e-6));
}

TEST_CASE("uniqueness sweep is schedule independent") {
  const SystemParams params = SystemParams::coupled2(1.0, 1.0, 1.0, 1.0, 0.02);
  const NodalProfile nodes{{1, 1}};
  UniquenessOptions opt;
  opt.launches = 24;
  opt.jobs = 1;
  const UniquenessReport seq = uniqueness_sweep(params, nodes, opt);
  opt.jobs = 4;
  const UniquenessReport par = uniqueness_sweep(params, nodes, opt);
  CHECK(seq.kept == par.kept);
  REQUIRE(seq.clusters.size() == par.clusters.size());
  for (std::size_t c = 0; c < seq.clusters.size(); ++c) {
    CHECK(seq.clusters[c].count == par.clusters[c].count);
    CHECK(seq.clusters[c].amplitudes == par.clusters[c].amplitudes);
  }
}

TEST_CASE("halton points are deterministic and in (0,1)") {
  for (int d = 0; d < 4; ++d)
    for (std::uint64_t i = 1; i < 100; ++i) {
      const double x = halton_point(i, d);
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      CHECK(x == halton_point(i, d));
    }
}
