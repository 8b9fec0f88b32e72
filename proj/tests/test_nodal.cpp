#include <doctest.h>

#include <cmath>
#include <numbers>

#include "radshoot/nodal.hpp"

using namespace radshoot;

namespace {

SampledProfile sinc_profile(int samples = 2001) {
  // u(r) = sin(3 pi r) / (3 pi r) on (0, 1]
  SampledProfile p;
  p.values.resize(1);
  p.derivatives.resize(1);
  p.zero_crossings.resize(1);
  for (int i = 1; i <= samples; ++i) {
    const double r = (double)i / (double)samples;
    const double w = 3.0 * std::numbers::pi * r;
    p.radii.push_back(r);
    p.values[0].push_back(std::sin(w) / w);
    p.derivatives[0].push_back(
        (std::cos(w) - std::sin(w) / w) * 3.0 * std::numbers::pi / w);
  }
  return p;
}

} // namespace

TEST_CASE("count_nodes on explicit zeros") {
  const SampledProfile p = sinc_profile();
  CHECK(count_nodes(p.values[0]) == 2);
}

TEST_CASE("count_nodes on a sign-fixed function") {
  std::vector<double> u;
  for (int i = 1; i <= 1000; ++i) {
    const double r = (double)i / 1000.0;
    u.push_back(1.0 - r * r);
  }
  CHECK(count_nodes(u) == 0);
}

TEST_CASE("count_nodes rejects empty input") {
  CHECK_THROWS_WITH_AS(count_nodes({}), "empty input", Error);
}

TEST_CASE("count_nodes ignores the zero band and positive scalings") {
  std::vector<double> u = {1.0, 1e-12, -1e-12, 1.0, -2.0, 1e-10, -3.0, 4.0};
  CHECK(count_nodes(u) == 2); // +,+,-,-,+ pattern after the band is dropped
  std::vector<double> scaled = u, flipped = u;
  for (auto& v : scaled) v *= 7.5;
  for (auto& v : flipped) v = -v;
  CHECK(count_nodes(scaled) == count_nodes(u));
  CHECK(count_nodes(flipped) == count_nodes(u));
}

TEST_CASE("bump decomposition of the explicit-zero profile") {
  const SampledProfile p = sinc_profile();
  const auto bumps = decompose_bumps(p.radii, p.values[0], p.derivatives[0],
                                     1.0, Geometry::ball3d);
  REQUIRE(bumps.size() == 3);
  CHECK(bumps[0].sign == 1);
  CHECK(bumps[1].sign == -1);
  CHECK(bumps[2].sign == 1);
  // supports partition (0,1]: interior boundaries match the sign changes
  CHECK(bumps[0].r_hi == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(bumps[1].r_lo == bumps[0].r_hi);
  CHECK(bumps[1].r_hi == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(bumps[2].r_hi == p.radii.back());
  for (const auto& b : bumps) CHECK(b.l4_norm > 0.0);
}

TEST_CASE("bump decomposition of the zero function is empty") {
  std::vector<double> r, u, du;
  for (int i = 0; i <= 100; ++i) {
    r.push_back((double)i / 100.0);
    u.push_back(0.0);
    du.push_back(0.0);
  }
  CHECK(decompose_bumps(r, u, du, 1.0, Geometry::ball3d).empty());
}

TEST_CASE("triviality classification") {
  SampledProfile p;
  p.radii = {0.0, 0.5, 1.0};
  p.values = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  p.derivatives = p.values;
  p.zero_crossings.resize(2);
  CHECK(classify_triviality(p) == Triviality::trivial);
  p.values[0] = {1.0, 0.5, 0.0};
  CHECK(classify_triviality(p) == Triviality::semi_trivial);
  p.values[1] = {0.5, 0.25, 0.0};
  CHECK(classify_triviality(p) == Triviality::non_trivial);
}

TEST_CASE("rescale_profile identity and scaling laws") {
  const SampledProfile p = sinc_profile();

  SUBCASE("M=1, center=0 is the identity") {
    const SampledProfile q = rescale_profile(p, 1.0, 0.0);
    CHECK(q.radii == p.radii);
    CHECK(q.values == p.values);
    CHECK(q.derivatives == p.derivatives);
  }

  SUBCASE("nodal counts survive dilation") {
    const SampledProfile q = rescale_profile(p, 2.0, 0.0);
    CHECK(count_nodes(q.values[0]) == count_nodes(p.values[0]));
  }

  SUBCASE("sup-norm scales by exactly 1/M") {
    const SampledProfile q = rescale_profile(p, 4.0, 0.0);
    CHECK(q.sup_norm(0) == p.sup_norm(0) / 4.0);
  }

  SUBCASE("center beyond the span is rejected") {
    CHECK_THROWS_WITH_AS(rescale_profile(p, 2.0, 5.0), "center outside domain",
                         Error);
  }
}
