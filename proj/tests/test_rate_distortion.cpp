#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/types.hpp"

using namespace rdexp;
using Catch::Approx;

namespace {
const DistortionSpec kHamming2({{0.0, 1.0}, {1.0, 0.0}});
}

TEST_CASE("binary Hamming rate matches the closed form") {
  Distribution p({0.3, 0.7});
  auto pt = rate_at_delta(p, kHamming2, 0.1);
  CHECK(pt.rate == Approx(0.2857813286634453).margin(1e-7));
  for (double delta : {0.05, 0.15, 0.25}) {
    auto q = rate_at_delta(p, kHamming2, delta);
    CHECK(q.rate == Approx(binary_entropy(0.3) - binary_entropy(delta)).margin(1e-7));
  }
}

TEST_CASE("rate is zero at and beyond delta_max") {
  Distribution p({0.3, 0.7});
  for (double delta : {0.3, 0.35, 2.0}) {
    auto pt = rate_at_delta(p, kHamming2, delta);
    CHECK(pt.rate == 0.0);
    CHECK(pt.nu == 0.0);
    REQUIRE(pt.p_y.size() == 2);
    CHECK(pt.p_y[1] == 1.0);  // cheapest column under p
  }
}

TEST_CASE("zero distortion recovers the source entropy") {
  Distribution p({0.3, 0.7});
  auto pt = rate_at_delta(p, kHamming2, 0.0);
  CHECK(pt.rate == Approx(entropy(p)).margin(1e-7));
}

TEST_CASE("rate_at_delta rejects negative distortion") {
  CHECK_THROWS_AS(rate_at_delta(Distribution::uniform(2), kHamming2, -0.1), std::domain_error);
}

TEST_CASE("inner objective validates shapes and bounds the solver") {
  Distribution q({0.2, 0.5, 0.3});
  CHECK_THROWS_AS(inner_objective(q, Distribution::uniform(2), 1.0, kHamming2),
                  std::invalid_argument);

  DistortionSpec d({{0.0, 0.4, 1.0}, {0.9, 0.0, 0.3}, {0.5, 0.8, 0.0}});
  double nu = 1.7;
  auto sol = min_py_inner(q, nu, d);
  CHECK(sol.report.converged);
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v{u(rng), u(rng), u(rng)};
    double s = v[0] + v[1] + v[2];
    for (double& x : v) x /= s;
    CHECK(sol.value <= inner_objective(q, Distribution(v), nu, d) + 1e-9);
  }
  CHECK(sol.value == Approx(inner_objective(q, sol.p_y, nu, d)).margin(1e-9));
}

TEST_CASE("rd_curve is non-increasing in distortion") {
  Distribution p({0.5, 0.2, 0.3});
  DistortionSpec d({{0.0, 1.0, 0.6}, {1.0, 0.0, 0.4}, {0.7, 0.5, 0.0}});
  auto deltas = linspace(0.0, delta_max(p, d) * 1.05, 22);
  auto curve = rd_curve(p, d, deltas);
  REQUIRE(curve.points.size() == deltas.size());
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    CHECK(curve.points[i].y <= curve.points[i - 1].y + 1e-8);
  CHECK(curve.points.back().y == 0.0);
}

TEST_CASE("warm scratch does not change the answer") {
  Distribution p({0.3, 0.7});
  DistortionKernel kernel(kHamming2);
  RateScratch scratch;
  auto a1 = rate_at_delta(p, kernel, 0.10, {}, &scratch);
  auto a2 = rate_at_delta(p, kernel, 0.12, {}, &scratch);
  auto b2 = rate_at_delta(p, kernel, 0.12);
  CHECK(a1.rate == Approx(0.2857813286634453).margin(1e-7));
  CHECK(a2.rate == Approx(b2.rate).margin(1e-8));
}

TEST_CASE("tilted information averages back to the rate") {
  Distribution p({0.3, 0.7});
  auto info = d_tilted_information(p, kHamming2, 0.1);
  REQUIRE(info.per_letter.size() == 2);
  CHECK(info.expectation == Approx(info.point.rate).margin(1e-8));
  CHECK_THROWS_AS(d_tilted_information(p, kHamming2, 0.0), std::domain_error);
  CHECK_THROWS_AS(d_tilted_information(p, kHamming2, 0.3), std::domain_error);
}
