#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/types.hpp"

using namespace rdexp;
using Catch::Approx;

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(Distribution(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(Distribution({0.5, -0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Distribution({0.5, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Distribution({0.5, 0.6}), std::invalid_argument);

  // in-tolerance drift gets renormalized to an exact simplex point
  Distribution p({0.5 + 2e-10, 0.5});
  CHECK(p[0] + p[1] == Approx(1.0).margin(1e-15));

  Distribution u = Distribution::uniform(4);
  CHECK(u.size() == 4);
  CHECK(u[3] == Approx(0.25));
  Distribution pm = Distribution::point_mass(3, 1);
  CHECK(pm[0] == 0.0);
  CHECK(pm[1] == 1.0);
}

TEST_CASE("conditional distribution validation") {
  CHECK_THROWS_AS(ConditionalDistribution({{0.5, 0.5}, {0.3}}), std::invalid_argument);
  CHECK_THROWS_AS(ConditionalDistribution({{0.5, 0.6}}), std::invalid_argument);
  ConditionalDistribution w({{0.5, 0.5}, {0.0, 1.0}});
  CHECK(w(1, 1) == 1.0);
}

TEST_CASE("distortion spec validation") {
  CHECK_THROWS_AS(DistortionSpec({{0.0, -1.0}}), std::invalid_argument);
  DistortionSpec d({{0.0, 1.0}, {2.5, 0.0}});
  CHECK(d.max_value() == 2.5);
  CHECK(d.min_positive_value() == 1.0);
  DistortionSpec zeros(2, 2, 0.0);
  CHECK(std::isinf(zeros.min_positive_value()));
}

TEST_CASE("entropy and divergence values") {
  CHECK(entropy(Distribution::uniform(2)) == Approx(std::numbers::ln2).epsilon(1e-14));
  CHECK(entropy(Distribution::point_mass(4, 2)) == 0.0);
  CHECK(binary_entropy(0.25) == Approx(0.5623351446188083).epsilon(1e-13));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);

  Distribution q({0.5, 0.5}), p({0.25, 0.75});
  CHECK(kl_divergence(q, p) == Approx(0.14384103622589042).epsilon(1e-13));
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(std::isinf(kl_divergence(Distribution({0.5, 0.5}), Distribution({1.0, 0.0}))));

  CHECK(binary_divergence(0.5, 0.25) == Approx(0.14384103622589042).epsilon(1e-13));
  CHECK(binary_divergence(0.0, 0.3) == Approx(std::log(1.0 / 0.7)).epsilon(1e-13));
  CHECK(std::isinf(binary_divergence(0.5, 0.0)));
  CHECK(binary_divergence(0.0, 0.0) == 0.0);
}

TEST_CASE("mutual information endpoints") {
  Distribution p({0.3, 0.7});
  ConditionalDistribution identity({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(mutual_information(p, identity) == Approx(entropy(p)).epsilon(1e-13));
  ConditionalDistribution constant({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(mutual_information(p, constant) == Approx(0.0).margin(1e-15));
}

TEST_CASE("distortion summaries") {
  Distribution p({0.3, 0.7});
  DistortionSpec ham({{0.0, 1.0}, {1.0, 0.0}});
  ConditionalDistribution w({{0.9, 0.1}, {0.2, 0.8}});
  CHECK(expected_distortion(p, w, ham) == Approx(0.3 * 0.1 + 0.7 * 0.2).epsilon(1e-14));
  CHECK(delta_max(p, ham) == Approx(0.3).epsilon(1e-14));
  CHECK(delta_max_column(p, ham) == 1);
}

TEST_CASE("grid builders") {
  auto lin = linspace(0.0, 1.0, 5);
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == 0.0);
  CHECK(lin.back() == 1.0);
  CHECK(lin[2] == Approx(0.5));
  auto lg = logspace(1e-3, 10.0, 9);
  REQUIRE(lg.size() == 9);
  CHECK(lg.front() == 1e-3);
  CHECK(lg.back() == 10.0);
  CHECK_THROWS_AS(logspace(0.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("unit conversion") {
  CHECK(in_unit(std::numbers::ln2, Unit::bits) == Approx(1.0).epsilon(1e-14));
  CHECK(in_unit(1.0, Unit::nats) == 1.0);
  Curve c;
  c.points = {{0.5, std::numbers::ln2}};
  Curve b = curve_in_unit(c, Unit::bits, false, true);
  CHECK(b.points[0].x == 0.5);
  CHECK(b.points[0].y == Approx(1.0).epsilon(1e-14));
}
