#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/marton_inverse.hpp"
#include "rdexp/oracle.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/simplex_grid.hpp"
#include "rdexp/types.hpp"

using namespace rdexp;
using Catch::Approx;

namespace {
const DistortionSpec kHamming2({{0.0, 1.0}, {1.0, 0.0}});
}

TEST_CASE("simplex grid enumeration") {
  CHECK_THROWS_AS(SimplexGrid(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SimplexGrid(2, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(SimplexGrid(2, -0.5), std::invalid_argument);

  SimplexGrid grid(3, 0.25);
  CHECK(grid.levels() == 4);
  CHECK(grid.count() == 15);  // C(6, 2)
  std::size_t seen = 0;
  grid.for_each([&](const std::vector<double>& p) {
    ++seen;
    REQUIRE(p.size() == 3);
    double s = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      CHECK(std::abs(v * 4.0 - std::round(v * 4.0)) < 1e-12);
      s += v;
    }
    CHECK(s == Approx(1.0).margin(1e-12));
  });
  CHECK(seen == grid.count());
  CHECK(SimplexGrid(2, 0.01).count() == 101);
}

TEST_CASE("brute-force rate-distortion reference") {
  CHECK_THROWS_AS(brute_rd(Distribution::uniform(3),
                           DistortionSpec({{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}),
                           0.1, 0.5),
                  std::invalid_argument);

  // uniform binary source against the closed form
  double closed = std::log(2.0) - binary_entropy(0.254);
  double brute = brute_rd(Distribution::uniform(2), kHamming2, 0.254, 0.01);
  CHECK(brute >= closed - 1e-9);
  CHECK(brute - closed <= 5e-3);

  // skewed source against the solver
  Distribution p({0.3, 0.7});
  double fast = rate_at_delta(p, kHamming2, 0.1).rate;
  double b2 = brute_rd(p, kHamming2, 0.1, 0.01);
  CHECK(b2 >= fast - 1e-6);
  CHECK(b2 - fast <= 5e-3);

  CHECK(brute_rd(p, kHamming2, 0.35, 0.01) == Approx(0.0).margin(1e-12));
}

TEST_CASE("brute-force inner value reference") {
  CHECK_THROWS_AS(brute_g(-1.0, 0.0, Distribution::uniform(2), Distribution::uniform(2), kHamming2,
                          0.1),
                  std::domain_error);

  Distribution p({0.4, 0.6});
  Distribution py({0.3, 0.7});
  CHECK(brute_g(0.7, 0.0, py, Distribution({0.5, 0.5}), kHamming2, 0.1) ==
        Approx(0.0).margin(1e-12));

  // mu = 0 sweeps the simplex corners
  DistortionKernel kernel(kHamming2);
  std::vector<double> la;
  kernel.log_row_mix(py.probs(), 1.3, la);
  CHECK(brute_g(0.0, 1.3, py, p, kHamming2, 0.1) ==
        Approx(g_closed_form(0.0, la, p)).margin(1e-12));

  // binary: fine grid against the closed form
  double closed = g_closed_form(0.5, 1.0, py, p, kHamming2);
  double brute = brute_g(0.5, 1.0, py, p, kHamming2, 0.002);
  CHECK(closed >= brute - 1e-12);
  CHECK(closed - brute <= 2e-4);

  // ternary instance
  Distribution p3({0.5, 0.3, 0.2});
  Distribution py3({0.2, 0.5, 0.3});
  DistortionSpec d3({{0.0, 1.0, 0.4}, {1.0, 0.0, 0.7}, {0.3, 0.6, 0.0}});
  double closed3 = g_closed_form(0.8, 1.5, py3, p3, d3);
  double brute3 = brute_g(0.8, 1.5, py3, p3, d3, 0.02);
  CHECK(closed3 >= brute3 - 1e-12);
  CHECK(closed3 - brute3 <= 1e-3);
}

TEST_CASE("brute-force constrained rate reference") {
  Distribution p({0.25, 0.75});
  double delta = 0.1;
  CHECK(brute_rm(0.0, delta, p, kHamming2, 0.01) ==
        Approx(rate_at_delta(p, kHamming2, delta).rate).margin(1e-9));
  CHECK(brute_rm(10.0, delta, p, kHamming2, 0.01) ==
        Approx(std::log(2.0) - binary_entropy(delta)).margin(1e-9));

  // grid-method inverse at an engineered divergence level
  Distribution qstar({0.35, 0.65});
  double e_star = kl_divergence(qstar, p);
  GridSpec grid;
  grid.mu_values = logspace(1e-3, 2e3, 81);
  grid.mu_values.insert(grid.mu_values.begin(), 0.0);
  grid.nu_values = linspace(0.0, 12.0, 121);
  grid.e_values = {0.0, e_star};
  auto inv = rm_grid(p, kHamming2, delta, grid);
  double fast = inv.curve.points[1].y;
  double brute = brute_rm(e_star, delta, p, kHamming2, 0.01);
  CHECK(std::abs(fast - brute) <= 2e-3);
}

TEST_CASE("brute-force direct exponent reference") {
  Distribution p({0.25, 0.75});
  double delta = 0.1;
  CHECK(brute_marton(0.0, delta, p, kHamming2, 0.05) == 0.0);
  CHECK(std::isinf(brute_marton(std::log(2.0) + 0.5, delta, p, kHamming2, 0.05)));

  Distribution qstar({0.35, 0.65});
  double rate_star = rate_at_delta(qstar, kHamming2, delta).rate;
  double brute = brute_marton(rate_star, delta, p, kHamming2, 0.01);
  CHECK(brute <= kl_divergence(qstar, p) + 1e-12);

  GridSpec grid;
  grid.mu_values = logspace(1e-3, 2e3, 81);
  grid.mu_values.insert(grid.mu_values.begin(), 0.0);
  grid.nu_values = linspace(0.0, 12.0, 121);
  grid.e_values = linspace(0.0, 0.1, 401);
  auto inv = rm_grid(p, kHamming2, delta, grid);
  double fast = marton_from_inverse(rate_star, inv);
  CHECK(std::abs(fast - brute) <= 2e-3);
}
