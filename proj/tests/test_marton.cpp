#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rdexp/exponent_blahut.hpp"
#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/marton_inverse.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/types.hpp"

using namespace rdexp;
using Catch::Approx;

namespace {

const DistortionSpec kHamming2({{0.0, 1.0}, {1.0, 0.0}});
const DistortionSpec kD3({{0.0, 1.0, 0.4}, {1.0, 0.0, 0.7}, {0.3, 0.6, 0.0}});
const Distribution kP3({0.5, 0.3, 0.2});
const Distribution kPy3({0.2, 0.5, 0.3});

Distribution random_distribution(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = u(rng));
  for (double& x : v) x /= s;
  return Distribution(v);
}

}  // namespace

TEST_CASE("closed-form inner value basics") {
  CHECK_THROWS_AS(g_closed_form(-0.1, {0.0, 0.0}, Distribution::uniform(2)), std::domain_error);
  CHECK_THROWS_AS(g_closed_form(1.0, {0.0}, Distribution::uniform(2)), std::invalid_argument);

  // nu = 0 makes every A(x) = 1, so the value vanishes for every mu
  for (double mu : {0.0, 0.5, 3.0, 20.0})
    CHECK(g_closed_form(mu, 0.0, kPy3, kP3, kD3) == Approx(0.0).margin(1e-12));

  // mu = 0 with a point-mass reproduction reads off the worst letter
  double nu = 1.3;
  auto pm = Distribution::point_mass(3, 1);
  double expect = 0.0;
  for (std::size_t x = 0; x < 3; ++x) expect = std::max(expect, nu * kD3(x, 1));
  CHECK(g_closed_form(0.0, nu, pm, kP3, kD3) == Approx(expect).margin(1e-12));

  // non-increasing in mu
  double prev = g_closed_form(0.0, nu, kPy3, kP3, kD3);
  for (double mu : {0.01, 0.1, 0.5, 2.0, 10.0, 50.0}) {
    double v = g_closed_form(mu, nu, kPy3, kP3, kD3);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }

  CHECK(g_closed_form(0.5, 1.0, Distribution::uniform(2), Distribution({0.4, 0.6}), kHamming2) ==
        Approx(0.3798854930417225).epsilon(1e-12));
}

TEST_CASE("closed form matches the slope identity") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t nx = 2 + trial % 3, ny = 2 + (trial / 2) % 3;
    std::uniform_real_distribution<double> ud(0.0, 2.0);
    std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
    for (auto& r : rows)
      for (double& v : r) v = ud(rng);
    DistortionSpec d(rows);
    Distribution p = random_distribution(rng, nx);
    Distribution py = random_distribution(rng, ny);
    double mu = std::uniform_real_distribution<double>(0.05, 10.0)(rng);
    double nu = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    double g = g_closed_form(mu, nu, py, p, d);
    double via_e0s = -mu * e0s({1.0 / mu, nu}, py, p, d);
    CHECK(g == Approx(via_e0s).margin(1e-10));
  }
}

TEST_CASE("game value linear program") {
  CHECK_THROWS_AS(lp_game_value(-1.0, kP3, kD3), std::domain_error);

  auto at_zero = lp_game_value(0.0, kP3, kD3);
  REQUIRE(at_zero.ok);
  CHECK(at_zero.c_star == Approx(1.0).margin(1e-9));

  auto sym = lp_game_value(1.0, Distribution::uniform(2), kHamming2);
  REQUIRE(sym.ok);
  CHECK(sym.c_star == Approx(0.6839397205857212).epsilon(1e-10));
  CHECK(-std::log(sym.c_star) == Approx(0.3798854930417225).epsilon(1e-10));
  CHECK(sym.p_y[0] == Approx(0.5).margin(1e-8));

  DistortionSpec narrow(std::vector<std::vector<double>>{{0.3}, {1.2}});
  auto one = lp_game_value(2.0, Distribution({0.4, 0.6}), narrow);
  REQUIRE(one.ok);
  CHECK(one.c_star == Approx(std::exp(-2.0 * 1.2)).margin(1e-10));

  // letters outside the support do not constrain the game
  auto free_row = lp_game_value(1.0, Distribution({0.0, 1.0}), kHamming2);
  REQUIRE(free_row.ok);
  CHECK(free_row.c_star == Approx(1.0).margin(1e-9));
}

TEST_CASE("inner minimum over reproductions") {
  // symmetric instance: minimizer is uniform, and the mu = 0 program agrees
  Distribution pu = Distribution::uniform(2);
  auto cell = g_of_p(0.5, 1.0, pu, kHamming2);
  CHECK(cell.converged);
  CHECK(cell.value == Approx(0.3798854930417225).margin(1e-9));
  auto lp_cell = g_of_p(0.0, 1.0, pu, kHamming2);
  CHECK(lp_cell.value == Approx(0.3798854930417225).margin(1e-9));

  // solver value bounds the closed form at arbitrary reproductions
  auto c3 = g_of_p(0.8, 1.5, kP3, kD3);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Distribution py = random_distribution(rng, 3);
    CHECK(c3.value <= g_closed_form(0.8, 1.5, py, kP3, kD3) + 1e-9);
  }

  // continuity across the LP threshold
  for (const auto* inst : {&kHamming2, &kD3}) {
    const Distribution& p = inst == &kHamming2 ? pu : kP3;
    double above = g_of_p(2e-3, 1.0, p, *inst).value;
    double at_zero = g_of_p(0.0, 1.0, p, *inst).value;
    CHECK(std::abs(above - at_zero) <= 5e-3);
  }
}

TEST_CASE("grid validation") {
  GridSpec bad;
  bad.mu_values = {0.5, 1.0};
  bad.nu_values = {0.0, 1.0};
  bad.e_values = {0.0, 0.1};
  CHECK_THROWS_AS(compute_g_table(kP3, kD3, bad), std::invalid_argument);
  bad.mu_values = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(compute_g_table(kP3, kD3, bad), std::invalid_argument);
  bad.mu_values = {};
  CHECK_THROWS_AS(compute_g_table(kP3, kD3, bad), std::invalid_argument);

  auto spec = default_grid_spec(0.5);
  CHECK(spec.mu_values.front() == 0.0);
  CHECK(spec.mu_values[1] == Approx(3e-2));
  CHECK(spec.mu_values.size() == 81);
  CHECK(spec.nu_values.front() == 0.0);
  CHECK(spec.nu_values.back() == Approx(18.0));
  CHECK(spec.e_values.back() == Approx(0.5));
}

TEST_CASE("g-table layout and determinism") {
  GridSpec grid;
  grid.mu_values = {0.0, 0.5, 2.0};
  grid.nu_values = {0.0, 0.7, 1.9};
  grid.e_values = {0.0, 0.05, 0.1};
  auto t1 = compute_g_table(kP3, kD3, grid, {}, 1);
  auto t4 = compute_g_table(kP3, kD3, grid, {}, 4);
  REQUIRE(t1.values.size() == 9);
  CHECK(t1.warnings.empty());
  for (std::size_t k = 0; k < t1.values.size(); ++k) CHECK(t1.values[k] == t4.values[k]);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double direct = g_of_p(grid.mu_values[i], grid.nu_values[j], kP3, kD3).value;
      CHECK(t1.at(i, j) == Approx(direct).margin(1e-8));
    }

  // starving the solver surfaces warnings instead of aborting
  SolveOptions starve;
  starve.max_iterations = 2;
  auto starved = compute_g_table(kP3, kD3, grid, starve, 1);
  CHECK(!starved.warnings.empty());
  for (double v : starved.values) CHECK(std::isfinite(v));
}

TEST_CASE("grid inverse against the rate-distortion endpoint") {
  Distribution p({0.25, 0.75});
  double delta = 0.1;
  GridSpec grid;
  grid.mu_values = logspace(1e-3, 2e4, 140);
  grid.mu_values.insert(grid.mu_values.begin(), 0.0);
  grid.nu_values = linspace(0.0, 12.0, 481);
  grid.e_values = linspace(0.0, 0.2, 81);
  auto table = compute_g_table(p, kHamming2, grid, {}, 0);
  auto inv = rm_grid(table, delta);
  REQUIRE(inv.curve.points.size() == 81);

  double r_delta = rate_at_delta(p, kHamming2, delta).rate;
  CHECK(inv.curve.points.front().y == Approx(r_delta).margin(1e-4));

  for (std::size_t k = 1; k < inv.curve.points.size(); ++k)
    CHECK(inv.curve.points[k].y >= inv.curve.points[k - 1].y - 1e-12);
  for (const auto& pt : inv.curve.points) CHECK(pt.y >= 0.0);

  auto upper = rm_upper_bound(table, delta);
  REQUIRE(upper.points.size() == inv.curve.points.size());
  for (std::size_t k = 0; k < upper.points.size(); ++k) {
    CHECK(upper.points[k].y >= inv.curve.points[k].y - 1e-12);
    CHECK(upper.points[k].y <= inv.curve.points[k].y + 5e-3);
  }
  for (std::size_t k = 1; k + 1 < upper.points.size(); ++k) {
    double chord = 0.5 * (upper.points[k - 1].y + upper.points[k + 1].y);
    CHECK(upper.points[k].y >= chord - 1e-9);
  }

  // reading the direct exponent back off the inverse
  CHECK(marton_from_inverse(0.0, inv) == 0.0);
  CHECK(marton_from_inverse(r_delta - 1e-6, inv) == 0.0);
  double target = 0.5 * (inv.curve.points.front().y + inv.curve.points.back().y);
  double e_read = marton_from_inverse(target, inv);
  bool found = false;
  for (const auto& pt : inv.curve.points) {
    if (pt.y >= target) {
      CHECK(e_read == pt.x);
      found = true;
      break;
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(marton_from_inverse(inv.curve.points.back().y + 0.1, inv), std::out_of_range);
  CHECK_THROWS_AS(rm_grid(table, -0.5), std::domain_error);
}

TEST_CASE("legendre duality spot checks") {
  // symmetric binary instance collapses both sides to the same constant
  Distribution pu = Distribution::uniform(2);
  auto flat = g_legendre_check(0.0, 1.0, pu, pu, kHamming2, linspace(0.0, 50.0, 501), 0.01);
  CHECK(flat.lhs == Approx(flat.rhs).margin(1e-9));
  CHECK(flat.lhs == Approx(0.3798854930417225).margin(1e-9));

  auto zero_nu = g_legendre_check(0.1, 0.0, kPy3, kP3, kD3, linspace(0.0, 50.0, 501), 0.02);
  CHECK(zero_nu.lhs == Approx(0.0).margin(1e-12));
  CHECK(zero_nu.rhs == Approx(0.0).margin(1e-12));

  auto mid = g_legendre_check(0.05, 1.2, kPy3, kP3, kD3, linspace(0.0, 50.0, 5001), 0.01);
  CHECK(mid.rhs >= mid.lhs - 1e-12);
  CHECK(std::abs(mid.rhs - mid.lhs) <= 2e-3);
  CHECK_THROWS_AS(g_legendre_check(-0.1, 1.0, kPy3, kP3, kD3, {0.0, 1.0}, 0.1), std::domain_error);
}
