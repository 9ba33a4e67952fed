#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdexp/info.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/simplex_grid.hpp"
#include "rdexp/types.hpp"

// Slow, independent reference implementations used only by tests. Everything
// here enumerates simplex grids directly so the fast solvers can be checked
// against code that shares none of their machinery.

namespace rdexp {

// min I(q; W) over channels W with expected distortion <= delta + slack,
// enumerating every row of W on a simplex grid. Exponential in the alphabet
// product, hence the hard size guard.
inline double brute_rd(const Distribution& q, const DistortionSpec& d, double delta,
                       double step, double slack = 1e-9) {
  std::size_t nx = d.rows(), ny = d.cols();
  if (nx * ny > 6) throw std::invalid_argument("brute_rd: alphabet product must be <= 6");
  SimplexGrid grid(ny, step);
  std::vector<std::vector<double>> rows;
  grid.for_each([&](const std::vector<double>& p) { rows.push_back(p); });

  // Cheapest possible contribution of the rows not yet chosen, for pruning.
  std::vector<double> tail_min(nx + 1, 0.0);
  for (std::size_t x = nx; x-- > 0;) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y) m = std::min(m, d(x, y));
    tail_min[x] = tail_min[x + 1] + q[x] * m;
  }

  std::vector<std::size_t> choice(nx, 0);
  double best = std::numeric_limits<double>::infinity();

  auto leaf = [&]() {
    std::vector<std::vector<double>> w(nx);
    for (std::size_t x = 0; x < nx; ++x) w[x] = rows[choice[x]];
    ConditionalDistribution channel(std::move(w));
    best = std::min(best, mutual_information(q, channel));
  };

  auto rec = [&](auto&& self, std::size_t x, double partial) -> void {
    if (partial + tail_min[x] > delta + slack) return;
    if (x == nx) {
      leaf();
      return;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      choice[x] = r;
      double add = 0.0;
      for (std::size_t y = 0; y < ny; ++y) add += q[x] * rows[r][y] * d(x, y);
      self(self, x + 1, partial + add);
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

// max over grid distributions q of
//   -mu D(q || p) - sum_x q(x) log A(x),  A(x) = sum_y p_y(y) e^{-nu d(x,y)},
// the raw definition whose supremum the mu > 0 closed form resolves.
inline double brute_g(double mu, double nu, const Distribution& p_y, const Distribution& p,
                      const DistortionSpec& d, double q_step) {
  if (!(mu >= 0.0) || !(nu >= 0.0)) throw std::domain_error("brute_g: mu, nu must be >= 0");
  std::size_t nx = d.rows(), ny = d.cols();
  if (nx != p.size() || ny != p_y.size()) throw std::invalid_argument("brute_g: shape mismatch");
  std::vector<double> log_a(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    double a = 0.0;
    for (std::size_t y = 0; y < ny; ++y) a += p_y[y] * std::exp(-nu * d(x, y));
    log_a[x] = std::log(a);
  }
  SimplexGrid grid(p.size(), q_step);
  double best = -std::numeric_limits<double>::infinity();
  grid.for_each([&](const std::vector<double>& qv) {
    Distribution q(qv);
    double div = kl_divergence(q, p);
    if (!std::isfinite(div)) return;
    double v = -mu * div;
    for (std::size_t x = 0; x < nx; ++x)
      if (q[x] > 0.0) v -= q[x] * log_a[x];
    best = std::max(best, v);
  });
  return best;
}

// max R(delta | q) over grid distributions q with D(q || p) <= e.
inline double brute_rm(double e, double delta, const Distribution& p, const DistortionSpec& d,
                       double q_step, const RateOptions& rate_opt = {}) {
  SimplexGrid grid(p.size(), q_step);
  double best = 0.0;
  grid.for_each([&](const std::vector<double>& qv) {
    Distribution q(qv);
    if (kl_divergence(q, p) > e) return;
    best = std::max(best, rate_at_delta(q, d, delta, rate_opt).rate);
  });
  return best;
}

// min D(q || p) over grid distributions q with R(delta | q) >= rate.
// +inf when no grid point clears the rate.
inline double brute_marton(double rate, double delta, const Distribution& p,
                           const DistortionSpec& d, double q_step,
                           const RateOptions& rate_opt = {}) {
  SimplexGrid grid(p.size(), q_step);
  double best = std::numeric_limits<double>::infinity();
  grid.for_each([&](const std::vector<double>& qv) {
    Distribution q(qv);
    double div = kl_divergence(q, p);
    if (div >= best) return;  // cannot improve, skip the rate solve
    if (rate_at_delta(q, d, delta, rate_opt).rate >= rate) best = div;
  });
  return best;
}

}  // namespace rdexp
