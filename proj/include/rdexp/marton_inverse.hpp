#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdexp/arimoto.hpp"
#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/kernel.hpp"
#include "rdexp/parallel.hpp"
#include "rdexp/simplex_grid.hpp"
#include "rdexp/simplex_lp.hpp"
#include "rdexp/types.hpp"

namespace rdexp {

// Below this the 1/mu exponent is numerically pointless and the exact mu = 0
// limit (a small linear program) is used instead.
inline constexpr double mu_lp_threshold = 1e-3;

// Inner value for a fixed reproduction law, log_a(x) = log sum_y p(y) e^{-nu d}:
//   mu > 0:   mu log sum_{x in supp p} p(x) A(x)^{-1/mu}
//   mu == 0:  max_{x in supp p} -log A(x)
inline double g_closed_form(double mu, const std::vector<double>& log_a, const Distribution& p) {
  if (!(mu >= 0.0)) throw std::domain_error("g_closed_form: mu must be >= 0");
  if (log_a.size() != p.size()) throw std::invalid_argument("g_closed_form: shape mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  if (mu == 0.0) {
    double best = -inf;
    for (std::size_t x = 0; x < p.size(); ++x)
      if (p[x] > 0.0) best = std::max(best, -log_a[x]);
    return best;
  }
  double best = -inf;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    if (!std::isfinite(log_a[x])) return inf;
    best = std::max(best, std::log(p[x]) - log_a[x] / mu);
  }
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) acc += std::exp(std::log(p[x]) - log_a[x] / mu - best);
  return mu * (best + std::log(acc));
}

inline double g_closed_form(double mu, double nu, const Distribution& p_y, const Distribution& p,
                            const DistortionSpec& d) {
  DistortionKernel kernel(d);
  std::vector<double> la;
  kernel.log_row_mix(p_y.probs(), nu, la);
  return g_closed_form(mu, la, p);
}

struct LpGame {
  double c_star = 0.0;  // game value; the mu = 0 inner minimum is -log c_star
  std::vector<double> p_y;
  bool ok = false;
};

// mu = 0 inner minimum over reproductions: the game
//   max_{p_y} min_{x in supp p} sum_y p(y) e^{-nu d(x,y)}
// as a linear program in (p_y, c).
inline LpGame lp_game_value(double nu, const Distribution& p, const DistortionSpec& d) {
  if (!(nu >= 0.0)) throw std::domain_error("lp_game_value: nu must be >= 0");
  if (d.rows() != p.size()) throw std::invalid_argument("lp_game_value: shape mismatch");
  const std::size_t ny = d.cols();
  std::vector<std::vector<double>> a_ub;
  for (std::size_t x = 0; x < d.rows(); ++x) {
    if (p[x] <= 0.0) continue;
    std::vector<double> row(ny + 1, 0.0);
    for (std::size_t y = 0; y < ny; ++y) row[y] = -std::exp(-nu * d(x, y));
    row[ny] = 1.0;  // c <= sum_y p(y) e^{-nu d(x,y)}
    a_ub.push_back(std::move(row));
  }
  std::vector<double> b_ub(a_ub.size(), 0.0);
  std::vector<double> eq(ny + 1, 1.0);
  eq[ny] = 0.0;
  std::vector<double> c(ny + 1, 0.0);
  c[ny] = 1.0;
  DenseSimplex lp(std::move(a_ub), std::move(b_ub), {eq}, {1.0}, std::move(c));
  LpResult res = lp.solve();
  LpGame out;
  if (res.status != LpResult::Status::optimal || !(res.objective > 0.0)) return out;
  out.c_star = res.objective;
  out.p_y.assign(res.x.begin(), res.x.begin() + static_cast<long>(ny));
  out.ok = true;
  return out;
}

struct GCell {
  double value = 0.0;
  std::vector<double> p_y;
  bool converged = true;
  double last_change = 0.0;
};

// Minimum over reproduction laws of the closed-form inner value. Positive mu
// rides the alternating solver at slope 1/mu; mu at or below the threshold is
// handed to the exact linear program.
inline GCell g_of_p(double mu, double nu, const Distribution& p, const DistortionKernel& kernel,
                    const DistortionSpec& d, const SolveOptions& opt = {}) {
  GCell out;
  if (mu <= mu_lp_threshold) {
    LpGame game = lp_game_value(nu, p, d);
    out.value = game.ok ? -std::log(game.c_star) : std::numeric_limits<double>::infinity();
    out.p_y = std::move(game.p_y);
    out.converged = game.ok;
    return out;
  }
  auto sol = arimoto_solve(kernel, p.probs(), 1.0 / mu, nu, opt);
  out.value = -mu * sol.value;
  out.p_y = std::move(sol.p_y);
  out.converged = sol.report.converged;
  out.last_change = sol.report.last_change;
  return out;
}

inline GCell g_of_p(double mu, double nu, const Distribution& p, const DistortionSpec& d,
                    const SolveOptions& opt = {}) {
  return g_of_p(mu, nu, p, DistortionKernel(d), d, opt);
}

struct GridSpec {
  std::vector<double> mu_values;  // must begin with the exact 0 row
  std::vector<double> nu_values;
  std::vector<double> e_values;
};

// The mu grid stops at 3e-2: the fixed-point solver takes O(1/mu) iterations
// per cell, and slopes below that are covered by the exact mu = 0 column. The
// nu range must clear the largest binding slope of any source the envelope
// touches; sources leaning on a fine-grained block sit near nu = 15 in the
// worked two-block examples, hence the wide default.
inline GridSpec default_grid_spec(double e_max, std::size_t n_e = 100, double mu_max = 20.0,
                                  std::size_t n_mu = 80, double nu_max = 18.0,
                                  std::size_t n_nu = 181) {
  GridSpec g;
  g.mu_values = logspace(3e-2, mu_max, n_mu);
  g.mu_values.insert(g.mu_values.begin(), 0.0);
  g.nu_values = linspace(0.0, nu_max, n_nu);
  g.e_values = linspace(0.0, e_max, n_e);
  return g;
}

namespace detail {

inline void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  if (!(v.front() >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative start");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw std::invalid_argument(std::string(what) + ": not increasing");
}

inline void validate_grid(const GridSpec& g) {
  require_increasing(g.mu_values, "mu grid");
  require_increasing(g.nu_values, "nu grid");
  require_increasing(g.e_values, "e grid");
  if (g.mu_values.front() != 0.0)
    throw std::invalid_argument("mu grid: must start at exactly 0");
}

inline std::string cell_warning(const char* kind, double mu, double nu, double change) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s at mu=%.6g nu=%.6g (last change %.3g)", kind, mu, nu, change);
  return buf;
}

}  // namespace detail

struct GTable {
  GridSpec grid;
  Distribution source;
  std::vector<double> values;  // mu-major: values[i * nu_count + j]
  std::vector<std::string> warnings;

  double at(std::size_t i, std::size_t j) const { return values[i * grid.nu_values.size() + j]; }
};

// Tabulates the inner minimum over every (mu, nu) grid cell. Columns (fixed
// nu) are independent, so they parallelize; inside a column the solver is
// warm-started down the mu axis. A cell that fails to converge keeps its last
// value and leaves a warning rather than aborting the table.
inline GTable compute_g_table(const Distribution& p, const DistortionSpec& d, GridSpec grid,
                              const SolveOptions& opt = {}, unsigned threads = 0) {
  detail::validate_grid(grid);
  DistortionKernel kernel(d);
  const std::size_t n_mu = grid.mu_values.size(), n_nu = grid.nu_values.size();
  GTable out;
  out.grid = std::move(grid);
  out.source = p;
  out.values.assign(n_mu * n_nu, 0.0);
  std::vector<std::vector<std::string>> column_warnings(n_nu);

  parallel_blocks(n_nu, 1, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      double nu = out.grid.nu_values[j];
      std::vector<double> warm;
      for (std::size_t i = n_mu; i-- > 0;) {
        double mu = out.grid.mu_values[i];
        SolveOptions so = opt;
        if (!warm.empty()) so.initial_py = &warm;
        GCell cell = g_of_p(mu, nu, p, kernel, d, so);
        out.values[i * n_nu + j] = cell.value;
        if (!cell.converged)
          column_warnings[j].push_back(detail::cell_warning(
              mu <= mu_lp_threshold ? "lp failed" : "no convergence", mu, nu, cell.last_change));
        if (mu > mu_lp_threshold) warm = std::move(cell.p_y);
      }
    }
  });
  for (auto& w : column_warnings)
    out.warnings.insert(out.warnings.end(), w.begin(), w.end());
  return out;
}

struct InverseCurve {
  double delta = 0.0;
  Distribution source;
  Curve curve;  // exponent (nats) -> rate (nats)
  std::vector<std::string> warnings;
};

// Exact inverse on the grid:
//   R(E_k) = max_j [ min_i ( G(mu_i, nu_j) + mu_i E_k ) - nu_j delta ]
// clamped at zero; ties resolve to the smaller grid index.
inline InverseCurve rm_grid(const GTable& table, double delta) {
  if (!(delta >= 0.0)) throw std::domain_error("rm_grid: delta must be >= 0");
  const auto& mu = table.grid.mu_values;
  const auto& nu = table.grid.nu_values;
  const auto& es = table.grid.e_values;
  const std::size_t n_mu = mu.size(), n_nu = nu.size();
  InverseCurve out;
  out.delta = delta;
  out.source = table.source;
  out.warnings = table.warnings;
  out.curve.points.reserve(es.size());
  for (double e : es) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_nu; ++j) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_mu; ++i)
        inner = std::min(inner, table.values[i * n_nu + j] + mu[i] * e);
      best = std::max(best, inner - nu[j] * delta);
    }
    out.curve.points.push_back({e, std::max(0.0, best)});
  }
  return out;
}

inline InverseCurve rm_grid(const Distribution& p, const DistortionSpec& d, double delta,
                            GridSpec grid, const SolveOptions& opt = {}, unsigned threads = 0) {
  return rm_grid(compute_g_table(p, d, std::move(grid), opt, threads), delta);
}

// Concave majorant from the same table, min_i over lines of slope mu_i:
//   Rbar(E_k) = min_i [ max_j ( G(mu_i, nu_j) - nu_j delta ) + mu_i E_k ].
// Always at or above the exact grid inverse; the gap measures grid slack.
inline Curve rm_upper_bound(const GTable& table, double delta) {
  if (!(delta >= 0.0)) throw std::domain_error("rm_upper_bound: delta must be >= 0");
  const auto& mu = table.grid.mu_values;
  const auto& nu = table.grid.nu_values;
  const std::size_t n_mu = mu.size(), n_nu = nu.size();
  std::vector<double> b(n_mu, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n_mu; ++i)
    for (std::size_t j = 0; j < n_nu; ++j)
      b[i] = std::max(b[i], table.values[i * n_nu + j] - nu[j] * delta);
  Curve out;
  out.points.reserve(table.grid.e_values.size());
  for (double e : table.grid.e_values) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_mu; ++i) best = std::min(best, b[i] + mu[i] * e);
    out.points.push_back({e, std::max(0.0, best)});
  }
  return out;
}

// Reads the direct exponent back off the inverse curve: the smallest
// tabulated E whose rate reaches the target. Zero-rate targets sit below the
// curve start; targets above its reach are a caller error.
inline double marton_from_inverse(double rate, const InverseCurve& inv) {
  if (inv.curve.points.empty()) throw std::invalid_argument("marton_from_inverse: empty curve");
  if (rate <= inv.curve.points.front().y) return 0.0;
  for (const auto& pt : inv.curve.points)
    if (pt.y >= rate) return pt.x;
  throw std::out_of_range("marton_from_inverse: rate above the tabulated range");
}

struct LegendrePair {
  double lhs = 0.0;  // brute-force constrained maximum
  double rhs = 0.0;  // Legendre minimum over the mu grid
};

// Duality spot check at fixed (nu, p_y): the divergence-ball maximum
//   max { sum_x q(x)(-log A(x)) : D(q || p) <= e }
// against min_mu [ mu e + g_closed_form(mu) ]. The right side can exceed the
// left only by grid slack.
inline LegendrePair g_legendre_check(double e, double nu, const Distribution& p_y,
                                     const Distribution& p, const DistortionSpec& d,
                                     const std::vector<double>& mu_grid, double q_step) {
  if (!(e >= 0.0)) throw std::domain_error("g_legendre_check: e must be >= 0");
  DistortionKernel kernel(d);
  std::vector<double> la;
  kernel.log_row_mix(p_y.probs(), nu, la);

  LegendrePair out;
  out.lhs = -std::numeric_limits<double>::infinity();
  SimplexGrid grid(p.size(), q_step);
  grid.for_each([&](const std::vector<double>& qv) {
    Distribution q(qv);
    if (kl_divergence(q, p) > e) return;
    double v = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x)
      if (q[x] > 0.0) v -= q[x] * la[x];
    out.lhs = std::max(out.lhs, v);
  });

  out.rhs = std::numeric_limits<double>::infinity();
  for (double mu : mu_grid) out.rhs = std::min(out.rhs, mu * e + g_closed_form(mu, la, p));
  return out;
}

}  // namespace rdexp
