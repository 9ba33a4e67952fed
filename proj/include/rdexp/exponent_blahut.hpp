#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdexp/arimoto.hpp"
#include "rdexp/grids.hpp"
#include "rdexp/kernel.hpp"
#include "rdexp/optimize.hpp"
#include "rdexp/parallel.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/types.hpp"

namespace rdexp {

struct E0sParams {
  double rho = 0.0;
  double nu = 0.0;
};

// -log sum_x p(x) A(x)^{-rho} with A(x) = sum_y p_y(y) e^{-nu d(x,y)}.
inline double e0s(const E0sParams& par, const Distribution& p_y, const Distribution& p,
                  const DistortionSpec& d) {
  if (!(par.rho >= 0.0) || !(par.nu >= 0.0)) throw std::domain_error("e0s: rho, nu must be >= 0");
  if (d.rows() != p.size() || d.cols() != p_y.size()) throw std::invalid_argument("e0s: shape mismatch");
  DistortionKernel kernel(d);
  std::vector<double> la;
  kernel.log_row_mix(p_y.probs(), par.nu, la);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) best = std::max(best, std::log(p[x]) - par.rho * la[x]);
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) acc += std::exp(std::log(p[x]) - par.rho * la[x] - best);
  return -(best + std::log(acc));
}

struct FixedPoint {
  Distribution p_y;
  double value = 0.0;  // rho > 0: max_py e0s; rho == 0: sign-flipped inner minimum
  IterationReport report;
};

inline FixedPoint arimoto_fixed_point(const E0sParams& par, const Distribution& p,
                                      const DistortionKernel& kernel, const SolveOptions& opt = {}) {
  auto sol = arimoto_solve(kernel, p.probs(), par.rho, par.nu, opt);
  double value = par.rho == 0.0 ? -sol.value : sol.value;
  return {Distribution(std::move(sol.p_y)), value, sol.report};
}

inline FixedPoint arimoto_fixed_point(const E0sParams& par, const Distribution& p,
                                      const DistortionSpec& d, const SolveOptions& opt = {}) {
  return arimoto_fixed_point(par, p, DistortionKernel(d), opt);
}

struct NuScanOptions {
  SolveOptions solve;
  double nu_tol = 1e-5;
  int max_extensions = 3;  // regrow the nu range if the maximum sits at its edge
};

struct InnerResult {
  double value = 0.0;
  double nu_star = 0.0;
  std::size_t local_maxima = 0;  // strict interior maxima found on the grid
};

namespace detail {

// Scans f over the grid with a warm-started solver chain, appending extensions
// of the same spacing whenever the best point crawls to the right edge or the
// curve is still climbing there. The second trigger matters: with two humps, a
// dominant interior maximum can hide a taller one past the end of the grid.
template <typename Eval>
inline std::vector<double> scan_with_extension(Eval&& eval, std::vector<double>& grid,
                                               int max_extensions) {
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double nu : grid) vals.push_back(eval(nu));
  for (int ext = 0; ext < max_extensions; ++ext) {
    if (grid.size() < 2) break;
    std::size_t arg = 0;
    for (std::size_t j = 1; j < vals.size(); ++j)
      if (vals[j] > vals[arg]) arg = j;
    bool rising_edge = vals[vals.size() - 1] > vals[vals.size() - 2];
    if (arg + 2 < grid.size() && !rising_edge) break;
    double step = grid.back() - grid[grid.size() - 2];
    double hi = grid.back();
    std::size_t add = grid.size();
    for (std::size_t k = 1; k <= add; ++k) {
      grid.push_back(hi + step * static_cast<double>(k));
      vals.push_back(eval(grid.back()));
    }
  }
  return vals;
}

}  // namespace detail

// sup_nu [ -max_py e0s(rho, nu) - rho nu delta ], the conjugate of
// rho R(Delta|q) - D(q||p) over sources q. The bracketed function need not be
// concave in nu, so every strict interior local maximum on the grid is refined
// by golden section and the best value wins.
inline InnerResult blahut_inner(double rho, double delta, const Distribution& p,
                                const DistortionKernel& kernel, std::vector<double> nu_grid,
                                const NuScanOptions& opt = {}) {
  if (nu_grid.size() < 2) throw std::invalid_argument("blahut_inner: nu grid too small");
  if (rho == 0.0) return {};  // e0s vanishes identically at zero slope
  std::vector<double> warm;
  auto eval = [&](double nu) {
    SolveOptions so = opt.solve;
    if (!warm.empty()) so.initial_py = &warm;
    auto sol = arimoto_solve(kernel, p.probs(), rho, nu, so);
    warm = std::move(sol.p_y);
    return -sol.value - rho * nu * delta;
  };

  std::vector<double> vals = detail::scan_with_extension(eval, nu_grid, opt.max_extensions);

  InnerResult out;
  std::size_t arg = 0;
  for (std::size_t j = 1; j < vals.size(); ++j)
    if (vals[j] > vals[arg]) arg = j;
  out.value = vals[arg];
  out.nu_star = nu_grid[arg];

  for (std::size_t j = 1; j + 1 < vals.size(); ++j) {
    if (vals[j] > vals[j - 1] && vals[j] > vals[j + 1]) {
      ++out.local_maxima;
      auto [nu, v] = golden_max(eval, nu_grid[j - 1], nu_grid[j + 1], opt.nu_tol);
      if (v > out.value) {
        out.value = v;
        out.nu_star = nu;
      }
    }
  }
  if (arg == 0 && vals.size() > 1) {  // maximum pinned at the left edge
    auto [nu, v] = golden_max(eval, nu_grid[0], nu_grid[1], opt.nu_tol);
    if (v > out.value) {
      out.value = v;
      out.nu_star = nu;
    }
  }
  return out;
}

inline InnerResult blahut_inner(double rho, double delta, const Distribution& p,
                                const DistortionSpec& d, std::vector<double> nu_grid,
                                const NuScanOptions& opt = {}) {
  return blahut_inner(rho, delta, p, DistortionKernel(d), std::move(nu_grid), opt);
}

struct ExponentPoint {
  double rate = 0.0;
  double exponent = 0.0;
  double rho = 0.0;  // maximizing slope
  double nu = 0.0;   // inner maximizer at that slope
};

struct BlahutTable {
  std::vector<double> rhos;
  std::vector<double> inner_values;
  std::vector<double> nu_stars;
};

inline BlahutTable blahut_inner_table(double delta, const Distribution& p,
                                      const DistortionKernel& kernel,
                                      const std::vector<double>& rho_grid,
                                      const std::vector<double>& nu_grid,
                                      const NuScanOptions& opt = {}, unsigned threads = 0) {
  BlahutTable table;
  table.rhos = rho_grid;
  table.inner_values.assign(rho_grid.size(), 0.0);
  table.nu_stars.assign(rho_grid.size(), 0.0);
  parallel_blocks(rho_grid.size(), 4, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      auto inner = blahut_inner(rho_grid[r], delta, p, kernel, nu_grid, opt);
      table.inner_values[r] = inner.value;
      table.nu_stars[r] = inner.nu_star;
    }
  });
  return table;
}

inline ExponentPoint blahut_exponent_from_table(double rate, const BlahutTable& table) {
  ExponentPoint out;
  out.rate = rate;
  out.exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < table.rhos.size(); ++r) {
    double v = table.rhos[r] * rate - table.inner_values[r];
    if (v > out.exponent) {
      out.exponent = v;
      out.rho = table.rhos[r];
      out.nu = table.nu_stars[r];
    }
  }
  out.exponent = std::max(0.0, out.exponent);
  return out;
}

inline ExponentPoint blahut_exponent(double rate, double delta, const Distribution& p,
                                     const DistortionSpec& d, const std::vector<double>& rho_grid,
                                     const std::vector<double>& nu_grid,
                                     const NuScanOptions& opt = {}) {
  DistortionKernel kernel(d);
  auto table = blahut_inner_table(delta, p, kernel, rho_grid, nu_grid, opt, 1);
  return blahut_exponent_from_table(rate, table);
}

inline Curve blahut_curve(const std::vector<double>& rates, const BlahutTable& table) {
  Curve out;
  out.points.reserve(rates.size());
  for (double r : rates) out.points.push_back({r, blahut_exponent_from_table(r, table).exponent});
  return out;
}

// 201 log-spaced slopes plus the zero slope.
inline std::vector<double> default_rho_grid() {
  std::vector<double> rhos = logspace(1e-3, 10.0, 201);
  rhos.insert(rhos.begin(), 0.0);
  return rhos;
}

struct ScanResult {
  Curve curve;  // nu vs the inner objective -max_py e0s - rho nu delta, nats
  std::vector<std::size_t> local_max_indices;
  std::vector<CurvePoint> refined_maxima;
};

// Raw nu scan of the inner objective at fixed rho; used to exhibit the
// non-concavity (several interior maxima) on the two-block example.
inline ScanResult appendix_scan(double rho, const Distribution& p, const DistortionSpec& d,
                                double delta, const std::vector<double>& nu_grid,
                                const NuScanOptions& opt = {}) {
  if (nu_grid.size() < 3) throw std::invalid_argument("appendix_scan: nu grid too small");
  DistortionKernel kernel(d);
  std::vector<double> warm;
  auto eval = [&](double nu) {
    if (rho == 0.0) return 0.0;
    SolveOptions so = opt.solve;
    if (!warm.empty()) so.initial_py = &warm;
    auto sol = arimoto_solve(kernel, p.probs(), rho, nu, so);
    warm = std::move(sol.p_y);
    return -sol.value - rho * nu * delta;
  };
  ScanResult out;
  out.curve.points.reserve(nu_grid.size());
  for (double nu : nu_grid) out.curve.points.push_back({nu, eval(nu)});
  for (std::size_t j = 1; j + 1 < nu_grid.size(); ++j) {
    if (out.curve.points[j].y > out.curve.points[j - 1].y &&
        out.curve.points[j].y > out.curve.points[j + 1].y) {
      out.local_max_indices.push_back(j);
      auto [nu, v] = golden_max(eval, nu_grid[j - 1], nu_grid[j + 1], opt.nu_tol);
      out.refined_maxima.push_back({nu, v});
    }
  }
  return out;
}

}  // namespace rdexp
