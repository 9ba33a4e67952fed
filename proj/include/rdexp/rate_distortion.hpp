#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdexp/arimoto.hpp"
#include "rdexp/info.hpp"
#include "rdexp/kernel.hpp"
#include "rdexp/optimize.hpp"
#include "rdexp/types.hpp"

namespace rdexp {

struct RdPoint {
  double delta = 0.0;
  double rate = 0.0;  // nats
  double nu = 0.0;    // maximizing distortion multiplier
  Distribution p_y;
};

struct InnerSolution {
  Distribution p_y;
  double value = 0.0;
  IterationReport report;
};

// -sum_x q(x) log sum_y p(y) e^{-nu d(x,y)}, the inner objective of the
// parametric rate-distortion representation.
inline double inner_objective(const Distribution& q_x, const Distribution& p_y, double nu,
                              const DistortionSpec& d) {
  if (d.rows() != q_x.size() || d.cols() != p_y.size())
    throw std::invalid_argument("inner_objective: shape mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < d.rows(); ++x) {
    if (q_x[x] == 0.0) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < d.cols(); ++y)
      if (p_y[y] > 0.0) best = std::max(best, std::log(p_y[y]) - nu * d(x, y));
    double acc = 0.0;
    for (std::size_t y = 0; y < d.cols(); ++y)
      if (p_y[y] > 0.0) acc += std::exp(std::log(p_y[y]) - nu * d(x, y) - best);
    total -= q_x[x] * (best + std::log(acc));
  }
  return total;
}

inline InnerSolution min_py_inner(const Distribution& q_x, double nu, const DistortionKernel& kernel,
                                  const SolveOptions& opt = {}) {
  auto sol = arimoto_solve(kernel, q_x.probs(), 0.0, nu, opt);
  return {Distribution(std::move(sol.p_y)), sol.value, sol.report};
}

inline InnerSolution min_py_inner(const Distribution& q_x, double nu, const DistortionSpec& d,
                                  const SolveOptions& opt = {}) {
  return min_py_inner(q_x, nu, DistortionKernel(d), opt);
}

struct RateOptions {
  SolveOptions inner;
  double nu_tol = 1e-5;     // bracket width at which the nu search stops
  double initial_hi = 0.0;  // 0 picks 50 / (smallest positive distortion)
  double cap_factor = 1e6;  // bracket expansion gives up at initial_hi * cap_factor
};

// Cross-call warm start for sweeps: reuses the previous optimal reproduction
// and centers the nu bracket near the previous maximizer.
struct RateScratch {
  std::vector<double> p_y;
  double nu_star = -1.0;
  bool valid = false;
};

// R(delta | q) = sup_{nu >= 0} [ -nu delta + min_p -sum_x q(x) log A_p(x) ],
// solved by bracketing the concave objective in nu and golden-section search.
inline RdPoint rate_at_delta(const Distribution& q_x, const DistortionKernel& kernel, double delta,
                             const RateOptions& opt = {}, RateScratch* scratch = nullptr) {
  if (!(delta >= 0.0)) throw std::domain_error("rate_at_delta: delta must be >= 0");
  std::size_t zero_rate_arg = 0;
  double dmax = kernel.delta_max(q_x.probs(), &zero_rate_arg);
  if (delta >= dmax)
    return {delta, 0.0, 0.0, Distribution::point_mass(kernel.cols(), zero_rate_arg)};

  RateScratch local;
  RateScratch& warm = scratch ? *scratch : local;
  auto eval = [&](double nu) {
    SolveOptions so = opt.inner;
    if (warm.valid && warm.p_y.size() == kernel.cols()) so.initial_py = &warm.p_y;
    auto sol = arimoto_solve(kernel, q_x.probs(), 0.0, nu, so);
    warm.p_y = std::move(sol.p_y);
    warm.valid = true;
    return sol.value - nu * delta;
  };

  double base_hi = opt.initial_hi > 0.0 ? opt.initial_hi : 50.0 / kernel.min_positive_value();
  double cap = base_hi * opt.cap_factor;
  double hi = base_hi;
  if (warm.nu_star > 0.0) hi = std::min(base_hi, std::max(2.0 * warm.nu_star, 1e-3 * base_hi));
  double gm = eval(0.95 * hi);
  double gh = eval(hi);
  while (gh >= gm && hi < cap) {
    hi *= 2.0;
    gm = eval(0.95 * hi);
    gh = eval(hi);
  }

  auto [nu_star, g_star] = golden_max(eval, 0.0, hi, opt.nu_tol);
  if (gh > g_star) {
    nu_star = hi;
    g_star = gh;
  }
  // re-solve at the maximizer so the returned p_y belongs to nu_star
  double rate = std::max(0.0, eval(nu_star));
  warm.nu_star = nu_star;
  return {delta, rate, nu_star, Distribution(warm.p_y)};
}

inline RdPoint rate_at_delta(const Distribution& q_x, const DistortionSpec& d, double delta,
                             const RateOptions& opt = {}, RateScratch* scratch = nullptr) {
  return rate_at_delta(q_x, DistortionKernel(d), delta, opt, scratch);
}

inline Curve rd_curve(const Distribution& q_x, const DistortionSpec& d,
                      const std::vector<double>& deltas, const RateOptions& opt = {}) {
  DistortionKernel kernel(d);
  RateScratch scratch;
  Curve out;
  out.points.reserve(deltas.size());
  for (double delta : deltas) {
    auto pt = rate_at_delta(q_x, kernel, delta, opt, &scratch);
    out.points.push_back({delta, pt.rate});
  }
  return out;
}

struct TiltedInfo {
  std::vector<double> per_letter;  // nats
  double expectation = 0.0;
  RdPoint point;
};

// Per-letter tilted information at distortion level delta:
//   j(x) = -log sum_y p*(y) e^{-nu* (d(x,y) - delta)}
// whose expectation under q reproduces R(delta | q).
inline TiltedInfo d_tilted_information(const Distribution& q_x, const DistortionSpec& d, double delta,
                                       const RateOptions& opt = {}) {
  DistortionKernel kernel(d);
  double dmax = kernel.delta_max(q_x.probs());
  if (!(delta > 0.0 && delta < dmax))
    throw std::domain_error("d_tilted_information: delta outside (0, delta_max)");
  TiltedInfo out;
  out.point = rate_at_delta(q_x, kernel, delta, opt);
  std::vector<double> la;
  kernel.log_row_mix(out.point.p_y.probs(), out.point.nu, la);
  out.per_letter.resize(q_x.size());
  for (std::size_t x = 0; x < q_x.size(); ++x) {
    out.per_letter[x] = -out.point.nu * delta - la[x];
    out.expectation += q_x[x] * out.per_letter[x];
  }
  return out;
}

}  // namespace rdexp
