#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdexp/kernel.hpp"

namespace rdexp {

struct SolveOptions {
  double tol = 1e-12;          // stop when the objective moves less than this
  long max_iterations = 100000;
  double support_floor = 1e-300;  // reproduction mass below this is dropped for good
  const std::vector<double>* initial_py = nullptr;
  std::vector<double>* objective_trace = nullptr;
};

struct IterationReport {
  long iterations = 0;
  double last_change = std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct ArimotoSolution {
  std::vector<double> p_y;
  double value = 0.0;
  IterationReport report;
};

// Alternating update over reproduction distributions p_Y, one code path for
// the whole family:
//   rho == 0  minimizes  F(p) = -sum_x q(x) log A_p(x)      (value = F)
//   rho  > 0  maximizes  -log sum_x q(x) A_p(x)^{-rho}      (value = that)
// where A_p(x) = sum_y p(y) e^{-nu d(x,y)}. Both reduce to the multiplicative
// update p'(y) proportional to p(y) * S(y)^{1/(1+rho)} with
// S(y) = sum_x q(x) e^{-nu d(x,y)} A(x)^{-(1+rho)}; the objective is monotone
// along the iterates in both regimes.
inline ArimotoSolution arimoto_solve(const DistortionKernel& kernel, const std::vector<double>& q_x,
                                     double rho, double nu, const SolveOptions& opt = {}) {
  const std::size_t nx = kernel.rows(), ny = kernel.cols();
  if (q_x.size() != nx) throw std::invalid_argument("arimoto_solve: source size mismatch");
  if (!(rho >= 0.0)) throw std::domain_error("arimoto_solve: rho must be >= 0");
  if (!(nu >= 0.0)) throw std::domain_error("arimoto_solve: nu must be >= 0");
  const double neg_inf = -std::numeric_limits<double>::infinity();

  std::vector<double> lq(nx);
  for (std::size_t x = 0; x < nx; ++x) lq[x] = q_x[x] > 0.0 ? std::log(q_x[x]) : neg_inf;

  std::vector<double> p, lp(ny);
  if (opt.initial_py && opt.initial_py->size() == ny) {
    // A warm start is a hint, not a support constraint: letters the previous
    // instance dropped must stay revivable, so clamp to the floor instead of
    // zeroing. The multiplicative update cannot resurrect an exact zero.
    p = *opt.initial_py;
    double sum = 0.0;
    for (double& v : p) {
      if (!(v >= opt.support_floor)) v = opt.support_floor;
      sum += v;
    }
    if (!(sum > 0.0)) p.assign(ny, 1.0 / static_cast<double>(ny));
    else
      for (double& v : p) v /= sum;
  } else {
    p.assign(ny, 1.0 / static_cast<double>(ny));
  }
  for (std::size_t y = 0; y < ny; ++y) lp[y] = p[y] > 0.0 ? std::log(p[y]) : neg_inf;

  const double sigma = 1.0 / (1.0 + rho);
  std::vector<double> la(nx), lw(nx), ls(ny);

  auto objective = [&]() {
    if (rho == 0.0) {
      double f = 0.0;
      for (std::size_t x = 0; x < nx; ++x)
        if (q_x[x] > 0.0) f -= q_x[x] * la[x];
      return f;
    }
    double best = neg_inf;
    for (std::size_t x = 0; x < nx; ++x)
      if (q_x[x] > 0.0) best = std::max(best, lq[x] - rho * la[x]);
    double acc = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      if (q_x[x] > 0.0) acc += std::exp(lq[x] - rho * la[x] - best);
    return -(best + std::log(acc));
  };

  ArimotoSolution out;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (long it = 0; it < opt.max_iterations; ++it) {
    kernel.log_row_mix(p, nu, la);
    double obj = objective();
    if (opt.objective_trace) opt.objective_trace->push_back(obj);
    out.value = obj;
    out.report.iterations = it;
    if (it > 0) {
      out.report.last_change = std::abs(obj - prev);
      if (out.report.last_change < opt.tol) {
        out.report.converged = true;
        break;
      }
    }
    prev = obj;

    for (std::size_t x = 0; x < nx; ++x)
      lw[x] = q_x[x] > 0.0 ? lq[x] - (1.0 + rho) * la[x] : neg_inf;
    kernel.log_col_mix(lw, nu, ls);
    double norm_best = neg_inf;
    for (std::size_t y = 0; y < ny; ++y) {
      lp[y] = p[y] > 0.0 && std::isfinite(ls[y]) ? lp[y] + sigma * ls[y] : neg_inf;
      norm_best = std::max(norm_best, lp[y]);
    }
    double norm = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
      if (std::isfinite(lp[y])) norm += std::exp(lp[y] - norm_best);
    double log_norm = norm_best + std::log(norm);
    for (std::size_t y = 0; y < ny; ++y) {
      if (!std::isfinite(lp[y])) {
        p[y] = 0.0;
        continue;
      }
      lp[y] -= log_norm;
      p[y] = std::exp(lp[y]);
      if (p[y] < opt.support_floor) {
        p[y] = 0.0;
        lp[y] = neg_inf;
      }
    }
  }
  if (!out.report.converged) {  // value must describe the p actually returned
    kernel.log_row_mix(p, nu, la);
    out.value = objective();
  }
  out.p_y = std::move(p);
  return out;
}

}  // namespace rdexp
