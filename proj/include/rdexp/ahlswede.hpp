#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdexp/info.hpp"
#include "rdexp/kernel.hpp"
#include "rdexp/optimize.hpp"
#include "rdexp/parallel.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/types.hpp"

namespace rdexp {

// Two-block source: block A with size_a letters at unit within-block
// distortion, block B with size_b letters at within-block distortion a, and
// prohibitive cross-block distortion b. With (delta, a) solved from the block
// sizes, the uniform-on-A and uniform-on-B sources have equal rates at
// distortion delta, which is what makes mixtures of the two blocks
// interesting.
struct CounterexampleSpec {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
  double xi = 0.0;  // block-B mass of the nominal source
};

struct BlockParameters {
  double delta = 0.0;
  double a = 0.0;
};

// Equal-rate condition between the two blocks. Writing the uniform block
// rates with Hamming-type distortion,
//   R_A = log mA - h(delta) - delta log(mA - 1)
//   R_B = log mB - h(delta/a) - (delta/a) log(mB - 1)
// and pinning delta/a = 1 - delta makes the entropy terms cancel, leaving a
// linear equation for delta.
inline BlockParameters solve_parameters(std::size_t size_a, std::size_t size_b) {
  if (size_a < 2 || size_b < 2)
    throw std::invalid_argument("solve_parameters: both blocks need at least two letters");
  double la = std::log(static_cast<double>(size_a));
  double lb = std::log(static_cast<double>(size_b));
  double la1 = std::log(static_cast<double>(size_a - 1));
  double lb1 = std::log(static_cast<double>(size_b - 1));
  double delta = (la - lb + lb1) / (la1 + lb1);
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("solve_parameters: block sizes give no valid distortion level");
  return {delta, delta / (1.0 - delta)};
}

inline CounterexampleSpec make_counterexample(std::size_t size_a, std::size_t size_b, double xi,
                                              double b = 0.0) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::domain_error("make_counterexample: xi outside [0, 1]");
  auto par = solve_parameters(size_a, size_b);
  CounterexampleSpec spec;
  spec.size_a = size_a;
  spec.size_b = size_b;
  spec.a = par.a;
  spec.delta = par.delta;
  spec.xi = xi;
  spec.b = b > 0.0 ? b : 100.0 * std::max(1.0, par.a);
  if (!(spec.b > std::max(1.0, spec.a)))
    throw std::domain_error("make_counterexample: b must exceed max(1, a)");
  return spec;
}

inline DistortionSpec build_distortion(const CounterexampleSpec& spec) {
  std::size_t n = spec.size_a + spec.size_b;
  DistortionSpec d(n, n, spec.b);
  for (std::size_t x = 0; x < spec.size_a; ++x)
    for (std::size_t y = 0; y < spec.size_a; ++y) d(x, y) = x == y ? 0.0 : 1.0;
  for (std::size_t x = 0; x < spec.size_b; ++x)
    for (std::size_t y = 0; y < spec.size_b; ++y)
      d(spec.size_a + x, spec.size_a + y) = x == y ? 0.0 : spec.a;
  return d;
}

// Q_lambda: mass lambda uniform on block A, 1 - lambda uniform on block B.
inline Distribution q_lambda(const CounterexampleSpec& spec, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("q_lambda: lambda outside [0, 1]");
  std::vector<double> probs(spec.size_a + spec.size_b);
  for (std::size_t x = 0; x < spec.size_a; ++x)
    probs[x] = lambda / static_cast<double>(spec.size_a);
  for (std::size_t x = 0; x < spec.size_b; ++x)
    probs[spec.size_a + x] = (1.0 - lambda) / static_cast<double>(spec.size_b);
  return Distribution(std::move(probs));
}

struct Endpoints {
  double rate_a = 0.0;  // nats, R(delta) of the uniform-on-A source
  double rate_b = 0.0;  // nats, R(delta) of the uniform-on-B source
};

inline Endpoints closed_form_endpoints(const CounterexampleSpec& spec) {
  double ma = static_cast<double>(spec.size_a);
  double mb = static_cast<double>(spec.size_b);
  double fa = spec.delta;
  double fb = spec.delta / spec.a;
  Endpoints out;
  out.rate_a = std::log(ma) - binary_entropy(fa) - fa * std::log(ma - 1.0);
  out.rate_b = std::log(mb) - binary_entropy(fb) - fb * std::log(mb - 1.0);
  return out;
}

struct LambdaCurve {
  std::vector<double> lambdas;
  std::vector<double> rates;       // R(delta | Q_lambda), nats
  std::vector<CurvePoint> maxima;  // strict interior local maxima, refined
};

// R(delta | Q_lambda) over a lambda grid. Blocks of the grid run in
// parallel with a warm-started solver chain inside each block; interior
// local maxima are sharpened by golden section afterwards.
inline LambdaCurve lambda_curve(const CounterexampleSpec& spec,
                                const std::vector<double>& lambda_grid,
                                const RateOptions& opt = {}, unsigned threads = 0,
                                double lambda_tol = 1e-6) {
  if (lambda_grid.size() < 3) throw std::invalid_argument("lambda_curve: grid too small");
  DistortionKernel kernel(build_distortion(spec));
  LambdaCurve out;
  out.lambdas = lambda_grid;
  out.rates.assign(lambda_grid.size(), 0.0);

  parallel_blocks(lambda_grid.size(), 16, threads, [&](std::size_t lo, std::size_t hi) {
    RateScratch scratch;
    for (std::size_t i = lo; i < hi; ++i)
      out.rates[i] = rate_at_delta(q_lambda(spec, lambda_grid[i]), kernel, spec.delta, opt,
                                   &scratch).rate;
  });

  RateScratch scratch;
  auto eval = [&](double lambda) {
    return rate_at_delta(q_lambda(spec, lambda), kernel, spec.delta, opt, &scratch).rate;
  };
  for (std::size_t i = 1; i + 1 < lambda_grid.size(); ++i) {
    if (out.rates[i] > out.rates[i - 1] && out.rates[i] > out.rates[i + 1]) {
      auto [lam, rate] = golden_max(eval, lambda_grid[i - 1], lambda_grid[i + 1], lambda_tol);
      out.maxima.push_back({lam, rate});
    }
  }
  return out;
}

// Smallest lambda in [lo, hi] whose rate reaches `rate`, assuming
// R(delta | Q_lambda) - rate changes sign exactly once there.
inline double find_lambda_matching_rate(const CounterexampleSpec& spec, double rate, double lo,
                                        double hi, const RateOptions& opt = {},
                                        double lambda_tol = 1e-6) {
  DistortionKernel kernel(build_distortion(spec));
  RateScratch scratch;
  auto eval = [&](double lambda) {
    return rate_at_delta(q_lambda(spec, lambda), kernel, spec.delta, opt, &scratch).rate - rate;
  };
  double flo = eval(lo), fhi = eval(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::domain_error("find_lambda_matching_rate: rate not bracketed on [lo, hi]");
  while (hi - lo > lambda_tol) {
    double mid = 0.5 * (lo + hi);
    double fm = eval(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Direct exponent over the block-mixture family: for each achievable rate r,
// the smallest D(Q_lambda || Q_xi) = d_2(lambda || xi) among lambdas whose
// rate reaches r. Besides the raw grid, the candidate set gets the
// exact xi point (pinning the zero-exponent segment), the refined curve
// maxima (tops of the staircase), and for each non-final maximum the matching
// lambda on the next rising branch, so jump heights are bisection-exact
// rather than grid-quantized.
inline Curve marton_theorem3(const CounterexampleSpec& spec, const LambdaCurve& lc,
                             const RateOptions& opt = {}) {
  struct Cand {
    double rate = 0.0;
    double div = 0.0;
  };
  std::vector<Cand> cands;
  cands.reserve(lc.lambdas.size() + 2 * lc.maxima.size() + 1);
  for (std::size_t i = 0; i < lc.lambdas.size(); ++i)
    cands.push_back({lc.rates[i], binary_divergence(lc.lambdas[i], spec.xi)});

  DistortionKernel kernel(build_distortion(spec));
  double rate_xi = rate_at_delta(q_lambda(spec, spec.xi), kernel, spec.delta, opt).rate;
  cands.push_back({rate_xi, 0.0});

  for (const auto& m : lc.maxima) cands.push_back({m.y, binary_divergence(m.x, spec.xi)});

  for (std::size_t k = 0; k + 1 < lc.maxima.size(); ++k) {
    if (!(lc.maxima[k + 1].y > lc.maxima[k].y)) continue;
    // grid dip between the two maxima brackets the matching rising branch
    std::size_t dip = 0;
    double dip_rate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lc.lambdas.size(); ++i) {
      if (lc.lambdas[i] <= lc.maxima[k].x || lc.lambdas[i] >= lc.maxima[k + 1].x) continue;
      if (lc.rates[i] < dip_rate) {
        dip_rate = lc.rates[i];
        dip = i;
      }
    }
    if (!(dip_rate < lc.maxima[k].y)) continue;
    double partner = find_lambda_matching_rate(spec, lc.maxima[k].y, lc.lambdas[dip],
                                               lc.maxima[k + 1].x, opt);
    cands.push_back({lc.maxima[k].y, binary_divergence(partner, spec.xi)});
  }

  std::sort(cands.begin(), cands.end(), [](const Cand& u, const Cand& v) {
    return u.rate < v.rate || (u.rate == v.rate && u.div < v.div);
  });

  // E_i = min_{j >= i} D_j after the sort; one point per distinct rate.
  Curve out;
  out.points.reserve(cands.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = cands.size(); i-- > 0;) {
    best = std::min(best, cands[i].div);
    if (i == 0 || cands[i - 1].rate != cands[i].rate) out.points.push_back({cands[i].rate, best});
  }
  std::reverse(out.points.begin(), out.points.end());
  return out;
}

inline Curve marton_theorem3(const CounterexampleSpec& spec, const std::vector<double>& lambda_grid,
                             const RateOptions& opt = {}, unsigned threads = 0) {
  return marton_theorem3(spec, lambda_curve(spec, lambda_grid, opt, threads), opt);
}

}  // namespace rdexp
