#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdexp/types.hpp"

namespace rdexp {

// All information quantities are in nats; convert at the output boundary only.

inline double entropy(const Distribution& p) {
  double h = 0.0;
  for (double v : p.probs())
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

// D(q || p); q_i > 0 with p_i = 0 gives +infinity.
inline double kl_divergence(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += q[i] * std::log(q[i] / p[i]);
  }
  return std::max(d, 0.0);
}

// Divergence between Bernoulli(lambda) and Bernoulli(xi).
inline double binary_divergence(double lambda, double xi) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("binary_divergence: lambda outside [0,1]");
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::domain_error("binary_divergence: xi outside [0,1]");
  double d = 0.0;
  if (lambda > 0.0) {
    if (xi == 0.0) return std::numeric_limits<double>::infinity();
    d += lambda * std::log(lambda / xi);
  }
  if (lambda < 1.0) {
    if (xi == 1.0) return std::numeric_limits<double>::infinity();
    d += (1.0 - lambda) * std::log((1.0 - lambda) / (1.0 - xi));
  }
  return std::max(d, 0.0);
}

inline double mutual_information(const Distribution& p_x, const ConditionalDistribution& w) {
  if (w.rows() != p_x.size()) throw std::invalid_argument("mutual_information: shape mismatch");
  std::vector<double> marginal(w.cols(), 0.0);
  for (std::size_t x = 0; x < w.rows(); ++x)
    for (std::size_t y = 0; y < w.cols(); ++y) marginal[y] += p_x[x] * w(x, y);
  double mi = 0.0;
  for (std::size_t x = 0; x < w.rows(); ++x) {
    if (p_x[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.cols(); ++y) {
      double v = w(x, y);
      if (v > 0.0) mi += p_x[x] * v * std::log(v / marginal[y]);
    }
  }
  return std::max(mi, 0.0);
}

inline double expected_distortion(const Distribution& p_x, const ConditionalDistribution& w,
                                  const DistortionSpec& d) {
  if (w.rows() != p_x.size() || d.rows() != w.rows() || d.cols() != w.cols())
    throw std::invalid_argument("expected_distortion: shape mismatch");
  double e = 0.0;
  for (std::size_t x = 0; x < w.rows(); ++x)
    for (std::size_t y = 0; y < w.cols(); ++y) e += p_x[x] * w(x, y) * d(x, y);
  return e;
}

// Largest useful distortion level: min over single-letter reproductions of E[d].
inline double delta_max(const Distribution& p_x, const DistortionSpec& d) {
  if (d.rows() != p_x.size()) throw std::invalid_argument("delta_max: shape mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < d.cols(); ++y) {
    double e = 0.0;
    for (std::size_t x = 0; x < d.rows(); ++x) e += p_x[x] * d(x, y);
    best = std::min(best, e);
  }
  return best;
}

// Column attaining delta_max; used for the zero-rate reproduction.
inline std::size_t delta_max_column(const Distribution& p_x, const DistortionSpec& d) {
  std::size_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < d.cols(); ++y) {
    double e = 0.0;
    for (std::size_t x = 0; x < d.rows(); ++x) e += p_x[x] * d(x, y);
    if (e < best) {
      best = e;
      arg = y;
    }
  }
  return arg;
}

}  // namespace rdexp
