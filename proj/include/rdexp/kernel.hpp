#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rdexp/types.hpp"

namespace rdexp {

// Precomputed view of a distortion matrix for mixes of the form
//   sum_j w(j) * exp(-nu * d(i, j))
// along either axis. Entries are grouped by distinct distortion value, so a
// mix reduces to exact partial sums of the weights followed by a small
// log-sum-exp over the distinct values. No intermediate can underflow or
// overflow at any nu, and no per-entry exponential is ever taken, which is
// what keeps dense sweeps over (nu, rho) grids affordable.
class DistortionKernel {
public:
  explicit DistortionKernel(const DistortionSpec& d)
      : nx_(d.rows()), ny_(d.cols()) {
    values_.reserve(nx_ * ny_);
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t y = 0; y < ny_; ++y) values_.push_back(d(x, y));
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());

    auto value_index = [&](double v) {
      return static_cast<std::int32_t>(
          std::lower_bound(values_.begin(), values_.end(), v) - values_.begin());
    };
    build_axis(by_row_, nx_, ny_, [&](std::size_t o, std::size_t i) { return value_index(d(o, i)); });
    build_axis(by_col_, ny_, nx_, [&](std::size_t o, std::size_t i) { return value_index(d(i, o)); });
  }

  std::size_t rows() const { return nx_; }
  std::size_t cols() const { return ny_; }
  const std::vector<double>& distinct_values() const { return values_; }

  double max_value() const { return values_.back(); }

  double min_positive_value() const {
    for (double v : values_)
      if (v > 0.0) return v;
    return std::numeric_limits<double>::infinity();
  }

  // log_a[x] = log sum_y p[y] exp(-nu d(x,y)); -inf when the mix is empty.
  void log_row_mix(const std::vector<double>& p, double nu, std::vector<double>& log_a) const {
    mix_linear(by_row_, nx_, p, nu, log_a);
  }

  // log_s[y] = log sum_x exp(log_w[x] - nu d(x,y)); log_w entries may be -inf.
  void log_col_mix(const std::vector<double>& log_w, double nu, std::vector<double>& log_s) const {
    double shift = -std::numeric_limits<double>::infinity();
    for (double v : log_w) shift = std::max(shift, v);
    if (!std::isfinite(shift)) {
      log_s.assign(ny_, -std::numeric_limits<double>::infinity());
      return;
    }
    std::vector<double> w(log_w.size());
    for (std::size_t i = 0; i < log_w.size(); ++i)
      w[i] = std::isfinite(log_w[i]) ? std::exp(log_w[i] - shift) : 0.0;
    mix_linear(by_col_, ny_, w, nu, log_s);
    for (double& v : log_s)
      if (std::isfinite(v)) v += shift;
  }

  // Expected distortion of each reproduction letter under source weights q.
  void column_distortion(const std::vector<double>& q, std::vector<double>& out) const {
    out.assign(ny_, 0.0);
    for (std::size_t y = 0; y < ny_; ++y) {
      double e = 0.0;
      for (std::int32_t s = by_col_.seg_begin[y]; s < by_col_.seg_begin[y + 1]; ++s) {
        double mass = 0.0;
        for (std::int32_t k = by_col_.item_begin[s]; k < by_col_.item_begin[s + 1]; ++k)
          mass += q[by_col_.items[k]];
        e += values_[by_col_.seg_value[s]] * mass;
      }
      out[y] = e;
    }
  }

  double delta_max(const std::vector<double>& q, std::size_t* arg = nullptr) const {
    std::vector<double> col;
    column_distortion(q, col);
    std::size_t best = 0;
    for (std::size_t y = 1; y < ny_; ++y)
      if (col[y] < col[best]) best = y;
    if (arg) *arg = best;
    return col[best];
  }

private:
  struct Axis {
    std::vector<std::int32_t> seg_begin;   // outer index -> first segment
    std::vector<std::int32_t> seg_value;   // segment -> distinct value index
    std::vector<std::int32_t> item_begin;  // segment -> first item
    std::vector<std::int32_t> items;       // inner indices grouped by segment
  };

  template <typename ValueIndexFn>
  void build_axis(Axis& axis, std::size_t outer, std::size_t inner, ValueIndexFn vidx) {
    axis.seg_begin.assign(outer + 1, 0);
    axis.items.reserve(outer * inner);
    std::vector<std::pair<std::int32_t, std::int32_t>> row(inner);
    std::int32_t seg_count = 0;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i)
        row[i] = {vidx(o, i), static_cast<std::int32_t>(i)};
      std::sort(row.begin(), row.end());
      for (std::size_t i = 0; i < inner; ++i) {
        if (i == 0 || row[i].first != row[i - 1].first) {
          axis.seg_value.push_back(row[i].first);
          axis.item_begin.push_back(static_cast<std::int32_t>(axis.items.size()));
          ++seg_count;
        }
        axis.items.push_back(row[i].second);
      }
      axis.seg_begin[o + 1] = seg_count;
    }
    axis.item_begin.push_back(static_cast<std::int32_t>(axis.items.size()));
  }

  // out[o] = log sum over segments of value v: exp(-nu v) * (sum of w over items)
  void mix_linear(const Axis& axis, std::size_t outer, const std::vector<double>& w, double nu,
                  std::vector<double>& out) const {
    out.resize(outer);
    std::vector<double> t;
    for (std::size_t o = 0; o < outer; ++o) {
      t.clear();
      double best = -std::numeric_limits<double>::infinity();
      for (std::int32_t s = axis.seg_begin[o]; s < axis.seg_begin[o + 1]; ++s) {
        double mass = 0.0;
        for (std::int32_t k = axis.item_begin[s]; k < axis.item_begin[s + 1]; ++k)
          mass += w[axis.items[k]];
        if (mass > 0.0) {
          double lv = std::log(mass) - nu * values_[axis.seg_value[s]];
          t.push_back(lv);
          best = std::max(best, lv);
        }
      }
      if (t.empty()) {
        out[o] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double acc = 0.0;
      for (double lv : t) acc += std::exp(lv - best);
      out[o] = best + std::log(acc);
    }
  }

  std::size_t nx_, ny_;
  std::vector<double> values_;
  Axis by_row_, by_col_;
};

}  // namespace rdexp
