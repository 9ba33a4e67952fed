#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdexp {

inline constexpr double simplex_tol = 1e-12;

enum class Unit { nats, bits };

inline double in_unit(double nats_value, Unit unit) {
  return unit == Unit::bits ? nats_value / std::numbers::ln2 : nats_value;
}

inline const char* unit_name(Unit unit) { return unit == Unit::bits ? "bits" : "nats"; }

// Probability vector on a finite alphabet. Singleton alphabets are allowed so
// that degenerate reproduction alphabets (|Y| = 1) stay expressible; input
// validation for user-facing sources lives at the CLI boundary.
class Distribution {
public:
  Distribution() = default;

  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("Distribution: empty vector");
    double sum = 0.0;
    for (double v : probs_) {
      if (!(v >= 0.0)) throw std::invalid_argument("Distribution: negative or NaN entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("Distribution: entries sum to " + std::to_string(sum));
    if (std::abs(sum - 1.0) > simplex_tol)
      for (double& v : probs_) v /= sum;
  }

  static Distribution uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(std::size_t n, std::size_t i) {
    std::vector<double> v(n, 0.0);
    v.at(i) = 1.0;
    return Distribution(std::move(v));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

private:
  std::vector<double> probs_;
};

// Rows are conditional laws q(y|x), one per source letter.
class ConditionalDistribution {
public:
  ConditionalDistribution(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("ConditionalDistribution: empty shape");
  }

  explicit ConditionalDistribution(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
      throw std::invalid_argument("ConditionalDistribution: empty shape");
    rows_ = rows.size();
    cols_ = rows.front().size();
    values_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ConditionalDistribution: ragged rows");
      Distribution check(r);  // validates simplex row
      for (double v : check.probs()) values_.push_back(v);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return values_[x * cols_ + y]; }
  double& operator()(std::size_t x, std::size_t y) { return values_[x * cols_ + y]; }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> values_;
};

// Nonnegative distortion matrix d(x, y), |X| rows by |Y| columns.
class DistortionSpec {
public:
  DistortionSpec(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("DistortionSpec: empty shape");
    if (!(fill >= 0.0)) throw std::invalid_argument("DistortionSpec: negative entry");
  }

  explicit DistortionSpec(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
      throw std::invalid_argument("DistortionSpec: empty shape");
    rows_ = rows.size();
    cols_ = rows.front().size();
    values_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("DistortionSpec: ragged rows");
      for (double v : r) {
        if (!(v >= 0.0)) throw std::invalid_argument("DistortionSpec: negative or NaN entry");
        values_.push_back(v);
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const { return values_[x * cols_ + y]; }
  double& operator()(std::size_t x, std::size_t y) { return values_[x * cols_ + y]; }

  double max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  // Smallest strictly positive entry; +inf when the matrix is all zero.
  double min_positive_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_)
      if (v > 0.0) m = std::min(m, v);
    return m;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> values_;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct Curve {
  std::vector<CurvePoint> points;
  Unit unit = Unit::nats;
};

inline Curve curve_in_unit(const Curve& c, Unit unit, bool convert_x, bool convert_y) {
  if (c.unit == unit) return c;
  if (c.unit != Unit::nats) throw std::invalid_argument("curve_in_unit: source must be in nats");
  Curve out;
  out.unit = unit;
  out.points.reserve(c.points.size());
  for (const auto& pt : c.points)
    out.points.push_back({convert_x ? in_unit(pt.x, unit) : pt.x,
                          convert_y ? in_unit(pt.y, unit) : pt.y});
  return out;
}

}  // namespace rdexp
