#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rdexp {

// All probability vectors with coordinates that are integer multiples of
// `step` (step = 1/n for integer n). Enumeration is lexicographic in the
// integer composition, so iteration order is deterministic.
class SimplexGrid {
 public:
  SimplexGrid(std::size_t dimension, double step) : dim_(dimension) {
    if (dimension == 0) throw std::invalid_argument("SimplexGrid: dimension must be positive");
    double n = 1.0 / step;
    levels_ = static_cast<long>(std::llround(n));
    if (!(step > 0.0) || levels_ < 1 || std::abs(n - static_cast<double>(levels_)) > 1e-9)
      throw std::invalid_argument("SimplexGrid: step must be 1/n for a positive integer n");
  }

  std::size_t dimension() const { return dim_; }
  long levels() const { return levels_; }

  // C(levels + dim - 1, dim - 1) points.
  std::size_t count() const {
    double c = 1.0;
    for (std::size_t i = 1; i < dim_; ++i)
      c *= static_cast<double>(levels_ + static_cast<long>(i)) / static_cast<double>(i);
    return static_cast<std::size_t>(std::llround(c));
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<long> counts(dim_, 0);
    std::vector<double> point(dim_, 0.0);
    recurse(0, levels_, counts, point, fn);
  }

 private:
  template <typename Fn>
  void recurse(std::size_t i, long remaining, std::vector<long>& counts,
               std::vector<double>& point, Fn& fn) const {
    if (i + 1 == dim_) {
      counts[i] = remaining;
      point[i] = static_cast<double>(remaining) / static_cast<double>(levels_);
      fn(const_cast<const std::vector<double>&>(point));
      return;
    }
    for (long k = 0; k <= remaining; ++k) {
      counts[i] = k;
      point[i] = static_cast<double>(k) / static_cast<double>(levels_);
      recurse(i + 1, remaining - k, counts, point, fn);
    }
  }

  std::size_t dim_;
  long levels_;
};

}  // namespace rdexp
