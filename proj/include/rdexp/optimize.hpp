#pragma once

#include <cmath>
#include <utility>

namespace rdexp {

// Golden-section maximization of a unimodal f on [lo, hi]. Returns the best
// evaluated (x, f(x)) once the bracket is narrower than tol.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  double best_x = f1 >= f2 ? x1 : x2;
  double best_f = f1 >= f2 ? f1 : f2;
  while (hi - lo > tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
    if (f1 > best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 > best_f) {
      best_f = f2;
      best_x = x2;
    }
  }
  return {best_x, best_f};
}

}  // namespace rdexp
