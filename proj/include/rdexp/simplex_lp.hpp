#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rdexp {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase tableau simplex for small problems:
//   maximize c.x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
// Dantzig entering rule with a Bland fallback for cycling, smallest-index tie
// breaks throughout so results are deterministic.
class DenseSimplex {
public:
  DenseSimplex(std::vector<std::vector<double>> a_ub, std::vector<double> b_ub,
               std::vector<std::vector<double>> a_eq, std::vector<double> b_eq,
               std::vector<double> c, double tol = 1e-10)
      : c_(std::move(c)), tol_(tol) {
    n_ = c_.size();
    if (a_ub.size() != b_ub.size() || a_eq.size() != b_eq.size())
      throw std::invalid_argument("DenseSimplex: row/rhs mismatch");
    struct Row {
      std::vector<double> a;
      double b;
      int slack;  // +1 surplus-free slack, -1 surplus, 0 none
      bool artificial;
    };
    std::vector<Row> rows;
    rows.reserve(a_ub.size() + a_eq.size());
    for (std::size_t i = 0; i < a_ub.size(); ++i) {
      if (a_ub[i].size() != n_) throw std::invalid_argument("DenseSimplex: bad row width");
      Row r{std::move(a_ub[i]), b_ub[i], +1, false};
      if (r.b < 0.0) {  // flip to >= with positive rhs, needs surplus + artificial
        for (double& v : r.a) v = -v;
        r.b = -r.b;
        r.slack = -1;
        r.artificial = true;
      }
      rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < a_eq.size(); ++i) {
      if (a_eq[i].size() != n_) throw std::invalid_argument("DenseSimplex: bad row width");
      Row r{std::move(a_eq[i]), b_eq[i], 0, true};
      if (r.b < 0.0) {
        for (double& v : r.a) v = -v;
        r.b = -r.b;
      }
      rows.push_back(std::move(r));
    }
    m_ = rows.size();
    std::size_t n_slack = 0, n_art = 0;
    for (const auto& r : rows) {
      if (r.slack != 0) ++n_slack;
      if (r.artificial) ++n_art;
    }
    slack_begin_ = n_;
    art_begin_ = n_ + n_slack;
    ncols_ = art_begin_ + n_art;
    t_.assign(m_, std::vector<double>(ncols_ + 1, 0.0));
    basis_.assign(m_, 0);
    std::size_t si = 0, ai = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = rows[i].a[j];
      t_[i][ncols_] = rows[i].b;
      if (rows[i].slack != 0) t_[i][slack_begin_ + si++] = rows[i].slack;
      if (rows[i].artificial) {
        std::size_t col = art_begin_ + ai++;
        t_[i][col] = 1.0;
        basis_[i] = col;
      } else {
        basis_[i] = slack_begin_ + si - 1;
      }
    }
  }

  LpResult solve() {
    LpResult out;
    if (art_begin_ < ncols_) {  // phase 1: drive artificials to zero
      std::vector<double> cost(ncols_, 0.0);
      for (std::size_t j = art_begin_; j < ncols_; ++j) cost[j] = -1.0;
      double value = run(cost, true);
      if (value < -1e-7) {
        out.status = LpResult::Status::infeasible;
        return out;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < art_begin_) continue;
        std::size_t enter = ncols_;
        for (std::size_t j = 0; j < art_begin_; ++j)
          if (std::abs(t_[i][j]) > tol_) {
            enter = j;
            break;
          }
        if (enter < ncols_) pivot(i, enter);
        // otherwise the row is redundant; the artificial stays basic at zero
      }
    }
    std::vector<double> cost(ncols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c_[j];
    double value = run(cost, false);
    if (unbounded_) {
      out.status = LpResult::Status::unbounded;
      return out;
    }
    out.objective = value;
    out.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.x[basis_[i]] = t_[i][ncols_];
    return out;
  }

private:
  // One simplex phase; returns the final objective value. Artificial columns
  // may never enter outside phase 1.
  double run(const std::vector<double>& cost, bool phase1) {
    unbounded_ = false;
    std::vector<double> obj(ncols_, 0.0);
    double obj_rhs = 0.0;
    for (std::size_t j = 0; j < ncols_; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (cost[basis_[i]] != 0.0) z += cost[basis_[i]] * t_[i][j];
      obj[j] = z - cost[j];
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (cost[basis_[i]] != 0.0) obj_rhs += cost[basis_[i]] * t_[i][ncols_];

    const long bland_after = 10000;
    for (long iter = 0;; ++iter) {
      std::size_t limit = phase1 ? ncols_ : art_begin_;
      std::size_t enter = limit;
      if (iter < bland_after) {
        double best = -tol_;
        for (std::size_t j = 0; j < limit; ++j)
          if (obj[j] < best) {
            best = obj[j];
            enter = j;
          }
      } else {
        for (std::size_t j = 0; j < limit; ++j)
          if (obj[j] < -tol_) {
            enter = j;
            break;
          }
      }
      if (enter == limit) return obj_rhs;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] > tol_) {
          double ratio = t_[i][ncols_] / t_[i][enter];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && leave < m_ && basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m_) {
        unbounded_ = true;
        return obj_rhs;
      }
      pivot(leave, enter);
      double f = obj[enter];
      if (f != 0.0) {
        for (std::size_t j = 0; j <= ncols_; ++j) {
          double v = (j == ncols_) ? t_[leave][ncols_] : t_[leave][j];
          if (j == ncols_)
            obj_rhs -= f * v;
          else
            obj[j] -= f * v;
        }
      }
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    double piv = t_[r][col];
    for (std::size_t j = 0; j <= ncols_; ++j) t_[r][j] /= piv;
    t_[r][col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols_; ++j) t_[i][j] -= f * t_[r][j];
      t_[i][col] = 0.0;
    }
    basis_[r] = col;
  }

  std::vector<double> c_;
  double tol_;
  std::size_t n_ = 0, m_ = 0, ncols_ = 0, slack_begin_ = 0, art_begin_ = 0;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  bool unbounded_ = false;
};

}  // namespace rdexp
