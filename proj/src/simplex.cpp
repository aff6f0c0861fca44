#include "bebplan/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace bebplan {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LpSolver::LpSolver(const SparseMip& mip, LpTolerances tol) : tol_(tol) {
  mip.check();
  const std::size_t n = mip.columns.size();
  const std::size_t m = mip.rows.size();
  double cmax = 0.0;
  for (const auto& c : mip.columns) cmax = std::max(cmax, std::abs(c.objective));
  cost_scale_ = cmax > 0.0 ? cmax : 1.0;
  constant_ = mip.objective_constant;
  cost_.reserve(n);
  for (const auto& c : mip.columns) {
    cost_.push_back(c.objective / cost_scale_);
    col_lower_.push_back(c.lower);
    col_upper_.push_back(c.upper);
  }
  for (const auto& r : mip.rows) {
    row_lower_.push_back(r.sense == Sense::LessEqual ? -kInfinity : r.rhs);
    row_upper_.push_back(r.sense == Sense::GreaterEqual ? kInfinity : r.rhs);
  }

  // Column-major copy with duplicate entries summed.
  std::vector<Triplet> t = mip.coefficients;
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  col_start_.assign(n + 1, 0);
  for (std::size_t k = 0; k < t.size();) {
    std::size_t e = k;
    double sum = 0.0;
    while (e < t.size() && t[e].col == t[k].col && t[e].row == t[k].row) sum += t[e++].value;
    if (sum != 0.0) {
      row_index_.push_back(static_cast<int>(t[k].row));
      value_.push_back(sum);
      ++col_start_[t[k].col + 1];
    }
    k = e;
  }
  for (std::size_t j = 0; j < n; ++j) col_start_[j + 1] += col_start_[j];
  (void)m;
}

namespace {

enum : std::int8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFree = 3 };

using SparseMat = Eigen::SparseMatrix<double>;
using Lu = Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>>;

}  // namespace

class SimplexRun {
 public:
  SimplexRun(const LpSolver& lp, const std::vector<double>& lower, const std::vector<double>& upper)
      : lp_(lp), n_(static_cast<int>(lp.cost_.size())), m_(static_cast<int>(lp.row_lower_.size())) {
    lower_ = lower;
    upper_ = upper;
    lower_.insert(lower_.end(), lp.row_lower_.begin(), lp.row_lower_.end());
    upper_.insert(upper_.end(), lp.row_upper_.begin(), lp.row_upper_.end());
    x_.assign(n_ + m_, 0.0);
    status_.assign(n_ + m_, kAtLower);
  }

  LpSolution run(const LpBasis* warm) {
    LpSolution out;
    for (int j = 0; j < n_ + m_; ++j) {
      if (lower_[j] > upper_[j] + lp_.tol_.feasibility) {
        out.status = LpStatus::Infeasible;
        return out;
      }
    }
    if (m_ == 0) return without_rows();

    bool started = false;
    if (warm && warm->status.size() == status_.size() && warm->head.size() == static_cast<std::size_t>(m_)) {
      status_ = warm->status;
      head_ = warm->head;
      started = place_nonbasics() && factor();
    }
    if (!started) slack_start();
    compute_basics();

    out.status = iterate(out.iterations);
    out.values.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == kBasic) out.values[j] = std::clamp(out.values[j], lower_[j], upper_[j]);
    }
    out.objective = lp_.constant_;
    for (int j = 0; j < n_; ++j) out.objective += lp_.cost_[j] * lp_.cost_scale_ * out.values[j];
    out.basis.status = status_;
    out.basis.head = head_;
    return out;
  }

 private:
  struct Eta {
    int r = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> col;  // entries other than r
  };

  double cost(int j) const { return j < n_ ? lp_.cost_[j] : 0.0; }

  template <class Fn>
  void for_column(int j, Fn&& fn) const {
    if (j >= n_) {
      fn(j - n_, -1.0);
      return;
    }
    for (std::size_t k = lp_.col_start_[j]; k < lp_.col_start_[j + 1]; ++k) fn(lp_.row_index_[k], lp_.value_[k]);
  }

  LpSolution without_rows() {
    LpSolution out;
    out.status = LpStatus::Optimal;
    out.values.assign(n_, 0.0);
    out.objective = lp_.constant_;
    for (int j = 0; j < n_; ++j) {
      const double c = cost(j);
      double v;
      if (c > 0.0) v = lower_[j];
      else if (c < 0.0) v = upper_[j];
      else v = std::isfinite(lower_[j]) ? lower_[j] : (std::isfinite(upper_[j]) ? upper_[j] : 0.0);
      if (!std::isfinite(v)) {
        out.status = LpStatus::Unbounded;
        v = 0.0;
      }
      out.values[j] = v;
      out.objective += c * lp_.cost_scale_ * v;
    }
    return out;
  }

  void set_nonbasic(int j, std::int8_t preferred) {
    const bool lo = std::isfinite(lower_[j]);
    const bool up = std::isfinite(upper_[j]);
    std::int8_t s = preferred;
    if (s == kAtUpper && !up) s = lo ? kAtLower : kFree;
    if (s == kAtLower && !lo) s = up ? kAtUpper : kFree;
    if (s == kFree && (lo || up)) s = lo ? kAtLower : kAtUpper;
    status_[j] = s;
    x_[j] = s == kAtLower ? lower_[j] : s == kAtUpper ? upper_[j] : 0.0;
  }

  bool place_nonbasics() {
    int basics = 0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == kBasic) ++basics;
      else set_nonbasic(j, status_[j]);
    }
    if (basics != m_) return false;
    for (int j : head_) {
      if (j < 0 || j >= n_ + m_ || status_[j] != kBasic) return false;
    }
    return true;
  }

  void slack_start() {
    head_.resize(m_);
    for (int j = 0; j < n_; ++j) set_nonbasic(j, kAtLower);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = kBasic;
    }
    factor();
  }

  bool factor() {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(m_) * 2);
    for (int i = 0; i < m_; ++i) for_column(head_[i], [&](int r, double v) { t.emplace_back(r, i, v); });
    SparseMat b(m_, m_);
    b.setFromTriplets(t.begin(), t.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    etas_.clear();
    return lu_.info() == Eigen::Success;
  }

  // B^{-1} v, in place.
  void ftran(Eigen::VectorXd& v) {
    v = lu_.solve(v).eval();
    for (const Eta& e : etas_) {
      const double zr = v[e.r] / e.pivot;
      v[e.r] = zr;
      if (zr != 0.0) {
        for (auto [i, a] : e.col) v[i] -= a * zr;
      }
    }
  }

  // B^{-T} v, in place.
  void btran(Eigen::VectorXd& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->r];
      for (auto [i, a] : it->col) s -= a * v[i];
      v[it->r] = s / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
  }

  void compute_basics() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == kBasic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](int r, double v) { rhs[r] -= v * xj; });
    }
    ftran(rhs);
    for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
  }

  LpStatus iterate(long& iterations) {
    const auto& tol = lp_.tol_;
    const double ftol = tol.feasibility;
    int since_refactor = 0;
    int degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd y(m_), alpha(m_);

    for (;;) {
      if (iterations >= tol.max_iterations) return LpStatus::IterationLimit;

      bool phase_one = false;
      for (int i = 0; i < m_; ++i) {
        const int j = head_[i];
        if (x_[j] < lower_[j] - ftol || x_[j] > upper_[j] + ftol) {
          phase_one = true;
          break;
        }
      }
      for (int i = 0; i < m_; ++i) {
        const int j = head_[i];
        if (phase_one) y[i] = x_[j] < lower_[j] - ftol ? -1.0 : (x_[j] > upper_[j] + ftol ? 1.0 : 0.0);
        else y[i] = cost(j);
      }
      btran(y);

      // Pricing.
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        const std::int8_t s = status_[j];
        if (s == kBasic || lower_[j] == upper_[j]) continue;
        double d = phase_one ? 0.0 : cost(j);
        for_column(j, [&](int r, double v) { d -= y[r] * v; });
        int jd = 0;
        if (s == kAtLower && d < -tol.optimality) jd = 1;
        else if (s == kAtUpper && d > tol.optimality) jd = -1;
        else if (s == kFree && std::abs(d) > tol.optimality) jd = d < 0 ? 1 : -1;
        if (jd == 0) continue;
        if (bland) {
          q = j;
          dir = jd;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = jd;
        }
      }
      if (q < 0) {
        // Confirm on a fresh factorisation before declaring the result.
        if (since_refactor > 0) {
          if (!factor()) slack_start();
          compute_basics();
          since_refactor = 0;
          continue;
        }
        return phase_one ? LpStatus::Infeasible : LpStatus::Optimal;
      }

      alpha.setZero();
      for_column(q, [&](int r, double v) { alpha[r] = v; });
      ftran(alpha);

      // Ratio test. Basic i moves at rate -dir * alpha_i per unit step.
      const double range = upper_[q] - lower_[q];
      auto limit = [&](int i, double slack) -> std::pair<double, double> {
        // Returns (step to reach the blocking bound, bound value); step < 0 if none.
        const int j = head_[i];
        const double rate = -dir * alpha[i];
        const double v = x_[j];
        if (rate < 0.0) {
          if (v > upper_[j] + ftol) return {(v - upper_[j] + slack) / -rate, upper_[j]};
          if (v < lower_[j] - ftol || !std::isfinite(lower_[j])) return {-1.0, 0.0};
          return {(std::max(0.0, v - lower_[j]) + slack) / -rate, lower_[j]};
        }
        if (v < lower_[j] - ftol) return {(lower_[j] - v + slack) / rate, lower_[j]};
        if (v > upper_[j] + ftol || !std::isfinite(upper_[j])) return {-1.0, 0.0};
        return {(std::max(0.0, upper_[j] - v) + slack) / rate, upper_[j]};
      };

      int leave = -1;
      double theta = kInfinity;
      double leave_bound = 0.0;
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= tol.pivot) continue;
          auto [step, bound] = limit(i, 0.0);
          if (step < 0.0) continue;
          if (step < theta - 1e-12 || (step <= theta + 1e-12 && leave >= 0 && head_[i] < head_[leave])) {
            theta = step;
            leave = i;
            leave_bound = bound;
          }
        }
      } else {
        // Harris: find the largest step allowed with bounds relaxed by ftol,
        // then take the most stable pivot among rows blocking before it.
        double relaxed = kInfinity;
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= tol.pivot) continue;
          auto [step, bound] = limit(i, ftol);
          if (step >= 0.0) relaxed = std::min(relaxed, step);
        }
        if (std::isfinite(relaxed)) {
          double best_pivot = 0.0;
          for (int i = 0; i < m_; ++i) {
            if (std::abs(alpha[i]) <= tol.pivot) continue;
            auto [step, bound] = limit(i, 0.0);
            if (step < 0.0 || step > relaxed) continue;
            if (std::abs(alpha[i]) > best_pivot) {
              best_pivot = std::abs(alpha[i]);
              theta = step;
              leave = i;
              leave_bound = bound;
            }
          }
        }
      }

      const bool flip = std::isfinite(range) && range <= theta;
      if (flip) theta = range;
      if (!std::isfinite(theta)) return LpStatus::Unbounded;

      x_[q] += dir * theta;
      if (theta != 0.0) {
        for (int i = 0; i < m_; ++i) {
          if (alpha[i] != 0.0) x_[head_[i]] -= dir * theta * alpha[i];
        }
      }
      if (flip) {
        status_[q] = dir > 0 ? kAtUpper : kAtLower;
        x_[q] = dir > 0 ? upper_[q] : lower_[q];
      } else {
        const int out = head_[leave];
        x_[out] = leave_bound;
        status_[out] = leave_bound == lower_[out] ? kAtLower : kAtUpper;
        status_[q] = kBasic;
        head_[leave] = q;
        Eta e;
        e.r = leave;
        e.pivot = alpha[leave];
        for (int i = 0; i < m_; ++i) {
          if (i != leave && std::abs(alpha[i]) > 1e-14) e.col.emplace_back(i, alpha[i]);
        }
        etas_.push_back(std::move(e));
        if (++since_refactor >= tol.refactor_interval) {
          if (!factor()) slack_start();
          compute_basics();
          since_refactor = 0;
        }
      }
      if (flip) ++since_refactor;

      if (theta <= 1e-12) {
        if (++degenerate_run >= tol.degenerate_pivots_before_bland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      ++iterations;
    }
  }

  const LpSolver& lp_;
  int n_;
  int m_;
  std::vector<double> lower_, upper_, x_;
  std::vector<std::int8_t> status_;
  std::vector<int> head_;
  Lu lu_;
  std::vector<Eta> etas_;
};

LpSolution LpSolver::solve() const { return solve(col_lower_, col_upper_, nullptr); }

LpSolution LpSolver::solve(const std::vector<double>& lower, const std::vector<double>& upper,
                           const LpBasis* warm) const {
  SimplexRun run(*this, lower, upper);
  return run.run(warm);
}

LpSolution solve_lp(const SparseMip& mip, const LpTolerances& tol) { return LpSolver(mip, tol).solve(); }

}  // namespace bebplan
