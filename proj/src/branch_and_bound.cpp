#include "bebplan/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <memory>

#include "bebplan/error.hpp"

namespace bebplan {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInfinity;
  std::vector<BoundChange> changes;  // along the path from the root
  std::shared_ptr<const LpBasis> basis;
};

class Search {
 public:
  Search(const SparseMip& mip, const SolveLimits& limits, const SolverTolerances& tol)
      : mip_(mip), limits_(limits), tol_(tol), lp_(mip, tol.lp) {
    for (const auto& c : mip.columns) {
      root_lower_.push_back(c.lower);
      root_upper_.push_back(c.upper);
    }
  }

  SolveReport run(const std::vector<double>* start) {
    const auto t0 = std::chrono::steady_clock::now();
    report_.limits = limits_;
    report_.tolerances = tol_;
    if (start) try_start(*start);

    Node root;
    root.id = next_id_++;
    const LpSolution root_lp = evaluate(root);
    report_.lp_iterations += root_lp.iterations;
    report_.nodes = 1;
    if (root_lp.status == LpStatus::Infeasible) {
      report_.status = SolveStatus::Infeasible;
      return finish(t0, -kInfinity);
    }
    if (root_lp.status == LpStatus::Unbounded) {
      report_.status = SolveStatus::Unbounded;
      return finish(t0, -kInfinity);
    }
    report_.root_bound = root_lp.objective;
    handle(root, root_lp);

    SolveStatus stop = SolveStatus::Optimal;
    while (!open_.empty()) {
      if (report_.has_incumbent && gap_of(global_bound()) <= limits_.gap) break;
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (elapsed >= limits_.time_limit_s) {
        stop = SolveStatus::TimeLimit;
        break;
      }
      if (report_.nodes >= limits_.node_limit) {
        stop = SolveStatus::NodeLimit;
        break;
      }
      std::vector<Node> batch = take_batch();
      std::vector<LpSolution> results = evaluate_batch(batch);
      for (std::size_t b = 0; b < batch.size(); ++b) {
        ++report_.nodes;
        report_.lp_iterations += results[b].iterations;
        handle(batch[b], results[b]);
      }
    }

    if (!report_.has_incumbent) {
      if (stop == SolveStatus::Optimal && unresolved_ == kInfinity) {
        report_.status = SolveStatus::Infeasible;
        return finish(t0, -kInfinity);
      }
      throw Error(ErrorCode::NoFeasibleSolutionFound,
                  "search stopped (" + to_string(stop) + ") before an integer solution was found");
    }
    report_.status = stop;
    return finish(t0, global_bound());
  }

 private:
  double gap_of(double bound) const {
    const double inc = report_.objective;
    return std::max(0.0, (inc - bound) / std::max(1.0, std::abs(inc)));
  }

  bool prunable(double bound) const { return report_.has_incumbent && gap_of(bound) <= limits_.gap; }

  double global_bound() const {
    double b = unresolved_;
    for (const auto& n : open_) b = std::min(b, n.bound);
    if (report_.has_incumbent) b = std::min(b, report_.objective);
    return b;
  }

  SolveReport finish(std::chrono::steady_clock::time_point t0, double bound) {
    report_.bound = bound;
    report_.gap = report_.has_incumbent ? gap_of(bound) : 0.0;
    report_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report_;
  }

  bool feasible(const std::vector<double>& x) const {
    if (x.size() != mip_.columns.size()) return false;
    const double eps = 1e-6;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Column& c = mip_.columns[j];
      if (x[j] < c.lower - eps || x[j] > c.upper + eps) return false;
      if (c.is_integer && std::abs(x[j] - std::round(x[j])) > eps) return false;
    }
    const auto act = mip_.row_activities(x);
    for (std::size_t i = 0; i < act.size(); ++i) {
      const Row& r = mip_.rows[i];
      if (r.sense != Sense::GreaterEqual && act[i] > r.rhs + eps) return false;
      if (r.sense != Sense::LessEqual && act[i] < r.rhs - eps) return false;
    }
    return true;
  }

  void offer(const std::vector<double>& x) {
    const double z = mip_.objective_value(x);
    if (!report_.has_incumbent || z < report_.objective) {
      report_.has_incumbent = true;
      report_.objective = z;
      report_.values = x;
    }
  }

  void try_start(const std::vector<double>& x) {
    if (feasible(x)) offer(x);
  }

  void bounds_for(const Node& node, std::vector<double>& lo, std::vector<double>& up) const {
    lo = root_lower_;
    up = root_upper_;
    for (const auto& c : node.changes) {
      lo[c.col] = c.lower;
      up[c.col] = c.upper;
    }
  }

  LpSolution evaluate(const Node& node) const {
    std::vector<double> lo, up;
    bounds_for(node, lo, up);
    return lp_.solve(lo, up, node.basis.get());
  }

  std::vector<LpSolution> evaluate_batch(const std::vector<Node>& batch) const {
    std::vector<LpSolution> out(batch.size());
    const int workers = std::max(1, std::min<int>(limits_.threads, static_cast<int>(batch.size())));
    if (workers == 1) {
      for (std::size_t b = 0; b < batch.size(); ++b) out[b] = evaluate(batch[b]);
      return out;
    }
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t b = w; b < batch.size(); b += workers) out[b] = evaluate(batch[b]);
      }));
    }
    for (auto& j : jobs) j.get();
    return out;
  }

  std::vector<Node> take_batch() {
    // Drop nodes the incumbent has made redundant.
    open_.erase(std::remove_if(open_.begin(), open_.end(), [&](const Node& n) { return prunable(n.bound); }),
                open_.end());
    auto order = [&](const Node& a, const Node& b) {
      if (!report_.has_incumbent) {
        return a.id > b.id;  // depth first: newest node first
      }
      return a.bound != b.bound ? a.bound < b.bound : a.id < b.id;
    };
    const std::size_t take = std::min<std::size_t>(open_.size(), std::max(1, tol_.batch_size));
    std::partial_sort(open_.begin(), open_.begin() + static_cast<std::ptrdiff_t>(take), open_.end(), order);
    std::vector<Node> batch(std::make_move_iterator(open_.begin()),
                            std::make_move_iterator(open_.begin() + static_cast<std::ptrdiff_t>(take)));
    open_.erase(open_.begin(), open_.begin() + static_cast<std::ptrdiff_t>(take));
    return batch;
  }

  // Integer column to branch on, or -1 when the LP point is integral.
  int branching_column(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!mip_.columns[j].is_integer) continue;
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= tol_.integrality) continue;
      const bool better =
          best < 0 || dist > best_frac + 1e-12 ||
          (dist >= best_frac - 1e-12 &&
           std::abs(mip_.columns[j].objective) > std::abs(mip_.columns[static_cast<std::size_t>(best)].objective));
      if (better) {
        best = static_cast<int>(j);
        best_frac = dist;
      }
    }
    return best;
  }

  // Integer values from an LP point rounded exactly, continuous columns
  // re-optimised for them so rows hold without rounding slack.
  void polish(const Node& node, const LpSolution& lp) {
    std::vector<double> lo, up;
    bounds_for(node, lo, up);
    std::vector<double> fixed = lp.values;
    for (std::size_t j = 0; j < fixed.size(); ++j) {
      if (!mip_.columns[j].is_integer) continue;
      fixed[j] = std::round(fixed[j]);
      lo[j] = up[j] = fixed[j];
    }
    const LpSolution again = lp_.solve(lo, up, &lp.basis);
    report_.lp_iterations += again.iterations;
    if (again.status != LpStatus::Optimal) return;
    std::vector<double> x = again.values;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (mip_.columns[j].is_integer) x[j] = fixed[j];
    }
    if (feasible(x)) offer(x);
  }

  void handle(const Node& node, const LpSolution& lp) {
    switch (lp.status) {
      case LpStatus::Infeasible:
        return;
      case LpStatus::Unbounded:
      case LpStatus::IterationLimit:
        // Unresolved subtree: keep its bound so the reported gap stays valid.
        unresolved_ = std::min(unresolved_, node.bound);
        return;
      case LpStatus::Optimal:
        break;
    }
    if (prunable(lp.objective)) return;
    const int j = branching_column(lp.values);
    if (j < 0) {
      polish(node, lp);
      return;
    }
    const double v = lp.values[static_cast<std::size_t>(j)];
    auto basis = std::make_shared<const LpBasis>(lp.basis);
    auto child = [&](double lo, double up) {
      Node c;
      c.id = next_id_++;
      c.depth = node.depth + 1;
      c.bound = lp.objective;
      c.changes = node.changes;
      c.changes.push_back({j, lo, up});
      c.basis = basis;
      open_.push_back(std::move(c));
    };
    std::vector<double> lo, up;
    bounds_for(node, lo, up);
    const double down_up = std::floor(v);
    const double up_lo = std::ceil(v);
    // The side v rounds to is created last and so explored first in a dive.
    if (v - down_up >= 0.5) {
      child(lo[j], down_up);
      child(up_lo, up[j]);
    } else {
      child(up_lo, up[j]);
      child(lo[j], down_up);
    }
  }

  const SparseMip& mip_;
  SolveLimits limits_;
  SolverTolerances tol_;
  LpSolver lp_;
  std::vector<double> root_lower_, root_upper_;
  std::vector<Node> open_;
  long next_id_ = 0;
  double unresolved_ = kInfinity;
  SolveReport report_;
};

}  // namespace

SolveReport solve_mip(const SparseMip& mip, const SolveLimits& limits, const std::vector<double>* start,
                      const SolverTolerances& tolerances) {
  return Search(mip, limits, tolerances).run(start);
}

nlohmann::json report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["has_incumbent"] = r.has_incumbent;
  j["objective"] = r.objective;
  j["bound"] = r.bound;
  j["gap"] = r.gap;
  j["root_bound"] = r.root_bound;
  j["nodes"] = r.nodes;
  j["lp_iterations"] = r.lp_iterations;
  j["wall_time_s"] = r.wall_time_s;
  j["limits"] = {{"time_limit_s", r.limits.time_limit_s},
                 {"node_limit", r.limits.node_limit},
                 {"gap", r.limits.gap},
                 {"threads", r.limits.threads}};
  j["tolerances"] = {{"feasibility", r.tolerances.lp.feasibility},
                     {"optimality", r.tolerances.lp.optimality},
                     {"pivot", r.tolerances.lp.pivot},
                     {"integrality", r.tolerances.integrality},
                     {"degenerate_pivots_before_bland", r.tolerances.lp.degenerate_pivots_before_bland},
                     {"batch_size", r.tolerances.batch_size}};
  return j;
}

}  // namespace bebplan
