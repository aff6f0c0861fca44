#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bebplan/simplex.hpp"
#include "bebplan/sparse_mip.hpp"

namespace bebplan {

struct SolveLimits {
  double time_limit_s = 3600.0;
  long node_limit = 1000000;
  double gap = 1e-6;
  int threads = 1;
};

struct SolverTolerances {
  LpTolerances lp;
  double integrality = 1e-6;
  // Nodes are evaluated in batches of this size regardless of the thread
  // count, which keeps the search identical for any number of workers.
  int batch_size = 8;
};

enum class SolveStatus { Optimal, TimeLimit, NodeLimit, Infeasible, Unbounded };

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = 0.0;
  double bound = 0.0;
  // (objective - bound) / max(1, |objective|)
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double root_bound = 0.0;
  double wall_time_s = 0.0;
  SolveLimits limits;
  SolverTolerances tolerances;
};

// Best-bound branch and bound over LP relaxations: depth-first until the
// first incumbent, then lowest bound first (ties by node id). Branches on the
// most fractional integer column, ties by larger |objective coefficient| and
// then lower index.
//
// `start`, when given and feasible, seeds the incumbent. Throws
// NoFeasibleSolutionFound when a limit stops the search before any integer
// solution is known.
SolveReport solve_mip(const SparseMip& mip, const SolveLimits& limits = {}, const std::vector<double>* start = nullptr,
                      const SolverTolerances& tolerances = {});

nlohmann::json report_to_json(const SolveReport& report);

}  // namespace bebplan
