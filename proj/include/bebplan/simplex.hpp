#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bebplan/sparse_mip.hpp"

namespace bebplan {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus s);

struct LpTolerances {
  double feasibility = 1e-7;
  // Applied to reduced costs after the objective is scaled by max |c_j|.
  double optimality = 1e-9;
  double pivot = 1e-9;
  int degenerate_pivots_before_bland = 1000;
  int refactor_interval = 64;
  long max_iterations = 1000000;
};

// Basis snapshot used to warm-start a related LP (same matrix, other bounds).
struct LpBasis {
  std::vector<std::int8_t> status;  // per structural and logical variable
  std::vector<int> head;            // basic variable per row position
  bool empty() const { return head.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // structural columns
  double objective = 0.0;      // includes the objective constant
  long iterations = 0;
  LpBasis basis;
};

// Bounded-variable primal simplex on  min c'x  s.t.  Ax - r = 0,  row bounds
// on r, column bounds on x. The basis is kept as a sparse LU factorisation
// with product-form updates between refactorisations. Phase one minimises the
// sum of bound violations of the basic variables. Dantzig pricing, switching
// to Bland's rule after a run of degenerate pivots.
//
// The solver is immutable after construction; solve() may run concurrently.
class LpSolver {
 public:
  explicit LpSolver(const SparseMip& mip, LpTolerances tol = {});

  LpSolution solve() const;
  // Column bounds replace the model's; `warm` may come from any earlier solve
  // of the same model.
  LpSolution solve(const std::vector<double>& lower, const std::vector<double>& upper,
                   const LpBasis* warm = nullptr) const;

  const LpTolerances& tolerances() const { return tol_; }
  std::size_t columns() const { return cost_.size(); }
  std::size_t rows() const { return row_lower_.size(); }

 private:
  friend class SimplexRun;

  LpTolerances tol_;
  std::vector<double> cost_;  // scaled
  double cost_scale_ = 1.0;
  double constant_ = 0.0;
  std::vector<double> col_lower_, col_upper_;
  std::vector<double> row_lower_, row_upper_;
  // Column-major matrix.
  std::vector<std::size_t> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
};

// Convenience: LP relaxation of the whole model with its own bounds.
LpSolution solve_lp(const SparseMip& mip, const LpTolerances& tol = {});

}  // namespace bebplan
