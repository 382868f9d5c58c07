#pragma once

#include "gridshare/lp/problem.hpp"

#include <string>
#include <string_view>

namespace gridshare::lp {

/// Continuous LP by bounded-variable revised simplex. Binary flags are
/// ignored (their [0,1] bounds are kept).
Solution solve_lp(const LinearProblem& problem, const SolveOptions& options = {});

/// Best-first branch-and-bound over the binary variables; falls through to
/// solve_lp when there are none.
Solution solve_milp(const LinearProblem& problem, const SolveOptions& options = {});

/// Entry point shared by the bundled engine and any external backend.
class Solver {
public:
  virtual ~Solver() = default;
  virtual Solution solve(const LinearProblem& problem, const SolveOptions& options) const = 0;
  virtual std::string_view name() const = 0;
};

class BundledSolver final : public Solver {
public:
  Solution solve(const LinearProblem& problem, const SolveOptions& options) const override {
    return solve_milp(problem, options);
  }
  std::string_view name() const override { return "bundled-simplex-bnb"; }
};

const Solver& default_solver();

/// CPLEX-style LP text, for cross-checking against external solvers.
std::string to_lp_format(const LinearProblem& problem);

} // namespace gridshare::lp
