#pragma once

#include "gridshare/lp/problem.hpp"

#include <chrono>
#include <optional>
#include <vector>

namespace gridshare::lp::detail {

using Clock = std::chrono::steady_clock;

/// Final column states (structurals then row slacks) of a solved
/// relaxation; lets a child node restart from its parent's basis.
struct WarmBasis {
  std::vector<unsigned char> state;
};

struct RelaxationResult {
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective = 0.0;  // in the problem's own sense
  std::optional<std::size_t> infeasible_row;
  std::size_t iterations = 0;
  WarmBasis basis;
};

enum class Pricing { Dantzig, Bland };

/// Solves the continuous relaxation of `problem` with its variable bounds
/// replaced by `bounds`. Deterministic for a given input.
///
/// With `warm`, the solve starts from that basis and runs the dual simplex
/// (bounds changed, costs did not); it silently falls back to a cold start
/// when the basis is unusable.
RelaxationResult solve_relaxation(const LinearProblem& problem, const std::vector<Bounds>& bounds,
                                  Clock::time_point deadline, Pricing pricing = Pricing::Dantzig,
                                  const WarmBasis* warm = nullptr);

} // namespace gridshare::lp::detail
