#pragma once

#include "gridshare/errors.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gridshare::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Minimize, Maximize };

struct Term {
  std::size_t index;
  double coefficient;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct Bounds {
  double lower = 0.0;
  double upper = kInfinity;
};

/// A linear program over `variable_count()` columns, optionally with
/// variables restricted to {0,1}.
class LinearProblem {
public:
  LinearProblem() = default;
  explicit LinearProblem(Sense sense) : sense_(sense) {}

  std::size_t add_variable(std::string name, double cost = 0.0, Bounds bounds = {},
                           bool binary = false);
  std::size_t add_binary(std::string name, double cost = 0.0) {
    return add_variable(std::move(name), cost, Bounds{0.0, 1.0}, true);
  }
  std::size_t add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                             std::string name = {});

  void set_cost(std::size_t index, double cost) { objective_.at(index) = cost; }
  void set_bounds(std::size_t index, Bounds bounds) { bounds_.at(index) = bounds; }

  Sense sense() const { return sense_; }
  std::size_t variable_count() const { return objective_.size(); }
  std::size_t constraint_count() const { return constraints_.size(); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool is_binary(std::size_t index) const { return binary_[index]; }
  std::vector<std::size_t> binaries() const;

  /// Throws MalformedProblem naming the first offending row or variable.
  void check() const;

  double evaluate_objective(const std::vector<double>& values) const;
  double row_activity(std::size_t row, const std::vector<double>& values) const;

private:
  Sense sense_ = Sense::Minimize;
  std::vector<double> objective_;
  std::vector<Bounds> bounds_;
  std::vector<std::string> names_;
  std::vector<bool> binary_;
  std::vector<Constraint> constraints_;
};

class MalformedProblem : public Error {
public:
  MalformedProblem(std::optional<std::size_t> row, const std::string& what)
      : Error(what), row_(row) {}
  /// Offending row, absent when the defect is in a variable's bounds.
  std::optional<std::size_t> row() const noexcept { return row_; }

private:
  std::optional<std::size_t> row_;
};

struct SolveOptions {
  double time_limit_seconds = 300.0;
  double gap_tolerance = 0.005;
  double feasibility_tolerance = 1e-6;
};

enum class Status { Optimal, FeasibleWithinGap, Infeasible, Unbounded, TimeLimit };

const char* to_string(Status status);

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::optional<double> achieved_gap;
  /// For Infeasible: first constraint still violated when phase one stalled.
  std::optional<std::size_t> infeasible_row;
  std::size_t iterations = 0;
  std::size_t nodes = 0;

  bool has_incumbent() const {
    return status == Status::Optimal || status == Status::FeasibleWithinGap ||
           (status == Status::TimeLimit && !values.empty());
  }
};

/// Rows (and, after them, variable bounds and integrality) violated by more
/// than `tolerance`. Bound and integrality failures are reported as
/// `constraint_count() + variable index`.
std::vector<std::size_t> find_violations(const LinearProblem& problem,
                                         const std::vector<double>& values, double tolerance);

} // namespace gridshare::lp
