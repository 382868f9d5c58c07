#include "gridshare/lp/problem.hpp"

#include <cmath>
#include <sstream>

namespace gridshare::lp {

std::size_t LinearProblem::add_variable(std::string name, double cost, Bounds bounds,
                                        bool binary) {
  objective_.push_back(cost);
  bounds_.push_back(bounds);
  names_.push_back(std::move(name));
  binary_.push_back(binary);
  return objective_.size() - 1;
}

std::size_t LinearProblem::add_constraint(std::vector<Term> terms, Relation relation,
                                          double rhs, std::string name) {
  if (name.empty()) name = "c" + std::to_string(constraints_.size());
  constraints_.push_back(Constraint{std::move(terms), relation, rhs, std::move(name)});
  return constraints_.size() - 1;
}

std::vector<std::size_t> LinearProblem::binaries() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < binary_.size(); ++j)
    if (binary_[j]) out.push_back(j);
  return out;
}

void LinearProblem::check() const {
  const std::size_t n = variable_count();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = bounds_[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper ||
        b.lower == kInfinity || b.upper == -kInfinity) {
      std::ostringstream msg;
      msg << "variable " << j << " (" << names_[j] << ") has invalid bounds [" << b.lower
          << ", " << b.upper << "]";
      throw MalformedProblem(std::nullopt, msg.str());
    }
    if (binary_[j] && (b.lower < 0.0 || b.upper > 1.0)) {
      throw MalformedProblem(std::nullopt, "binary variable " + std::to_string(j) + " (" +
                                               names_[j] + ") has bounds outside [0,1]");
    }
    if (!std::isfinite(objective_[j]))
      throw MalformedProblem(std::nullopt,
                             "objective coefficient of variable " + std::to_string(j) +
                                 " is not finite");
  }
  for (std::size_t r = 0; r < constraints_.size(); ++r) {
    const auto& row = constraints_[r];
    if (!std::isfinite(row.rhs))
      throw MalformedProblem(r, "row " + std::to_string(r) + " (" + row.name +
                                    ") has a non-finite right-hand side");
    for (const auto& term : row.terms) {
      if (term.index >= n)
        throw MalformedProblem(r, "row " + std::to_string(r) + " (" + row.name +
                                      ") references variable " + std::to_string(term.index) +
                                      " but only " + std::to_string(n) + " exist");
      if (!std::isfinite(term.coefficient))
        throw MalformedProblem(r, "row " + std::to_string(r) + " (" + row.name +
                                      ") has a non-finite coefficient");
    }
  }
}

double LinearProblem::evaluate_objective(const std::vector<double>& values) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) sum += objective_[j] * values[j];
  return sum;
}

double LinearProblem::row_activity(std::size_t row, const std::vector<double>& values) const {
  double sum = 0.0;
  for (const auto& term : constraints_[row].terms) sum += term.coefficient * values[term.index];
  return sum;
}

const char* to_string(Status status) {
  switch (status) {
  case Status::Optimal: return "optimal";
  case Status::FeasibleWithinGap: return "feasible-within-gap";
  case Status::Infeasible: return "infeasible";
  case Status::Unbounded: return "unbounded";
  case Status::TimeLimit: return "time-limit";
  }
  return "unknown";
}

std::vector<std::size_t> find_violations(const LinearProblem& problem,
                                         const std::vector<double>& values, double tolerance) {
  std::vector<std::size_t> out;
  const auto& rows = problem.constraints();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double activity = problem.row_activity(r, values);
    // Scale by the row's magnitude so large-coefficient rows are judged fairly.
    double scale = std::max(1.0, std::abs(rows[r].rhs));
    for (const auto& term : rows[r].terms)
      scale = std::max(scale, std::abs(term.coefficient * values[term.index]));
    const double tol = tolerance * scale;
    bool bad = false;
    switch (rows[r].relation) {
    case Relation::LessEqual: bad = activity > rows[r].rhs + tol; break;
    case Relation::GreaterEqual: bad = activity < rows[r].rhs - tol; break;
    case Relation::Equal: bad = std::abs(activity - rows[r].rhs) > tol; break;
    }
    if (bad) out.push_back(r);
  }
  for (std::size_t j = 0; j < problem.variable_count(); ++j) {
    const auto& b = problem.bounds()[j];
    const double v = values[j];
    bool bad = v < b.lower - tolerance || v > b.upper + tolerance || std::isnan(v);
    if (problem.is_binary(j) && std::abs(v - std::round(v)) > tolerance) bad = true;
    if (bad) out.push_back(rows.size() + j);
  }
  return out;
}

} // namespace gridshare::lp
