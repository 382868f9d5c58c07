#include "gridshare/lp/solver.hpp"

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>

namespace gridshare::lp {
namespace {

using detail::Clock;

void check_options(const SolveOptions& options) {
  if (!(options.time_limit_seconds > 0.0))
    throw Error("solve options: time_limit_seconds must be > 0");
  if (!(options.gap_tolerance >= 0.0)) throw Error("solve options: gap_tolerance must be >= 0");
  if (!(options.feasibility_tolerance > 0.0))
    throw Error("solve options: feasibility_tolerance must be > 0");
}

Clock::time_point deadline_for(const SolveOptions& options) {
  const auto budget = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(std::min(options.time_limit_seconds, 1e7)));
  return Clock::now() + budget;
}

bool rows_and_bounds_hold(const LinearProblem& problem, const std::vector<Bounds>& bounds,
                          const std::vector<double>& values, double tolerance) {
  const auto bad = find_violations(problem, values, tolerance);
  const std::size_t m = problem.constraint_count();
  for (std::size_t v : bad) {
    if (v < m) return false;
    const std::size_t j = v - m;
    const double x = values[j];
    if (x < bounds[j].lower - tolerance || x > bounds[j].upper + tolerance) return false;
    // Integrality is judged by the caller.
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < bounds[j].lower - tolerance || values[j] > bounds[j].upper + tolerance)
      return false;
  }
  return true;
}

/// Solves a relaxation and re-checks the answer against the original rows.
/// A failed check is retried once with Bland pricing, which takes a
/// different pivot path from a cold start.
detail::RelaxationResult checked_relaxation(const LinearProblem& problem,
                                            const std::vector<Bounds>& bounds,
                                            Clock::time_point deadline, double tolerance,
                                            const detail::WarmBasis* warm = nullptr) {
  auto result = detail::solve_relaxation(problem, bounds, deadline, detail::Pricing::Dantzig, warm);
  if (result.status != Status::Optimal ||
      rows_and_bounds_hold(problem, bounds, result.values, tolerance))
    return result;
  const std::size_t spent = result.iterations;
  result = detail::solve_relaxation(problem, bounds, deadline, detail::Pricing::Bland);
  result.iterations += spent;
  if (result.status == Status::Optimal &&
      !rows_and_bounds_hold(problem, bounds, result.values, tolerance))
    throw Error("simplex: optimal basis failed the independent feasibility re-check");
  return result;
}

double relative_gap(double incumbent, double bound) {
  const double diff = std::max(0.0, incumbent - bound);
  if (diff <= 1e-12) return 0.0;
  return diff / std::max(std::abs(incumbent), 1e-10);
}

struct Node {
  double bound;
  std::size_t sequence;
  std::vector<signed char> fixes;  // per binary: -1 free, 0, 1
  std::shared_ptr<const detail::WarmBasis> warm;  // parent's final basis
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.sequence > b.sequence;
  }
};

class BranchAndBound {
public:
  BranchAndBound(const LinearProblem& problem, const SolveOptions& options)
      : problem_(problem), options_(options), binaries_(problem.binaries()),
        deadline_(deadline_for(options)),
        sign_(problem.sense() == Sense::Maximize ? -1.0 : 1.0) {
    rows_of_.resize(problem.variable_count());
    const auto& rows = problem.constraints();
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& t : rows[r].terms) rows_of_[t.index].push_back(r);
  }

  Solution run() {
    Solution out;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::size_t sequence = 0;
    open.push(Node{-kInfinity, sequence++, std::vector<signed char>(binaries_.size(), -1), nullptr});
    bool timed_out = false;
    bool root = true;

    while (!open.empty()) {
      const double best_bound = open.top().bound;
      if (has_incumbent_ && relative_gap(incumbent_obj_, best_bound) <= options_.gap_tolerance)
        break;
      if (Clock::now() > deadline_) {
        timed_out = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (has_incumbent_ && node.bound >= incumbent_obj_) continue;

      const auto bounds = bounds_for(node.fixes);
      auto relaxation = checked_relaxation(problem_, bounds, deadline_,
                                           options_.feasibility_tolerance, node.warm.get());
      out.iterations += relaxation.iterations;
      ++out.nodes;
      if (relaxation.status == Status::TimeLimit) {
        timed_out = true;
        break;
      }
      if (relaxation.status == Status::Unbounded) {
        if (root) {
          out.status = Status::Unbounded;
          return out;
        }
        continue;
      }
      if (relaxation.status == Status::Infeasible) {
        if (root) {
          out.status = Status::Infeasible;
          out.infeasible_row = relaxation.infeasible_row;
          return out;
        }
        continue;
      }
      const double value = sign_ * relaxation.objective;
      if (has_incumbent_ && value >= incumbent_obj_ - 1e-12 * std::max(1.0, std::abs(value)))
        continue;

      const auto branch = most_fractional(relaxation.values);
      if (!branch) {
        offer_incumbent(relaxation.values);
        continue;
      }
      auto basis = std::make_shared<const detail::WarmBasis>(std::move(relaxation.basis));
      try_rounding(relaxation.values);
      if (root) fix_and_resolve(relaxation.values, *basis);
      root = false;

      for (signed char side : {0, 1}) {
        Node child{value, sequence++, node.fixes, basis};
        child.fixes[*branch] = side;
        open.push(std::move(child));
      }
    }

    if (!has_incumbent_) {
      out.status = timed_out ? Status::TimeLimit : Status::Infeasible;
      return out;
    }
    const double best_bound = open.empty() ? incumbent_obj_ : std::min(open.top().bound, incumbent_obj_);
    const double gap = relative_gap(incumbent_obj_, best_bound);
    out.values = incumbent_;
    out.objective_value = problem_.evaluate_objective(incumbent_);
    out.achieved_gap = gap;
    if (timed_out && gap > options_.gap_tolerance)
      out.status = Status::TimeLimit;
    else
      out.status = gap <= 1e-9 ? Status::Optimal : Status::FeasibleWithinGap;
    return out;
  }

private:
  std::vector<Bounds> bounds_for(const std::vector<signed char>& fixes) const {
    auto bounds = problem_.bounds();
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      if (fixes[b] < 0) continue;
      const double v = fixes[b];
      bounds[binaries_[b]] = Bounds{v, v};
    }
    return bounds;
  }

  /// Position in `binaries_` of the most fractional binary; ties go to the
  /// lowest index.
  std::optional<std::size_t> most_fractional(const std::vector<double>& x) const {
    std::optional<std::size_t> pick;
    double best = options_.feasibility_tolerance;
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const double v = x[binaries_[b]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best) {
        best = frac;
        pick = b;
      }
    }
    return pick;
  }

  void offer_incumbent(std::vector<double> x) {
    for (std::size_t j : binaries_) x[j] = std::round(x[j]);
    if (!find_violations(problem_, x, options_.feasibility_tolerance).empty()) return;
    const double value = sign_ * problem_.evaluate_objective(x);
    if (!has_incumbent_ || value < incumbent_obj_) {
      has_incumbent_ = true;
      incumbent_obj_ = value;
      incumbent_ = std::move(x);
    }
  }

  bool row_holds(std::size_t r, const std::vector<double>& x) const {
    const auto& row = problem_.constraints()[r];
    const double activity = problem_.row_activity(r, x);
    const double tol = options_.feasibility_tolerance * std::max(1.0, std::abs(row.rhs));
    switch (row.relation) {
    case Relation::LessEqual: return activity <= row.rhs + tol;
    case Relation::GreaterEqual: return activity >= row.rhs - tol;
    case Relation::Equal: return std::abs(activity - row.rhs) <= tol;
    }
    return false;
  }

  /// Rounds fractional binaries one at a time, keeping every touched row
  /// satisfied with the continuous part held fixed.
  void try_rounding(std::vector<double> x) {
    for (std::size_t j : binaries_) {
      const double v = x[j];
      if (std::abs(v - std::round(v)) <= options_.feasibility_tolerance) {
        x[j] = std::round(v);
        continue;
      }
      const double near = std::round(v);
      bool placed = false;
      for (double candidate : {near, 1.0 - near}) {
        x[j] = candidate;
        bool ok = true;
        for (std::size_t r : rows_of_[j]) {
          if (!row_holds(r, x)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          placed = true;
          break;
        }
      }
      if (!placed) return;
    }
    offer_incumbent(std::move(x));
  }

  /// Fixes every binary at its rounded value and re-solves the continuous
  /// part.
  void fix_and_resolve(const std::vector<double>& x, const detail::WarmBasis& warm) {
    std::vector<signed char> fixes(binaries_.size());
    for (std::size_t b = 0; b < binaries_.size(); ++b)
      fixes[b] = static_cast<signed char>(x[binaries_[b]] >= 0.5 ? 1 : 0);
    const auto relaxation = checked_relaxation(problem_, bounds_for(fixes), deadline_,
                                               options_.feasibility_tolerance, &warm);
    if (relaxation.status == Status::Optimal) offer_incumbent(relaxation.values);
  }

  const LinearProblem& problem_;
  const SolveOptions& options_;
  std::vector<std::size_t> binaries_;
  Clock::time_point deadline_;
  double sign_;
  std::vector<std::vector<std::size_t>> rows_of_;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kInfinity;
  std::vector<double> incumbent_;
};

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

} // namespace

Solution solve_lp(const LinearProblem& problem, const SolveOptions& options) {
  check_options(options);
  problem.check();
  const auto relaxation = checked_relaxation(problem, problem.bounds(), deadline_for(options),
                                             options.feasibility_tolerance);
  Solution out;
  out.status = relaxation.status;
  out.iterations = relaxation.iterations;
  out.infeasible_row = relaxation.infeasible_row;
  if (relaxation.status == Status::Optimal) {
    out.values = relaxation.values;
    out.objective_value = relaxation.objective;
    out.achieved_gap = 0.0;
  }
  return out;
}

Solution solve_milp(const LinearProblem& problem, const SolveOptions& options) {
  check_options(options);
  problem.check();
  if (problem.binaries().empty()) return solve_lp(problem, options);
  BranchAndBound search(problem, options);
  return search.run();
}

const Solver& default_solver() {
  static const BundledSolver solver;
  return solver;
}

std::string to_lp_format(const LinearProblem& problem) {
  std::ostringstream out;
  const auto& names = problem.names();
  auto var = [&](std::size_t j) {
    return names[j].empty() ? "x" + std::to_string(j) : names[j];
  };
  auto terms = [&](const std::vector<Term>& row) {
    std::ostringstream s;
    bool first = true;
    for (const auto& t : row) {
      if (t.coefficient == 0.0) continue;
      const double c = t.coefficient;
      if (first)
        s << (c < 0 ? "- " : "") << format_number(std::abs(c)) << ' ' << var(t.index);
      else
        s << (c < 0 ? " - " : " + ") << format_number(std::abs(c)) << ' ' << var(t.index);
      first = false;
    }
    if (first) s << "0 " << (problem.variable_count() ? var(0) : "x0");
    return s.str();
  };

  out << (problem.sense() == Sense::Minimize ? "Minimize" : "Maximize") << "\n obj: ";
  std::vector<Term> objective;
  for (std::size_t j = 0; j < problem.variable_count(); ++j)
    if (problem.objective()[j] != 0.0) objective.push_back({j, problem.objective()[j]});
  out << terms(objective) << "\nSubject To\n";
  for (const auto& row : problem.constraints()) {
    const char* rel = row.relation == Relation::LessEqual      ? "<="
                      : row.relation == Relation::GreaterEqual ? ">="
                                                               : "=";
    out << ' ' << row.name << ": " << terms(row.terms) << ' ' << rel << ' '
        << format_number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < problem.variable_count(); ++j) {
    const auto& b = problem.bounds()[j];
    if (problem.is_binary(j)) continue;
    if (std::isinf(b.lower) && std::isinf(b.upper)) {
      out << ' ' << var(j) << " free\n";
    } else if (b.lower == b.upper) {
      out << ' ' << var(j) << " = " << format_number(b.lower) << '\n';
    } else {
      out << ' ' << (std::isinf(b.lower) ? "-inf" : format_number(b.lower)) << " <= " << var(j)
          << " <= " << (std::isinf(b.upper) ? "+inf" : format_number(b.upper)) << '\n';
    }
  }
  const auto bins = problem.binaries();
  if (!bins.empty()) {
    out << "Binaries\n";
    for (std::size_t j : bins) out << ' ' << var(j) << '\n';
  }
  out << "End\n";
  return out.str();
}

} // namespace gridshare::lp
