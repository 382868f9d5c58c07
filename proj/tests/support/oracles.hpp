#pragma once

// Brute-force reference implementations used only by the tests. None of
// them share code with the library beyond its plain data types.

#include "gridshare/dispatch.hpp"
#include "gridshare/lp/problem.hpp"
#include "gridshare/scenario.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Best objective (in the problem's own sense) over all basic feasible
/// solutions of the continuous problem, with `fixed[j]` substituted where
/// set. Requires finite bounds on every free variable. nullopt when no
/// vertex is feasible.
std::optional<double> lp_by_vertices(const gridshare::lp::LinearProblem& problem,
                                     const std::vector<std::optional<double>>& fixed = {});

/// Tries every 0/1 assignment of the binaries and solves the rest with
/// lp_by_vertices.
std::optional<double> milp_by_enumeration(const gridshare::lp::LinearProblem& problem);

/// Shapley value as the average marginal contribution over all n! join
/// orders. v is indexed by bitmask.
std::vector<double> shapley_by_permutations(const std::vector<double>& v, std::size_t n);

/// Independent re-check of a schedule against the operating rules. Each
/// entry describes one violation larger than `tol`.
std::vector<std::string> physics_violations(const gridshare::DispatchSchedule& schedule,
                                            const gridshare::Scenario& scenario,
                                            bool exclusive_modes, double tol = 1e-6);

struct Costs {
  double energy = 0.0;
  double peak = 0.0;
  double wear = 0.0;
};

/// Direct cost arithmetic on a schedule.
Costs costs_of(const gridshare::DispatchSchedule& schedule, const gridshare::Scenario& scenario);

/// Random bounded LP (box bounds on every variable) that has a feasible
/// point by construction.
gridshare::lp::LinearProblem random_lp(std::mt19937_64& rng, std::size_t max_vars,
                                       std::size_t max_rows);

/// Random problem with up to `max_binaries` binaries and `max_continuous`
/// boxed continuous variables, feasible by construction.
gridshare::lp::LinearProblem random_milp(std::mt19937_64& rng, std::size_t max_continuous,
                                         std::size_t max_binaries, std::size_t max_rows);

/// Small scenario with random loads, solar and batteries.
gridshare::Scenario random_scenario(std::mt19937_64& rng, std::size_t participants,
                                    std::size_t solar_units, std::size_t batteries,
                                    std::size_t periods);

/// A schedule with arbitrary non-negative values of the right shape; it
/// does not satisfy any operating rule.
gridshare::DispatchSchedule random_schedule(std::mt19937_64& rng,
                                            const gridshare::Scenario& scenario);

} // namespace oracle
