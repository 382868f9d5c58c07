#include "gridshare/lp/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gridshare;
using namespace gridshare::lp;

namespace {

SolveOptions exact() {
  SolveOptions o;
  o.gap_tolerance = 0.0;
  return o;
}

} // namespace

TEST_SUITE("lp") {

TEST_CASE("single lower bound") {
  LinearProblem p;
  const auto x = p.add_variable("x", 1.0);
  p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 3.0, "floor");
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.values[x] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(s.objective_value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("two variables on a shared budget") {
  LinearProblem p;
  const auto x = p.add_variable("x", -1.0);
  const auto y = p.add_variable("y", -1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0, "cap");
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective_value == doctest::Approx(-1.0));
  CHECK(s.values[x] + s.values[y] == doctest::Approx(1.0));
  CHECK(s.values[x] >= -1e-9);
  CHECK(s.values[y] >= -1e-9);
}

TEST_CASE("two-item knapsack") {
  LinearProblem p(Sense::Maximize);
  const auto a = p.add_binary("a", 3.0);
  const auto b = p.add_binary("b", 2.0);
  p.add_constraint({{a, 1.0}, {b, 1.0}}, Relation::LessEqual, 1.0, "pick_one");
  const auto s = solve_milp(p, exact());
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.values[a] == doctest::Approx(1.0));
  CHECK(s.values[b] == doctest::Approx(0.0));
  CHECK(s.objective_value == doctest::Approx(3.0));
}

TEST_CASE("problems without binaries solve identically on both paths") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const auto p = oracle::random_lp(rng, 6, 5);
    const auto a = solve_lp(p);
    const auto b = solve_milp(p);
    REQUIRE(a.status == b.status);
    CHECK(a.values == b.values);
    CHECK(a.objective_value == b.objective_value);
  }
}

TEST_CASE("infeasible rows are reported") {
  LinearProblem p;
  const auto x = p.add_variable("x", 1.0, {0.0, 1.0});
  p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 2.0, "too_high");
  const auto s = solve_lp(p);
  CHECK(s.status == Status::Infeasible);
  REQUIRE(s.infeasible_row.has_value());
  CHECK(*s.infeasible_row == 0);
  CHECK_FALSE(s.has_incumbent());
}

TEST_CASE("unbounded direction is detected") {
  LinearProblem p;
  const auto x = p.add_variable("x", -1.0);
  const auto y = p.add_variable("y", 0.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 1.0, "slope");
  CHECK(solve_lp(p).status == Status::Unbounded);
}

TEST_CASE("malformed problems name the offending row") {
  LinearProblem p;
  const auto x = p.add_variable("x", 1.0);
  p.add_constraint({{x, 1.0}}, Relation::LessEqual, 1.0, "fine");
  p.add_constraint({{x, 1.0}, {7, 2.0}}, Relation::LessEqual, 1.0, "dangling");
  try {
    (void)solve_lp(p);
    FAIL("expected MalformedProblem");
  } catch (const MalformedProblem& e) {
    REQUIRE(e.row().has_value());
    CHECK(*e.row() == 1);
    CHECK(std::string(e.what()).find("dangling") != std::string::npos);
  }

  LinearProblem q;
  q.add_variable("bad", 0.0, {2.0, 1.0});
  CHECK_THROWS_AS((void)solve_lp(q), MalformedProblem);

  LinearProblem r;
  const auto z = r.add_variable("z");
  r.add_constraint({{z, 1.0}}, Relation::LessEqual, std::nan(""), "nan_rhs");
  CHECK_THROWS_AS((void)solve_lp(r), MalformedProblem);
}

TEST_CASE("invalid options are rejected") {
  LinearProblem p;
  p.add_variable("x", 1.0);
  SolveOptions o;
  o.gap_tolerance = -1.0;
  CHECK_THROWS_AS((void)solve_lp(p, o), Error);
  o = {};
  o.time_limit_seconds = 0.0;
  CHECK_THROWS_AS((void)solve_lp(p, o), Error);
}

TEST_CASE("equality rows and free variables") {
  LinearProblem p;
  const auto x = p.add_variable("x", 1.0, {-kInfinity, kInfinity});
  const auto y = p.add_variable("y", 2.0, {0.0, 4.0});
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::Equal, 3.0, "sum");
  p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, -2.0, "x_floor");
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.values[x] == doctest::Approx(3.0));
  CHECK(s.values[y] == doctest::Approx(0.0));
}

TEST_CASE("degenerate cycling example terminates at the optimum") {
  // Beale's example: Dantzig's rule without anti-cycling loops forever.
  LinearProblem p;
  const auto x4 = p.add_variable("x4", -0.75);
  const auto x5 = p.add_variable("x5", 150.0);
  const auto x6 = p.add_variable("x6", -0.02);
  const auto x7 = p.add_variable("x7", 6.0);
  p.add_constraint({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, Relation::LessEqual, 0.0,
                   "r1");
  p.add_constraint({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, Relation::LessEqual, 0.0,
                   "r2");
  p.add_constraint({{x6, 1.0}}, Relation::LessEqual, 1.0, "r3");
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective_value == doctest::Approx(-0.05));
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 30; ++k) {
    CAPTURE(k);
    const auto p = oracle::random_lp(rng, 6, 8);
    const auto expected = oracle::lp_by_vertices(p);
    REQUIRE(expected.has_value());
    const auto s = solve_lp(p, exact());
    REQUIRE(s.status == Status::Optimal);
    CHECK(std::abs(s.objective_value - *expected) <= 1e-7 * std::max(1.0, std::abs(*expected)));
    CHECK(find_violations(p, s.values, 1e-7).empty());
  }
}

TEST_CASE("random MILPs match exhaustive enumeration") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 30; ++k) {
    CAPTURE(k);
    const auto p = oracle::random_milp(rng, 3, 8, 5);
    const auto expected = oracle::milp_by_enumeration(p);
    REQUIRE(expected.has_value());
    const auto s = solve_milp(p, exact());
    REQUIRE(s.status == Status::Optimal);
    CHECK(std::abs(s.objective_value - *expected) <= 1e-7 * std::max(1.0, std::abs(*expected)));
    CHECK(find_violations(p, s.values, 1e-7).empty());
  }
}

TEST_CASE("repeated solves are bitwise identical") {
  std::mt19937_64 rng(5);
  const auto p = oracle::random_milp(rng, 4, 6, 5);
  const auto a = solve_milp(p, exact());
  const auto b = solve_milp(p, exact());
  CHECK(a.values == b.values);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("find_violations reports rows then bounds") {
  LinearProblem p;
  const auto x = p.add_binary("x");
  const auto y = p.add_variable("y", 0.0, {0.0, 1.0});
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0, "cap");
  const auto v = find_violations(p, {0.5, 2.0}, 1e-9);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0);
  CHECK(v[1] == 1 + x);
  CHECK(v[2] == 1 + y);
}

TEST_CASE("LP text export") {
  LinearProblem p(Sense::Maximize);
  const auto a = p.add_binary("a", 3.0);
  const auto b = p.add_variable("b", -2.5, {0.0, 4.0});
  p.add_constraint({{a, 1.0}, {b, -1.0}}, Relation::GreaterEqual, 0.5, "link");
  const auto text = to_lp_format(p);
  CHECK(text.find("Maximize") == 0);
  CHECK(text.find("obj: 3 a - 2.5 b") != std::string::npos);
  CHECK(text.find("link: 1 a - 1 b >= 0.5") != std::string::npos);
  CHECK(text.find("0 <= b <= 4") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("default solver is the bundled engine") {
  LinearProblem p;
  const auto x = p.add_variable("x", 1.0);
  p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 3.0, "floor");
  CHECK(default_solver().name() == "bundled-simplex-bnb");
  CHECK(default_solver().solve(p, {}).objective_value == doctest::Approx(3.0));
}

}
