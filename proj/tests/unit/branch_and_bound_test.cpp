#include <doctest.h>

#include <cmath>
#include <random>

#include "bebplan/branch_and_bound.hpp"
#include "bebplan/tco_model.hpp"
#include "helpers.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace bebplan;

namespace {

// max value s.t. weight <= cap, written as a minimisation.
SparseMip knapsack(const std::vector<double>& value, const std::vector<double>& weight, double cap, double ub = 1) {
  SparseMip m;
  const auto r = m.add_row({"cap", Sense::LessEqual, cap});
  for (std::size_t i = 0; i < value.size(); ++i) {
    const auto c = m.add_column({"z" + std::to_string(i), 0, ub, true, -value[i]});
    m.add_coefficient(r, c, weight[i]);
  }
  return m;
}

double brute_force(const std::vector<double>& value, const std::vector<double>& weight, double cap, int ub) {
  const std::size_t n = value.size();
  double best = 0;
  std::vector<int> z(n, 0);
  for (;;) {
    double w = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w += weight[i] * z[i];
      v += value[i] * z[i];
    }
    if (w <= cap + 1e-9) best = std::max(best, v);
    std::size_t i = 0;
    while (i < n && z[i] == ub) z[i++] = 0;
    if (i == n) break;
    ++z[i];
  }
  return -best;
}

}  // namespace

TEST_CASE("knapsacks against brute force") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(1, 20);
  for (int it = 0; it < 40; ++it) {
    const int ub = 1 + it % 3;
    const std::size_t n = ub == 1 ? 8 : 5;
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = d(rng);
      w[i] = d(rng);
    }
    const double cap = d(rng) * 2;
    const SolveReport r = solve_mip(knapsack(v, w, cap, ub));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(brute_force(v, w, cap, ub)));
    CHECK(r.gap <= 1e-6);
    CHECK(r.bound <= r.objective + 1e-9);
  }
}

TEST_CASE("infeasible row propagates") {
  SparseMip m = knapsack({3, 4}, {2, 2}, 3);
  m.add_row({"impossible", Sense::GreaterEqual, 1});
  const SolveReport r = solve_mip(m);
  CHECK(r.status == SolveStatus::Infeasible);
  CHECK_FALSE(r.has_incumbent);
}

TEST_CASE("node limit without incumbent") {
  const SparseMip m = knapsack({5, 6, 7}, {3, 4, 5}, 6);
  SolveLimits lim;
  lim.node_limit = 1;
  CHECK_THROWS_CODE(solve_mip(m, lim), ErrorCode::NoFeasibleSolutionFound);
  // A feasible start keeps the report alive.
  const std::vector<double> start = {0, 0, 0};
  const SolveReport r = solve_mip(m, lim, &start);
  CHECK(r.has_incumbent);
  CHECK(r.status == SolveStatus::NodeLimit);
}

TEST_CASE("results do not depend on the thread count") {
  const auto inst = instances::oracle_instance(1234);
  const TransformationModel model = build_mip(inst.network, inst.schedule, inst.config);
  SolveLimits one, four;
  four.threads = 4;
  const SolveReport a = solve_mip(model.mip, one);
  const SolveReport b = solve_mip(model.mip, four);
  const SolveReport c = solve_mip(model.mip, one);
  CHECK(a.values == b.values);
  CHECK(a.nodes == b.nodes);
  CHECK(a.objective == b.objective);
  CHECK(a.lp_iterations == c.lp_iterations);
}

TEST_CASE("oracle instances") {
  for (std::uint64_t seed = 900; seed < 915; ++seed) {
    const auto inst = instances::oracle_instance(seed);
    const TransformationModel model = build_mip(inst.network, inst.schedule, inst.config);
    const auto start = rounding_start(model, inst.config);
    const SolveReport r = solve_mip(model.mip, {}, &start);
    const auto o = oracle::enumerate_optimum(inst.network, inst.schedule, inst.config);
    REQUIRE(o.feasible);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(o.objective).epsilon(1e-6));
    CHECK(r.root_bound <= r.objective + 1e-6 * std::abs(r.objective));
  }
}

TEST_CASE("report JSON echoes limits and tolerances") {
  const SolveReport r = solve_mip(knapsack({3, 4}, {2, 2}, 3));
  const nlohmann::json j = report_to_json(r);
  CHECK(j.at("status") == "optimal");
  CHECK(j.at("tolerances").at("integrality") == 1e-6);
  CHECK(j.at("limits").at("gap") == 1e-6);
}
