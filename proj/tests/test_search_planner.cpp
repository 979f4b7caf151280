#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "satsim/rng.hpp"
#include "satsim/search_planner.hpp"

using namespace sat;

namespace {

SearchGrid grid(double w, double h) { return SearchGrid({0, 0, w, h}, 10.0, 0.999, 0.5); }

bool is_walk(const SearchGraph& g, const std::vector<int>& nodes) {
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i] == nodes[i + 1]) return false;
    const auto& nb = g.neighbors(nodes[i]);
    if (std::none_of(nb.begin(), nb.end(),
                     [&](const auto& e) { return e.first == nodes[i + 1]; }))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lattice construction") {
  SUBCASE("2x2 grid, 4-connected") {
    SearchGraph g(grid(20, 20), 4);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
  }
  SUBCASE("2x2 grid, 8-connected") {
    SearchGraph g(grid(20, 20), 8);
    CHECK(g.edge_count() == 6);
    // Diagonal edge costs sqrt(2) * cell size.
    const int a = g.node_at({5, 5});
    const int b = g.node_at({15, 15});
    CHECK(g.distance(a, b) == doctest::Approx(10.0 * std::sqrt(2.0)));
  }
  SUBCASE("10x10 grid, 8-connected") {
    SearchGraph g(grid(100, 100), 8);
    CHECK(g.node_count() == 100);
    // 2*9*10 axis edges + 2*9*9 diagonals.
    CHECK(g.edge_count() == 180 + 162);
  }
}

TEST_CASE("shortest paths on a line graph") {
  SearchGraph g(grid(50, 10), 8);
  REQUIRE(g.node_count() == 5);
  CHECK(g.distance(0, 4) == doctest::Approx(40.0));
  const auto p = g.path(0, 4);
  CHECK(p == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(g.path(2, 2) == std::vector<int>{2});
}

TEST_CASE("greedy walk") {
  SearchGraph g(grid(100, 10), 8);  // 10 nodes in a line

  SUBCASE("no targets leaves only the start") {
    const Plan p = greedy_path(g, {}, 3);
    CHECK(p.nodes == std::vector<int>{3});
    CHECK(plan_cost(g, p) == 0.0);
  }
  SUBCASE("equidistant tie goes to the lowest node id") {
    const Plan p = greedy_path(g, {0, 4}, 2);
    CHECK(p.nodes == std::vector<int>{2, 1, 0, 1, 2, 3, 4});
  }
  SUBCASE("nodes passed en route count as covered") {
    const Plan p = greedy_path(g, {1, 0}, 3);
    // Walking to 0 passes 1; no backtracking afterwards.
    CHECK(p.nodes == std::vector<int>{3, 2, 1, 0});
  }
}

TEST_CASE("exhaustive planner is a lower bound for greedy") {
  SearchGraph g(grid(100, 10), 8);

  SUBCASE("known greedy-suboptimal instance") {
    const std::vector<int> targets{0, 4, 9};
    const Plan gp = greedy_path(g, targets, 3);
    const ExactPath ep = exact_path_small(g, targets, 3);
    CHECK(plan_cost(g, gp) == doctest::Approx(140.0));
    CHECK(ep.cost == doctest::Approx(120.0));
    CHECK(ep.cost < plan_cost(g, gp));
  }
  SUBCASE("exact <= greedy on random instances") {
    SearchGraph sq(grid(100, 100), 8);
    RngStream rng(7, "plan");
    for (int t = 0; t < 50; ++t) {
      std::set<int> ts;
      while (ts.size() < 5) ts.insert(int(rng.pick(100)));
      const std::vector<int> targets(ts.begin(), ts.end());
      const int start = int(rng.pick(100));
      const Plan gp = greedy_path(sq, targets, start);
      const ExactPath ep = exact_path_small(sq, targets, start);
      CHECK(ep.cost <= plan_cost(sq, gp) + 1e-9);
      CHECK(is_walk(sq, ep.plan.nodes));
      for (int v : targets)
        CHECK(std::find(ep.plan.nodes.begin(), ep.plan.nodes.end(), v) != ep.plan.nodes.end());
    }
  }
  SUBCASE("rejects more than 6 targets") {
    CHECK_THROWS(exact_path_small(g, {0, 1, 2, 3, 4, 5, 6}, 9));
  }
}

TEST_CASE("joint planning partitions the targets") {
  SearchGraph g(grid(100, 100), 8);
  RngStream rng(8, "joint");
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + int(rng.pick(4));
    std::set<int> ts;
    const int nt = 1 + int(rng.pick(12));
    while (int(ts.size()) < nt) ts.insert(int(rng.pick(100)));
    std::vector<int> starts;
    for (int i = 0; i < m; ++i) starts.push_back(int(rng.pick(100)));
    const std::vector<int> targets(ts.begin(), ts.end());

    const JointPlanResult r = joint_plan(g, targets, starts);
    REQUIRE(r.plans.size() == std::size_t(m));
    REQUIRE(r.assigned.size() == std::size_t(m));

    std::multiset<int> covered;
    for (int i = 0; i < m; ++i) {
      CHECK(is_walk(g, r.plans[i].nodes));
      REQUIRE(!r.plans[i].nodes.empty());
      CHECK(r.plans[i].nodes.front() == starts[i]);
      for (int v : r.assigned[i]) {
        covered.insert(v);
        CHECK(std::find(r.plans[i].nodes.begin(), r.plans[i].nodes.end(), v) !=
              r.plans[i].nodes.end());
      }
    }
    // Every target assigned exactly once.
    CHECK(covered.size() == targets.size());
    for (int v : targets) CHECK(covered.count(v) == 1);
  }
}

TEST_CASE("joint planning is deterministic") {
  SearchGraph g(grid(100, 100), 8);
  const std::vector<int> targets{3, 17, 42, 88, 55};
  const std::vector<int> starts{0, 99};
  const JointPlanResult a = joint_plan(g, targets, starts);
  const JointPlanResult b = joint_plan(g, targets, starts);
  REQUIRE(a.plans.size() == b.plans.size());
  for (std::size_t i = 0; i < a.plans.size(); ++i) CHECK(a.plans[i].nodes == b.plans[i].nodes);
}

TEST_CASE("control selection picks the action nearest the goal node") {
  const std::vector<Vec2> controls{{0, 0}, {2, 0}, {0, 2}, {-2, 0}};
  CHECK(search_control(controls, {5, 0}) == 1);
  CHECK(search_control(controls, {0, 0}) == 0);
  CHECK(search_control(controls, {0, 9}) == 2);
  // Equidistant from all of the first three: the first index wins.
  CHECK(search_control(controls, {1, 1}) == 0);
}
