#include "doctest.h"

#include "qnet/error.hpp"
#include "qnet/lp.hpp"
#include "qnet/rate.hpp"
#include "support/support.hpp"

using namespace qnet;
using namespace qnet::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::MalformedInput;
}

SpanningTree tree(std::initializer_list<std::pair<int, int>> edges) {
  std::vector<EdgeKey> keys;
  for (auto [u, v] : edges) keys.push_back(key(u, v));
  return SpanningTree(keys);
}

}  // namespace

TEST_CASE("simplex on a textbook problem") {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
  SimplexProblem p;
  p.rows = 3;
  p.cols = 2;
  p.a = {1, 0, 0, 2, 3, 2};
  p.b = {4, 12, 18};
  p.c = {3, 5};
  auto r = simplex_maximize(p);
  CHECK(r.status == SimplexStatus::Optimal);
  CHECK(r.objective == Rational(36));
  CHECK(r.x == std::vector<Rational>{2, 6});
  // dual: min 4u + 12v + 18w
  CHECK(Rational(4) * r.duals[0] + Rational(12) * r.duals[1] + Rational(18) * r.duals[2] == Rational(36));

  SimplexProblem unbounded;
  unbounded.rows = 1;
  unbounded.cols = 2;
  unbounded.a = {1, -1};
  unbounded.b = {1};
  unbounded.c = {0, 1};
  CHECK(simplex_maximize(unbounded).status == SimplexStatus::Unbounded);

  SimplexProblem bad = p;
  bad.b[0] = -1;
  CHECK(code_of([&] { simplex_maximize(bad); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("exact linear systems") {
  auto x = solve_linear_system({2, 1, 1, 3}, {3, 5}, 2);
  REQUIRE(x);
  CHECK((*x)[0] == Rational(4, 5));
  CHECK((*x)[1] == Rational(7, 5));
  CHECK_FALSE(solve_linear_system({1, 2, 2, 4}, {1, 2}, 2));
}

TEST_CASE("build_lp shapes") {
  auto tri = build_lp(triangle(1, 2, 5));
  CHECK(tri.variables == 3);
  REQUIRE(tri.constraints.size() == 6);
  for (int i = 0; i < 3; ++i) CHECK(tri.constraints[i].rhs == Rational(0));
  CHECK(tri.constraints[3].subset == std::vector<VertexId>{0, 1});
  CHECK(tri.constraints[3].rhs == Rational(1));
  CHECK(tri.constraints[4].rhs == Rational(2));
  CHECK(tri.constraints[5].rhs == Rational(5));
  CHECK(tri.total_rate == Rational(8));

  auto pair = build_lp(make_graph(2, {{1, 2, 3}}));
  REQUIRE(pair.constraints.size() == 2);
  CHECK(pair.constraints[0].rhs == Rational(0));
  CHECK(pair.constraints[1].rhs == Rational(0));

  CHECK(build_lp(hexagon()).constraints.size() == 62);

  CHECK(code_of([] { build_lp(make_graph(1, {})); }) == ErrorCode::TrivialNetwork);
  Limits small;
  small.lp_nodes = 5;
  CHECK(code_of([&] { build_lp(hexagon(), small); }) == ErrorCode::ExactModeLimit);

  auto text = lp_to_text(build_lp(triangle()));
  CHECK(text.find("R_1 + R_2 >= 1") != std::string::npos);
  CHECK(text.find("minimize") != std::string::npos);
}

TEST_CASE("solve_lp examples") {
  auto tri = solve_lp(build_lp(triangle()));
  CHECK(tri.omniscience == Rational(3, 2));
  CHECK(tri.z == Rational(3, 2));
  CHECK(solve_lp(build_lp(triangle(1, 2, 5))).z == Rational(3));
  CHECK(solve_z(make_graph(3, {{1, 2}, {1, 3}})) == Rational(1));
  CHECK(solve_z(hexagon()) == Rational(6, 5));
  CHECK(solve_z(fixture("k4")) == Rational(2));
  CHECK(solve_z(fixture("tree9").scaled(4)) == Rational(4));
}

TEST_CASE("LP certificates re-verify exactly") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    auto g = random_connected(rng, n, 0.6, [](auto& r) { return random_rational(r, 5, 4); });
    auto inst = build_lp(g);
    auto sol = solve_lp(inst);
    auto check = verify_optimality(inst, sol);
    CHECK(check.optimal());
    for (const auto& r : sol.node_rates) CHECK(r.sign() >= 0);
    CHECK(verify_constraints(g, rates_from_lp(sol)).satisfied);

    auto again = reevaluate_basis(inst, sol.basis);
    CHECK(again.node_rates == sol.node_rates);
    CHECK(again.multipliers == sol.multipliers);
    CHECK(again.z == sol.z);

    for (const auto& p : enumerate_partitions(g)) CHECK(sol.z <= partition_bound(g, p));
  }
}

TEST_CASE("exhaustive equivalence with the partition formula") {
  for (int n = 2; n <= 4; ++n) {
    for_each_small_graph(n, {1, 2}, [](const WeightedGraph& g) { CHECK(solve_z(g) == oracle_rate(g)); });
  }
}

TEST_CASE("rates from a packing") {
  auto tri = triangle();
  auto pk = TreePacking::weighted({tree({{1, 2}, {1, 3}}), tree({{1, 2}, {2, 3}}), tree({{1, 3}, {2, 3}})},
                                  {Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  auto r = rates_from_packing(tri, pk);
  CHECK(r.source == RatesSource::FromPacking);
  CHECK(r.rates == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  CHECK(tri.total_rate() - r.total() == Rational(3, 2));

  auto edge = make_graph(2, {{1, 2, 3}});
  auto single = rates_from_packing(edge, TreePacking::weighted({tree({{1, 2}})}, {3}));
  CHECK(single.rates == std::vector<Rational>{0, 0});

  auto star = make_graph(3, {{1, 2}, {1, 3}});
  auto sr = rates_from_packing(star, TreePacking::weighted({tree({{1, 2}, {1, 3}})}, {1}));
  CHECK(sr.rates == std::vector<Rational>{1, 0, 0});

  auto over = TreePacking::weighted({tree({{1, 2}, {1, 3}})}, {2});
  CHECK(code_of([&] { rates_from_packing(tri, over); }) == ErrorCode::InvalidPacking);
}

TEST_CASE("explicit rates without a bottleneck") {
  auto hex = explicit_rates_no_bottleneck(hexagon());
  CHECK(hex.source == RatesSource::ExplicitNoBottleneck);
  for (const auto& r : hex.rates) CHECK(r == Rational(4, 5));
  CHECK(hexagon().total_rate() - hex.total() == Rational(6, 5));
  CHECK(verify_constraints(hexagon(), hex).satisfied);

  auto k4 = explicit_rates_no_bottleneck(fixture("k4"));
  for (const auto& r : k4.rates) CHECK(r == Rational(1));
  CHECK(fixture("k4").total_rate() - k4.total() == Rational(2));

  auto tri = explicit_rates_no_bottleneck(triangle());
  for (const auto& r : tri.rates) CHECK(r == Rational(1, 2));

  CHECK(code_of([] { explicit_rates_no_bottleneck(fixture("triangle_pendant")); }) ==
        ErrorCode::PreconditionFailed);
}

TEST_CASE("constraint verification") {
  CommunicationRates zero{{0, 0, 0}, RatesSource::FromLP};
  auto check = verify_constraints(triangle(), zero);
  CHECK_FALSE(check.satisfied);
  REQUIRE(check.violated);
  CHECK(*check.violated == std::vector<VertexId>{0, 1});
  CHECK(check.lhs == Rational(0));
  CHECK(check.rhs == Rational(1));
  CHECK(to_string(RatesSource::ExplicitNoBottleneck) == "explicit-no-bottleneck");
}
