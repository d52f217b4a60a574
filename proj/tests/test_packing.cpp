#include "doctest.h"

#include <map>

#include "qnet/error.hpp"
#include "qnet/packing.hpp"
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

std::vector<SpanningTree> triangle_paths() {
  return {tree({{1, 2}, {1, 3}}), tree({{1, 2}, {2, 3}}), tree({{1, 3}, {2, 3}})};
}

void check_trees_count(const WeightedGraph& g, const TreePacking& pk) {
  const std::size_t n = g.node_count();
  for (const auto& t : pk.trees) {
    CHECK(t.edges.size() == n - 1);
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : t.edges) {
      ++degree[e.u];
      ++degree[e.v];
    }
    std::size_t sum = 0;
    for (auto d : degree) sum += d;
    CHECK(sum == 2 * (n - 1));
  }
}

}  // namespace

TEST_CASE("validate_packing") {
  auto tri = triangle();
  auto good = TreePacking::weighted(triangle_paths(), {Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  CHECK(validate_packing(tri, good).valid);

  auto twice = TreePacking::weighted({tree({{1, 2}, {1, 3}}), tree({{1, 2}, {1, 3}})}, {1, 1});
  auto bad = validate_packing(tri, twice);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.edge);
  CHECK(*bad.edge == key(1, 2));

  auto empty = TreePacking::weighted({}, {});
  CHECK(validate_packing(tri, empty).valid);
  CHECK(packing_rate(empty) == Rational(0));

  auto not_a_tree = TreePacking::weighted({tree({{1, 2}})}, {1});
  CHECK_FALSE(validate_packing(tri, not_a_tree).valid);
  auto foreign = TreePacking::weighted({tree({{1, 2}, {3, 4}})}, {1});
  CHECK_FALSE(validate_packing(fixture("k4_minus_edge"), foreign).valid);

  // multigraph form: usage count <= n r_e
  auto mg = TreePacking::multigraph(triangle_paths(), 2);
  CHECK(validate_packing(tri, mg).valid);
  auto mg1 = TreePacking::multigraph(triangle_paths(), 1);
  CHECK_FALSE(validate_packing(tri, mg1).valid);

  CHECK(code_of([] { TreePacking::weighted({tree({{1, 2}})}, {}); }) == ErrorCode::InvalidPacking);
  CHECK(code_of([] { TreePacking::weighted({tree({{1, 2}})}, {-1}); }) == ErrorCode::InvalidPacking);
}

TEST_CASE("packing_rate") {
  CHECK(packing_rate(TreePacking::weighted(triangle_paths(), {Rational(1, 2), Rational(1, 2), Rational(1, 2)})) ==
        Rational(3, 2));
  std::vector<SpanningTree> five(5, tree({{1, 2}, {1, 3}, {1, 4}}));
  CHECK(packing_rate(TreePacking::multigraph(five, 3)) == Rational(5, 3));
}

TEST_CASE("weighted and multigraph conversions") {
  auto w = weighted_from_multigraph(TreePacking::multigraph(triangle_paths(), 2));
  CHECK(w.mode == PackingMode::Weighted);
  CHECK(w.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)});

  auto same = tree({{1, 2}, {1, 3}});
  auto collapsed = weighted_from_multigraph(TreePacking::multigraph({same, same}, 2));
  REQUIRE(collapsed.trees.size() == 1);
  CHECK(collapsed.weights[0] == Rational(1));

  auto counts = weighted_from_multigraph(TreePacking::multigraph({same, same, tree({{1, 2}, {2, 3}})}, 1));
  CHECK(counts.weights == std::vector<Rational>{2, 1});

  auto m = multigraph_from_weighted(TreePacking::weighted(triangle_paths(), {Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  CHECK(m.rounds == 2);
  CHECK(m.tree_count() == 3);

  std::vector<SpanningTree> k4m(5, tree({{1, 2}, {1, 3}, {1, 4}}));
  std::vector<Rational> thirds(5, Rational(1, 3));
  auto m3 = multigraph_from_weighted(TreePacking::weighted(k4m, thirds));
  CHECK(m3.rounds == 3);
  CHECK(m3.tree_count() == 5);

  auto ints = multigraph_from_weighted(TreePacking::weighted({same}, {3}));
  CHECK(ints.rounds == 1);
  CHECK(ints.tree_count() == 3);
}

TEST_CASE("basic algorithm examples") {
  auto tri = basic_algorithm(triangle());
  CHECK(tri.packing.rounds == 2);
  CHECK(tri.packing.tree_count() == 3);
  CHECK(tri.achieved_rate == Rational(3, 2));
  CHECK(tri.optimal);
  CHECK(validate_packing(triangle(), tri.packing).valid);

  auto k4 = basic_algorithm(fixture("k4"));
  CHECK(k4.packing.rounds == 3);
  CHECK(k4.packing.tree_count() == 6);
  CHECK(k4.achieved_rate == Rational(2));

  auto edge = basic_algorithm(make_graph(2, {{1, 2, 3}}));
  CHECK(edge.packing.rounds == 1);
  CHECK(edge.packing.tree_count() == 3);
  CHECK(edge.achieved_rate == Rational(3));

  CHECK(code_of([] { basic_algorithm(fixture("triangle_pendant")); }) == ErrorCode::PreconditionFailed);
  CHECK(code_of([] { basic_algorithm(triangle(Rational(1, 2), 1, 1)); }) == ErrorCode::PreconditionFailed);
  CHECK(code_of([] { basic_algorithm(fixture("disconnected")); }) == ErrorCode::Disconnected);
  CHECK(code_of([] { basic_algorithm(make_graph(1, {})); }) == ErrorCode::TrivialNetwork);
}

TEST_CASE("general algorithm examples") {
  auto tail = general_algorithm(fixture("square_tail"));
  CHECK(tail.achieved_rate == Rational(3, 2));
  CHECK(tail.optimal);
  CHECK(validate_packing(fixture("square_tail"), tail.packing).valid);

  auto pend = general_algorithm(fixture("triangle_pendant"));
  CHECK(pend.achieved_rate == Rational(1));
  CHECK(pend.packing.tree_count() == pend.packing.rounds);

  for (const auto* name : {"triangle", "k4", "hexagon"}) {
    auto g = fixture(name);
    auto a = basic_algorithm(g);
    auto b = general_algorithm(g);
    CHECK(a.packing.trees == b.packing.trees);
    CHECK(a.packing.multiplicity == b.packing.multiplicity);
    CHECK(a.packing.rounds == b.packing.rounds);
  }
}

TEST_CASE("heuristics reach the optimum on every fixture") {
  for (const auto* name : {"triangle", "k4_minus_edge", "k4", "triangle_pendant", "hexagon", "star4", "tree9",
                           "square_tail", "cliques_triangle"}) {
    CAPTURE(name);
    auto g = fixture(name);
    auto out = general_algorithm(g);
    CHECK(validate_packing(g, out.packing).valid);
    CHECK(out.achieved_rate == nwt_rate(g).rate);
    CHECK(out.optimal);
    check_trees_count(g, out.packing);
  }
  // hexagon family from the augmentation study
  auto hex = hexagon();
  for (const auto& extra : {std::vector<EdgeKey>{key(1, 4)}, std::vector<EdgeKey>{key(2, 6)},
                            std::vector<EdgeKey>{key(1, 4), key(2, 6)}, std::vector<EdgeKey>{key(1, 4), key(1, 5)}}) {
    auto g = hex;
    for (auto e : extra) g = g.with_link(e, 1);
    auto out = general_algorithm(g);
    CHECK(validate_packing(g, out.packing).valid);
    CHECK(out.achieved_rate == nwt_rate(g).rate);
  }
}

TEST_CASE("general algorithm stays valid and bounded on random graphs") {
  std::mt19937_64 rng(47);
  int optimal = 0;
  const int trials = 40;
  for (int trial = 0; trial < trials; ++trial) {
    auto g = random_connected(rng, 3 + trial % 4, 0.6, [](auto& r) {
      std::uniform_int_distribution<int> d(1, 2);
      return Rational(d(r));
    });
    auto out = general_algorithm(g);
    CHECK(validate_packing(g, out.packing).valid);
    CHECK(out.achieved_rate <= nwt_rate(g).rate);
    if (out.optimal) ++optimal;
  }
  MESSAGE("optimal on " << optimal << " of " << trials);
}

TEST_CASE("oracle examples") {
  CHECK(brute_force_packing(triangle(), 2).packing.tree_count() == 3);
  CHECK(brute_force_packing(triangle(), 1).packing.tree_count() == 1);
  auto hex = brute_force_packing(hexagon(), 5);
  CHECK(hex.packing.tree_count() == 6);
  CHECK(hex.achieved_rate == Rational(6, 5));
  CHECK(hex.packing.source == PackingSource::Oracle);

  CHECK(code_of([] { brute_force_packing(triangle(), 0); }) == ErrorCode::MalformedInput);
  CHECK(code_of([] { brute_force_packing(triangle(), 9); }) == ErrorCode::OracleLimit);
  Limits tiny;
  tiny.oracle_states = 2;
  CHECK(code_of([&] { brute_force_packing(fixture("k4"), 3, tiny); }) == ErrorCode::OracleLimit);
}

TEST_CASE("oracle count equals nwt_length on all small graphs") {
  for (int n = 2; n <= 4; ++n) {
    for_each_small_graph(n, {1, 2}, [](const WeightedGraph& g) {
      for (std::int64_t rounds = 1; rounds <= 3; ++rounds) {
        auto out = brute_force_packing(g, rounds);
        CHECK(out.packing.tree_count() == oracle_length(g, rounds));
        CHECK(validate_packing(g, out.packing).valid);
      }
    });
  }
}

TEST_CASE("reweighting a fixed tree list") {
  auto half = triangle(Rational(1, 2), Rational(1, 2), Rational(1, 2));
  auto out = reweight_by_lp(half, triangle_paths());
  CHECK(out.packing.weights == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(out.achieved_rate == Rational(3, 4));
  CHECK(out.optimal);

  auto path = make_graph(4, {{1, 2, Rational(5, 2)}, {2, 3, Rational(2, 3)}, {3, 4, 7}});
  auto single = reweight_by_lp(path, {tree({{1, 2}, {2, 3}, {3, 4}})});
  CHECK(single.achieved_rate == Rational(2, 3));

  auto partial = reweight_by_lp(triangle(), {tree({{1, 2}, {1, 3}})});
  CHECK(partial.achieved_rate == Rational(1));
  CHECK_FALSE(partial.optimal);
  CHECK_FALSE(partial.diagnostics.notes.empty());
}

TEST_CASE("conversion round trip preserves rate and validity") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_connected(rng, 4, 0.7, [](auto& r) {
      std::uniform_int_distribution<int> d(1, 2);
      return Rational(d(r));
    });
    std::uniform_int_distribution<std::int64_t> rd(1, 3);
    auto out = brute_force_packing(g, rd(rng));
    auto w = weighted_from_multigraph(out.packing);
    CHECK(validate_packing(g, w).valid);
    CHECK(packing_rate(w) == out.achieved_rate);
    auto back = multigraph_from_weighted(w);
    CHECK(validate_packing(g, back).valid);
    CHECK(packing_rate(back) == out.achieved_rate);
    CHECK(back.rounds <= out.packing.rounds);
  }
}
