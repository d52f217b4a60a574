#include "doctest.h"

#include "qnet/error.hpp"
#include "qnet/planner.hpp"
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

VertexPartition blocks(std::size_t n, std::initializer_list<std::initializer_list<int>> one_based) {
  std::vector<std::vector<VertexId>> out;
  for (const auto& b : one_based) {
    std::vector<VertexId> block;
    for (int v : b) block.push_back(static_cast<VertexId>(v - 1));
    out.push_back(block);
  }
  return VertexPartition::from_blocks(n, out);
}

}  // namespace

TEST_CASE("bottleneck reports") {
  auto pend = bottleneck_report(fixture("triangle_pendant"));
  CHECK(pend.kind == BottleneckKind::Bipartition);
  CHECK(pend.rate.minimizing_partition == blocks(4, {{1, 2, 3}, {4}}));
  REQUIRE(pend.contracted.edge_count() == 1);
  CHECK(pend.contracted.edge(0).rate == Rational(1));
  CHECK_FALSE(pend.certificate.bottleneck_free());

  auto cliques = bottleneck_report(fixture("cliques_triangle"));
  CHECK(cliques.kind == BottleneckKind::Multipartite);
  CHECK(cliques.rate.rate == Rational(3, 2));
  CHECK(cliques.best_bipartition.bound == Rational(2));
  CHECK(cliques.contracted.node_count() == 3);
  CHECK(cliques.rate.minimizer_count == 2);

  auto hex = bottleneck_report(hexagon());
  CHECK(hex.kind == BottleneckKind::None);
  CHECK(hex.certificate.bottleneck_free());
  CHECK(hex.rate.rate == Rational(6, 5));
  CHECK(hex.finest_bound == Rational(6, 5));
  CHECK(to_string(BottleneckKind::Multipartite) == "multipartite");
}

TEST_CASE("report certificate attains the rate") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_connected(rng, 3 + trial % 4, 0.5, [](auto& r) { return random_rational(r, 3, 2); });
    auto rep = bottleneck_report(g);
    CHECK(partition_bound(g, rep.rate.minimizing_partition) == rep.rate.rate);
    CHECK(rep.best_bipartition.bound >= rep.rate.rate);
    CHECK((rep.kind == BottleneckKind::None) == rep.certificate.bottleneck_free());
  }
}

TEST_CASE("hexagon additions") {
  auto hex = hexagon();
  auto a14 = evaluate_addition(hex, {key(1, 4)});
  CHECK(a14.old_rate == Rational(6, 5));
  CHECK(a14.new_rate == Rational(7, 5));
  CHECK(a14.delta == Rational(1, 5));
  CHECK_FALSE(a14.merged_existing);

  auto a26 = evaluate_addition(hex, {key(2, 6)});
  CHECK(a26.new_rate == Rational(4, 3));
  CHECK(a26.partition == blocks(6, {{1, 2, 6}, {3}, {4}, {5}}));
  CHECK(a26.minimizer_count == 1);

  auto hex14 = hex.with_link(key(1, 4), 1);
  CHECK(evaluate_addition(hex14, {key(2, 6)}).new_rate == Rational(8, 5));
  CHECK(evaluate_addition(hex14, {key(3, 6)}).new_rate == Rational(8, 5));
  auto a15 = evaluate_addition(hex14, {key(1, 5)});
  CHECK(a15.new_rate == Rational(3, 2));
  CHECK(a15.partition == blocks(6, {{1, 4, 5, 6}, {2}, {3}}));
  CHECK(a15.kind == BottleneckKind::Multipartite);
}

TEST_CASE("existing links and bad candidates") {
  auto raised = evaluate_addition(triangle(), {key(1, 2), 1});
  CHECK(raised.merged_existing);
  CHECK(raised.new_rate == Rational(2));

  CHECK(code_of([] { evaluate_addition(triangle(), {EdgeKey(1, 1)}); }) == ErrorCode::SelfLoop);
  CHECK(code_of([] { evaluate_addition(triangle(), {key(1, 7)}); }) == ErrorCode::UnknownNode);
  CHECK(code_of([] { evaluate_addition(triangle(), {key(1, 2), 0}); }) == ErrorCode::NegativeValue);
}

TEST_CASE("additions never lower the rate") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 4;
    auto g = random_connected(rng, n, 0.5, [](auto& r) { return random_rational(r, 3, 3); });
    std::uniform_int_distribution<int> node(1, n);
    int u = node(rng), v = node(rng);
    if (u == v) continue;
    auto res = evaluate_addition(g, {key(u, v), random_rational(rng, 3, 3)});
    CHECK(res.delta.sign() >= 0);
  }
}

TEST_CASE("greedy plans") {
  auto hex = hexagon();
  auto one = best_additions(hex, {{key(1, 4)}, {key(2, 6)}}, 1);
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0].result.candidate.edge == key(1, 4));
  CHECK(one.final_rate == Rational(7, 5));

  auto hex14 = hex.with_link(key(1, 4), 1);
  auto next = best_additions(hex14, {{key(3, 6)}, {key(2, 6)}, {key(1, 5)}}, 1);
  REQUIRE(next.steps.size() == 1);
  CHECK(next.steps[0].result.candidate.edge == key(2, 6));
  CHECK(next.final_rate == Rational(8, 5));

  auto none = best_additions(hex, {{key(1, 4)}}, 0);
  CHECK(none.steps.empty());
  CHECK(none.final_rate == Rational(6, 5));
  CHECK(none.initial_rate == Rational(6, 5));

  CHECK(code_of([&] { best_additions(hex, {}, 1); }) == ErrorCode::EmptyPlan);

  // full trajectory 6/5 -> 7/5 -> 8/5
  auto two = best_additions(hex, {{key(1, 4)}, {key(2, 6)}, {key(3, 6)}, {key(1, 5)}}, 2);
  REQUIRE(two.steps.size() == 2);
  CHECK(two.steps[0].result.new_rate == Rational(7, 5));
  CHECK(two.steps[1].result.new_rate == Rational(8, 5));
  CHECK(two.steps[0].dot.rfind("graph", 0) == 0);
  Rational last = two.initial_rate;
  for (const auto& s : two.steps) {
    CHECK(s.result.new_rate >= last);
    last = s.result.new_rate;
  }
}

TEST_CASE("exhaustive plans") {
  auto hex = hexagon();
  std::vector<Candidate> cands{{key(1, 4)}, {key(2, 6)}, {key(3, 6)}, {key(1, 5)}};
  auto ex = best_additions(hex, cands, 2, true);
  CHECK(ex.exhaustive);
  CHECK(ex.final_rate >= best_additions(hex, cands, 2).final_rate);
  CHECK(ex.final_rate == Rational(8, 5));
  CHECK(code_of([&] { best_additions(hex, cands, 4, true); }) == ErrorCode::PreconditionFailed);
}
