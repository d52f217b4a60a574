#pragma once

// Shared test helpers: fixture loading, graph builders, random instances and
// small independent oracles that do not call into the library's solvers.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/graph_io.hpp"
#include "qnet/rational.hpp"

namespace qnet::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(QNET_FIXTURE_DIR) + "/" + name + ".json";
}

inline WeightedGraph fixture(const std::string& name) { return load_graph(fixture_path(name)); }

struct E {
  int u;
  int v;
  Rational rate = 1;
};

/// Labels "1".."n"; endpoints are 1-based.
inline WeightedGraph make_graph(int n, std::initializer_list<E> edges) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  std::vector<Edge> es;
  for (const auto& e : edges) es.push_back(Edge{EdgeKey(e.u - 1, e.v - 1), e.rate, 0});
  return WeightedGraph(std::move(labels), std::move(es));
}

inline WeightedGraph make_graph(int n, const std::vector<E>& edges) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  std::vector<Edge> es;
  for (const auto& e : edges) es.push_back(Edge{EdgeKey(e.u - 1, e.v - 1), e.rate, 0});
  return WeightedGraph(std::move(labels), std::move(es));
}

inline WeightedGraph hexagon() {
  return make_graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}});
}

inline WeightedGraph triangle(Rational a = 1, Rational b = 1, Rational c = 1) {
  return make_graph(3, {{1, 2, a}, {1, 3, b}, {2, 3, c}});
}

inline EdgeKey key(int u, int v) { return EdgeKey(u - 1, v - 1); }

inline bool connected_positive(int n, const std::vector<E>& edges) {
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int comps = n;
  for (const auto& e : edges) {
    if (e.rate.sign() <= 0) continue;
    int a = find(e.u - 1), b = find(e.v - 1);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

/// Random connected graph on n nodes; rate(rng) draws each edge rate.
template <class RateFn>
WeightedGraph random_connected(std::mt19937_64& rng, int n, double density, RateFn rate) {
  std::bernoulli_distribution keep(density);
  while (true) {
    std::vector<E> edges;
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (keep(rng)) edges.push_back({u, v, rate(rng)});
      }
    }
    if (connected_positive(n, edges)) return make_graph(n, edges);
  }
}

inline Rational random_rational(std::mt19937_64& rng, int max_num, int max_den, int min_num = 1) {
  std::uniform_int_distribution<int> num(min_num, max_num), den(1, max_den);
  return Rational(num(rng), den(rng));
}

/// Independent partition oracle: recursive block assignment (vertex v joins
/// an existing block or opens a new one), evaluated directly.
inline Rational oracle_rate(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<int> block(n, -1);
  bool have = false;
  Rational best;
  std::function<void(std::size_t, int)> assign = [&](std::size_t v, int used) {
    if (v == n) {
      if (used < 2) return;
      Rational cut;
      for (const auto& e : g.edges()) {
        if (block[e.key.u] != block[e.key.v]) cut += e.rate;
      }
      Rational value = cut / Rational(used - 1);
      if (!have || value < best) {
        best = value;
        have = true;
      }
      return;
    }
    for (int b = 0; b <= used; ++b) {
      block[v] = b;
      assign(v + 1, std::max(used, b + 1));
    }
  };
  assign(0, 0);
  return best;
}

/// floor of n times the oracle rate, computed as a minimum of floors.
inline std::int64_t oracle_length(const WeightedGraph& g, std::int64_t rounds) {
  const std::size_t n = g.node_count();
  std::vector<int> block(n, -1);
  std::int64_t best = -1;
  std::function<void(std::size_t, int)> assign = [&](std::size_t v, int used) {
    if (v == n) {
      if (used < 2) return;
      Rational cut;
      for (const auto& e : g.edges()) {
        if (block[e.key.u] != block[e.key.v]) cut += e.rate * Rational(rounds);
      }
      std::int64_t value = Rational(mpq_class((cut / Rational(used - 1)).floor())).to_int64();
      if (best < 0 || value < best) best = value;
      return;
    }
    for (int b = 0; b <= used; ++b) {
      block[v] = b;
      assign(v + 1, std::max(used, b + 1));
    }
  };
  assign(0, 0);
  return best;
}

inline constexpr std::uint64_t kBell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};

/// All connected graphs on n nodes whose edges carry rates from `rates`
/// (absent edges allowed), visited once each.
inline void for_each_small_graph(int n, const std::vector<int>& rates,
                                 const std::function<void(const WeightedGraph&)>& visit) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) slots.emplace_back(u, v);
  }
  const std::size_t choices = rates.size() + 1;  // 0 = absent
  std::vector<std::size_t> pick(slots.size(), 0);
  while (true) {
    std::vector<E> edges;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (pick[s] > 0) edges.push_back({slots[s].first, slots[s].second, rates[pick[s] - 1]});
    }
    if (connected_positive(n, edges)) visit(make_graph(n, edges));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices) pick[i++] = 0;
    if (i == pick.size()) break;
  }
}

}  // namespace qnet::testing
