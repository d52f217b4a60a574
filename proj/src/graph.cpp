#include "qnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "qnet/error.hpp"

namespace qnet {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

// ---------------------------------------------------------------------------
// WeightedGraph

WeightedGraph::WeightedGraph(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw Error(ErrorCode::DuplicateNode, "node '" + l + "' listed twice");
  }
  for (auto& e : edges_) {
    if (e.key.u >= labels_.size() || e.key.v >= labels_.size()) {
      throw Error(ErrorCode::UnknownNode, "edge endpoint out of range");
    }
    if (e.key.u == e.key.v) {
      throw Error(ErrorCode::SelfLoop, "self-loop at node '" + labels_[e.key.u] + "'");
    }
    e.key = EdgeKey(e.key.u, e.key.v);
    if (e.rate.sign() < 0 || e.epsilon.sign() < 0) {
      throw Error(ErrorCode::NegativeValue, "negative rate or epsilon on edge " + edge_label(e.key));
    }
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].key == edges_[i - 1].key) {
      throw Error(ErrorCode::DuplicateEdge, "edge " + edge_label(edges_[i].key) + " listed twice");
    }
  }
}

std::optional<VertexId> WeightedGraph::find_node(std::string_view label) const {
  for (VertexId v = 0; v < labels_.size(); ++v) {
    if (labels_[v] == label) return v;
  }
  return std::nullopt;
}

VertexId WeightedGraph::node(std::string_view label) const {
  auto v = find_node(label);
  if (!v) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(label) + "'");
  return *v;
}

std::optional<std::size_t> WeightedGraph::find_edge(EdgeKey key) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                             [](const Edge& e, const EdgeKey& k) { return e.key < k; });
  if (it == edges_.end() || it->key != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

Rational WeightedGraph::total_rate() const {
  Rational sum;
  for (const auto& e : edges_) sum += e.rate;
  return sum;
}

Rational WeightedGraph::incident_rate(VertexId v) const {
  Rational sum;
  for (const auto& e : edges_) {
    if (e.key.touches(v)) sum += e.rate;
  }
  return sum;
}

bool WeightedGraph::has_integer_rates() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.rate.is_integer(); });
}

WeightedGraph WeightedGraph::with_link(EdgeKey key, const Rational& rate, const Rational& epsilon) const {
  auto edges = edges_;
  if (auto idx = find_edge(key)) {
    edges[*idx].rate += rate;
    edges[*idx].epsilon += epsilon;
  } else {
    edges.push_back(Edge{key, rate, epsilon});
  }
  return WeightedGraph(labels_, std::move(edges));
}

WeightedGraph WeightedGraph::scaled(const Rational& factor) const {
  auto edges = edges_;
  for (auto& e : edges) e.rate *= factor;
  return WeightedGraph(labels_, std::move(edges));
}

WeightedGraph WeightedGraph::with_rates(std::span<const Rational> rates) const {
  if (rates.size() != edges_.size()) {
    throw Error(ErrorCode::MalformedInput, "rate vector length does not match edge count");
  }
  auto edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].rate = rates[i];
  return WeightedGraph(labels_, std::move(edges));
}

std::string WeightedGraph::edge_label(EdgeKey key) const {
  auto name = [&](VertexId v) { return v < labels_.size() ? labels_[v] : std::to_string(v); };
  return "(" + name(key.u) + "," + name(key.v) + ")";
}

// ---------------------------------------------------------------------------
// VertexPartition

VertexPartition VertexPartition::from_blocks(std::size_t n, std::vector<std::vector<VertexId>> blocks) {
  VertexPartition p;
  p.block_of_.assign(n, n);
  for (auto& b : blocks) {
    if (b.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (VertexId v : blocks[i]) {
      if (v >= n) throw Error(ErrorCode::InvalidPartition, "vertex out of range");
      if (p.block_of_[v] != n) throw Error(ErrorCode::InvalidPartition, "vertex in two blocks");
      p.block_of_[v] = i;
    }
  }
  if (std::find(p.block_of_.begin(), p.block_of_.end(), n) != p.block_of_.end()) {
    throw Error(ErrorCode::InvalidPartition, "blocks do not cover every vertex");
  }
  p.blocks_ = std::move(blocks);
  return p;
}

VertexPartition VertexPartition::from_growth_string(std::span<const std::uint8_t> rgs) {
  VertexPartition p;
  p.block_of_.resize(rgs.size());
  for (std::size_t v = 0; v < rgs.size(); ++v) {
    std::size_t b = rgs[v];
    if (b > p.blocks_.size()) throw Error(ErrorCode::InvalidPartition, "not a restricted growth string");
    if (b == p.blocks_.size()) p.blocks_.emplace_back();
    p.blocks_[b].push_back(v);
    p.block_of_[v] = b;
  }
  return p;
}

VertexPartition VertexPartition::finest(std::size_t n) {
  std::vector<std::vector<VertexId>> blocks(n);
  for (std::size_t v = 0; v < n; ++v) blocks[v] = {v};
  return from_blocks(n, std::move(blocks));
}

std::vector<std::vector<std::string>> VertexPartition::labelled(const WeightedGraph& g) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& b : blocks_) {
    auto& names = out.emplace_back();
    for (VertexId v : b) names.push_back(g.label(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

SpanningTree::SpanningTree(std::vector<EdgeKey> e) : edges(std::move(e)) {
  std::sort(edges.begin(), edges.end());
}

Multigraph::Multigraph(WeightedGraph g, std::int64_t n) : base(std::move(g)), rounds(n) {
  if (n <= 0) throw Error(ErrorCode::MalformedInput, "rounds must be positive");
  multiplicity.reserve(base.edge_count());
  for (const auto& e : base.edges()) {
    Rational scaled = e.rate * Rational(n);
    multiplicity.push_back(Rational(mpq_class(scaled.floor())).to_int64());
  }
}

bool is_connected(const WeightedGraph& g, bool positive_only) {
  if (g.node_count() == 0) return true;
  DisjointSets ds(g.node_count());
  for (const auto& e : g.edges()) {
    if (positive_only && e.rate.is_zero()) continue;
    ds.unite(e.key.u, e.key.v);
  }
  return ds.components() == 1;
}

void for_each_partition(std::size_t n, const Limits& limits,
                        const std::function<void(std::span<const std::uint8_t>, std::size_t)>& visit) {
  if (n > limits.partition_nodes) {
    throw Error(ErrorCode::ExactModeLimit, "partition enumeration over " + std::to_string(n) +
                                               " nodes exceeds cap " + std::to_string(limits.partition_nodes));
  }
  if (n < 2) return;
  // rgs[i] <= 1 + max(rgs[0..i-1]); prefix_max[i] = max(rgs[0..i]).
  std::vector<std::uint8_t> rgs(n, 0);
  std::vector<std::uint8_t> prefix_max(n, 0);
  while (true) {
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
    visit(rgs, static_cast<std::size_t>(prefix_max[n - 1]) + 1);
  }
}

std::vector<VertexPartition> enumerate_partitions(const WeightedGraph& g, const Limits& limits) {
  std::vector<VertexPartition> out;
  for_each_partition(g.node_count(), limits, [&](std::span<const std::uint8_t> rgs, std::size_t) {
    out.push_back(VertexPartition::from_growth_string(rgs));
  });
  return out;
}

std::vector<std::size_t> cross_edges(const WeightedGraph& g, const VertexPartition& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& k = g.edge(i).key;
    if (p.block_of(k.u) != p.block_of(k.v)) out.push_back(i);
  }
  return out;
}

Contraction contract_with_map(const WeightedGraph& g, const VertexPartition& p) {
  if (p.node_count() != g.node_count()) {
    throw Error(ErrorCode::InvalidPartition, "partition does not match the graph");
  }
  std::vector<std::string> labels;
  for (const auto& block : p.blocks()) {
    std::string name;
    for (VertexId v : block) {
      if (!name.empty()) name += "+";
      name += g.label(v);
    }
    labels.push_back(std::move(name));
  }
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::pair<EdgeKey, std::size_t>> slot;  // contracted key -> position
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    std::size_t a = p.block_of(e.key.u);
    std::size_t b = p.block_of(e.key.v);
    if (a == b) continue;
    EdgeKey key(a, b);
    auto it = std::find_if(slot.begin(), slot.end(), [&](const auto& s) { return s.first == key; });
    if (it == slot.end()) {
      slot.emplace_back(key, edges.size());
      edges.push_back(Edge{key, e.rate, e.epsilon});
      members.push_back({i});
    } else {
      edges[it->second].rate += e.rate;
      edges[it->second].epsilon += e.epsilon;
      members[it->second].push_back(i);
    }
  }
  // WeightedGraph sorts edges by key; reorder members the same way.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return edges[x].key < edges[y].key; });
  std::vector<std::vector<std::size_t>> sorted_members;
  sorted_members.reserve(order.size());
  for (std::size_t idx : order) sorted_members.push_back(std::move(members[idx]));
  return Contraction{WeightedGraph(std::move(labels), std::move(edges)), p, std::move(sorted_members)};
}

WeightedGraph contract(const WeightedGraph& g, const VertexPartition& p) { return contract_with_map(g, p).graph; }

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> subset) {
  if (subset.empty()) throw Error(ErrorCode::InvalidSubset, "empty vertex subset");
  std::vector<VertexId> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= g.node_count()) {
    throw Error(ErrorCode::InvalidSubset, "subset has duplicates or unknown vertices");
  }
  std::vector<std::size_t> index(g.node_count(), g.node_count());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    index[sorted[i]] = i;
    labels.push_back(g.label(sorted[i]));
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (index[e.key.u] == g.node_count() || index[e.key.v] == g.node_count()) continue;
    edges.push_back(Edge{EdgeKey(index[e.key.u], index[e.key.v]), e.rate, e.epsilon});
  }
  return WeightedGraph(std::move(labels), std::move(edges));
}

namespace {

struct TreeSearch {
  std::size_t n;
  std::vector<EdgeKey> candidates;
  const Limits& limits;
  const std::function<void(const SpanningTree&)>& visit;
  std::vector<EdgeKey> chosen;
  std::size_t produced = 0;

  // Can the components of `ds` still be joined using candidates[from..]?
  bool completable(const DisjointSets& ds, std::size_t from) const {
    DisjointSets probe = ds;
    for (std::size_t i = from; i < candidates.size() && probe.components() > 1; ++i) {
      probe.unite(candidates[i].u, candidates[i].v);
    }
    return probe.components() == 1;
  }

  void run(DisjointSets ds, std::size_t next) {
    if (chosen.size() + 1 == n) {
      if (++produced > limits.max_trees) {
        throw Error(ErrorCode::OracleLimit,
                    "more than " + std::to_string(limits.max_trees) + " spanning trees");
      }
      visit(SpanningTree(chosen));
      return;
    }
    if (next >= candidates.size()) return;
    const EdgeKey e = candidates[next];
    if (ds.find(e.u) != ds.find(e.v)) {
      DisjointSets with = ds;
      with.unite(e.u, e.v);
      chosen.push_back(e);
      run(with, next + 1);
      chosen.pop_back();
    }
    if (completable(ds, next + 1)) run(std::move(ds), next + 1);
  }
};

}  // namespace

void for_each_spanning_tree(const WeightedGraph& g, const Limits& limits,
                            const std::function<void(const SpanningTree&)>& visit) {
  if (g.node_count() == 0) return;
  TreeSearch search{g.node_count(), {}, limits, visit, {}, 0};
  for (const auto& e : g.edges()) {
    if (e.rate.sign() > 0) search.candidates.push_back(e.key);
  }
  DisjointSets ds(g.node_count());
  if (g.node_count() == 1) {
    visit(SpanningTree{});
    return;
  }
  if (!search.completable(ds, 0)) return;
  search.run(std::move(ds), 0);
}

std::vector<SpanningTree> enumerate_spanning_trees(const WeightedGraph& g, const Limits& limits) {
  std::vector<SpanningTree> out;
  for_each_spanning_tree(g, limits, [&](const SpanningTree& t) { out.push_back(t); });
  return out;
}

bool is_spanning_tree(const WeightedGraph& g, const SpanningTree& t) {
  if (g.node_count() == 0 || t.edges.size() + 1 != g.node_count()) return false;
  DisjointSets ds(g.node_count());
  for (const auto& e : t.edges) {
    if (e.u == e.v || !g.find_edge(e)) return false;
    if (!ds.unite(e.u, e.v)) return false;
  }
  return ds.components() == 1;
}

}  // namespace qnet
