#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/limits.hpp"
#include "qnet/rational.hpp"

namespace qnet {

/// Index of a node in WeightedGraph::labels().
using VertexId = std::size_t;

/// Canonical undirected edge identity: endpoints ordered by vertex index.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  EdgeKey() = default;
  EdgeKey(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  bool touches(VertexId x) const { return u == x || v == x; }
  VertexId other(VertexId x) const { return x == u ? v : u; }

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct Edge {
  EdgeKey key;
  Rational rate;
  Rational epsilon;
};

/// Undirected graph with exact per-edge key rates and security parameters.
/// Edges are kept sorted by key; parallel links must already be merged.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  /// Validates: unique labels, endpoints in range, no self-loops, no duplicate
  /// pairs, nonnegative rates and epsilons.
  WeightedGraph(std::vector<std::string> labels, std::vector<Edge> edges);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(VertexId v) const { return labels_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }

  std::optional<VertexId> find_node(std::string_view label) const;
  std::optional<std::size_t> find_edge(EdgeKey key) const;
  /// Throws Error(UnknownNode).
  VertexId node(std::string_view label) const;

  Rational total_rate() const;
  /// r[E_i]: total rate of the edges incident to `v`.
  Rational incident_rate(VertexId v) const;
  bool has_integer_rates() const;

  /// Adds a link, or raises the rate of an existing one.
  WeightedGraph with_link(EdgeKey key, const Rational& rate, const Rational& epsilon = 0) const;
  /// Multiplies every rate by `factor` (>= 0).
  WeightedGraph scaled(const Rational& factor) const;
  /// Replaces every rate; `rates` follows edges() order.
  WeightedGraph with_rates(std::span<const Rational> rates) const;

  std::string edge_label(EdgeKey key) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
};

/// Partition of the vertex set into nonempty disjoint blocks. Blocks are kept
/// sorted internally and ordered by their smallest vertex, which is the
/// restricted-growth-string normal form.
class VertexPartition {
 public:
  VertexPartition() = default;

  /// Throws Error(InvalidPartition) unless `blocks` partitions {0..n-1}.
  static VertexPartition from_blocks(std::size_t n, std::vector<std::vector<VertexId>> blocks);
  /// rgs[v] is the block of v; must be a restricted growth string.
  static VertexPartition from_growth_string(std::span<const std::uint8_t> rgs);
  static VertexPartition finest(std::size_t n);

  std::size_t node_count() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<VertexId>>& blocks() const { return blocks_; }
  std::size_t block_of(VertexId v) const { return block_of_.at(v); }
  bool is_finest() const { return blocks_.size() == block_of_.size(); }

  std::vector<std::vector<std::string>> labelled(const WeightedGraph& g) const;

  friend bool operator==(const VertexPartition& a, const VertexPartition& b) {
    return a.block_of_ == b.block_of_;
  }

 private:
  std::vector<std::vector<VertexId>> blocks_;
  std::vector<std::size_t> block_of_;
};

struct SpanningTree {
  std::vector<EdgeKey> edges;  // sorted

  SpanningTree() = default;
  explicit SpanningTree(std::vector<EdgeKey> e);

  friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
};

/// The multigraph (V, E, {floor(n r_e)}) seen after n rounds.
struct Multigraph {
  WeightedGraph base;
  std::int64_t rounds = 1;
  std::vector<std::int64_t> multiplicity;  // per base edge

  Multigraph(WeightedGraph g, std::int64_t n);
};

bool is_connected(const WeightedGraph& g, bool positive_only = true);

/// Visits every partition with at least two blocks, in restricted-growth-string
/// lexicographic order. The callback receives the growth string and the block
/// count. Throws Error(ExactModeLimit) when n exceeds limits.partition_nodes.
void for_each_partition(std::size_t n, const Limits& limits,
                        const std::function<void(std::span<const std::uint8_t>, std::size_t)>& visit);

std::vector<VertexPartition> enumerate_partitions(const WeightedGraph& g, const Limits& limits = {});

/// Indices (into g.edges()) of edges whose endpoints lie in different blocks.
std::vector<std::size_t> cross_edges(const WeightedGraph& g, const VertexPartition& p);

/// Contracted graph plus the correspondence back to the original edges.
struct Contraction {
  WeightedGraph graph;
  VertexPartition partition;
  /// members[i]: original edge indices merged into contracted edge i.
  std::vector<std::vector<std::size_t>> members;
};

Contraction contract_with_map(const WeightedGraph& g, const VertexPartition& p);
/// One node per block; parallel cross edges merged with summed rate and epsilon.
WeightedGraph contract(const WeightedGraph& g, const VertexPartition& p);

/// Subgraph on `subset` (any order, no duplicates); vertices keep their relative
/// order. Throws Error(InvalidSubset) for empty or invalid subsets.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> subset);

/// Visits every spanning tree of the positive-rate edge set exactly once, in
/// lexicographic order of sorted edge lists. Throws Error(OracleLimit) once more
/// than limits.max_trees trees would be produced.
void for_each_spanning_tree(const WeightedGraph& g, const Limits& limits,
                            const std::function<void(const SpanningTree&)>& visit);

std::vector<SpanningTree> enumerate_spanning_trees(const WeightedGraph& g, const Limits& limits = {});

/// N-1 edges present in g, acyclic and spanning.
bool is_spanning_tree(const WeightedGraph& g, const SpanningTree& t);

/// Union-find over vertex indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t components_;
};

}  // namespace qnet
