#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/rational.hpp"

namespace qnet {

enum class PackingMode { Weighted, Multigraph };
enum class PackingSource { Heuristic, Oracle, Manual };

/// A spanning-tree packing in one of two equivalent forms:
///  - weighted: trees with rational weights w, sum over trees containing e of
///    w <= r_e; rate = sum of w.
///  - multigraph: n rounds, each tree used `multiplicity` times; per-edge usage
///    <= n r_e; rate = (sum of multiplicities) / n.
struct TreePacking {
  PackingMode mode = PackingMode::Weighted;
  PackingSource source = PackingSource::Manual;
  std::vector<SpanningTree> trees;
  std::vector<Rational> weights;            // weighted mode
  std::vector<std::int64_t> multiplicity;   // multigraph mode
  std::int64_t rounds = 1;                  // multigraph mode

  static TreePacking weighted(std::vector<SpanningTree> trees, std::vector<Rational> weights,
                              PackingSource source = PackingSource::Manual);
  static TreePacking multigraph(std::vector<SpanningTree> trees, std::int64_t rounds,
                                PackingSource source = PackingSource::Manual);
  static TreePacking multigraph(std::vector<SpanningTree> trees, std::vector<std::int64_t> multiplicity,
                                std::int64_t rounds, PackingSource source = PackingSource::Manual);

  /// Sum of multiplicities (multigraph mode); throws in weighted mode.
  std::int64_t tree_count() const;
  /// Every tree instance, repeated by multiplicity, in stored order.
  std::vector<SpanningTree> expanded() const;
};

struct PackingCheck {
  bool valid = true;
  std::optional<EdgeKey> edge;  // first over-used edge, or the edge that is not in g
  std::optional<std::size_t> tree;
  std::string reason;
};

/// Checks every tree spans g and every edge capacity holds exactly.
PackingCheck validate_packing(const WeightedGraph& g, const TreePacking& pk);

Rational packing_rate(const TreePacking& pk);

/// Collapses repeated trees (first-appearance order); w = count / n.
TreePacking weighted_from_multigraph(const TreePacking& pk);
/// n = lcm of weight denominators; each tree used n w times. Zero weights drop.
TreePacking multigraph_from_weighted(const TreePacking& pk);

/// Per-edge total usage (weighted: sum of w; multigraph: count / n), edges() order.
std::vector<Rational> edge_usage(const WeightedGraph& g, const TreePacking& pk);

std::string to_string(PackingMode mode);
std::string to_string(PackingSource source);

}  // namespace qnet
