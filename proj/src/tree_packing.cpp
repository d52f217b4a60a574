#include "qnet/tree_packing.hpp"

#include <algorithm>
#include <map>

#include "qnet/error.hpp"

namespace qnet {

TreePacking TreePacking::weighted(std::vector<SpanningTree> trees, std::vector<Rational> weights,
                                  PackingSource source) {
  if (trees.size() != weights.size()) {
    throw Error(ErrorCode::InvalidPacking, "tree and weight counts differ");
  }
  for (const auto& w : weights) {
    if (w.sign() < 0) throw Error(ErrorCode::InvalidPacking, "negative tree weight");
  }
  TreePacking pk;
  pk.mode = PackingMode::Weighted;
  pk.source = source;
  pk.trees = std::move(trees);
  pk.weights = std::move(weights);
  return pk;
}

TreePacking TreePacking::multigraph(std::vector<SpanningTree> trees, std::int64_t rounds, PackingSource source) {
  std::vector<std::int64_t> ones(trees.size(), 1);
  return multigraph(std::move(trees), std::move(ones), rounds, source);
}

TreePacking TreePacking::multigraph(std::vector<SpanningTree> trees, std::vector<std::int64_t> multiplicity,
                                    std::int64_t rounds, PackingSource source) {
  if (trees.size() != multiplicity.size()) {
    throw Error(ErrorCode::InvalidPacking, "tree and multiplicity counts differ");
  }
  if (rounds <= 0) throw Error(ErrorCode::InvalidPacking, "rounds must be positive");
  if (std::any_of(multiplicity.begin(), multiplicity.end(), [](std::int64_t m) { return m < 0; })) {
    throw Error(ErrorCode::InvalidPacking, "negative multiplicity");
  }
  TreePacking pk;
  pk.mode = PackingMode::Multigraph;
  pk.source = source;
  pk.trees = std::move(trees);
  pk.multiplicity = std::move(multiplicity);
  pk.rounds = rounds;
  return pk;
}

std::int64_t TreePacking::tree_count() const {
  if (mode != PackingMode::Multigraph) {
    throw Error(ErrorCode::InvalidPacking, "tree count is defined for multigraph packings");
  }
  std::int64_t k = 0;
  for (auto m : multiplicity) k += m;
  return k;
}

std::vector<SpanningTree> TreePacking::expanded() const {
  if (mode != PackingMode::Multigraph) return trees;
  std::vector<SpanningTree> out;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::int64_t c = 0; c < multiplicity[i]; ++c) out.push_back(trees[i]);
  }
  return out;
}

std::vector<Rational> edge_usage(const WeightedGraph& g, const TreePacking& pk) {
  std::vector<Rational> usage(g.edge_count());
  for (std::size_t t = 0; t < pk.trees.size(); ++t) {
    Rational amount = pk.mode == PackingMode::Weighted
                          ? pk.weights[t]
                          : Rational(pk.multiplicity[t], pk.rounds);
    for (const auto& key : pk.trees[t].edges) {
      if (auto idx = g.find_edge(key)) usage[*idx] += amount;
    }
  }
  return usage;
}

PackingCheck validate_packing(const WeightedGraph& g, const TreePacking& pk) {
  PackingCheck check;
  for (std::size_t t = 0; t < pk.trees.size(); ++t) {
    const auto& tree = pk.trees[t];
    for (const auto& key : tree.edges) {
      if (!g.find_edge(key)) {
        return PackingCheck{false, key, t, "tree uses edge " + g.edge_label(key) + " not in the graph"};
      }
    }
    if (!is_spanning_tree(g, tree)) {
      return PackingCheck{false, std::nullopt, t, "tree " + std::to_string(t) + " is not a spanning tree"};
    }
  }
  // usage is already divided by n in multigraph mode, so both modes compare to r_e.
  auto usage = edge_usage(g, pk);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (usage[i] > g.edge(i).rate) {
      const auto& key = g.edge(i).key;
      std::optional<std::size_t> first_tree;
      for (std::size_t t = 0; t < pk.trees.size() && !first_tree; ++t) {
        if (std::binary_search(pk.trees[t].edges.begin(), pk.trees[t].edges.end(), key)) first_tree = t;
      }
      return PackingCheck{false, key, first_tree,
                          "edge " + g.edge_label(key) + " used " + usage[i].pretty() + " > capacity " +
                              g.edge(i).rate.pretty()};
    }
  }
  return check;
}

Rational packing_rate(const TreePacking& pk) {
  if (pk.mode == PackingMode::Weighted) {
    Rational sum;
    for (const auto& w : pk.weights) sum += w;
    return sum;
  }
  return Rational(pk.tree_count(), pk.rounds);
}

TreePacking weighted_from_multigraph(const TreePacking& pk) {
  if (pk.mode == PackingMode::Weighted) return pk;
  std::vector<SpanningTree> trees;
  std::vector<std::int64_t> counts;
  std::map<SpanningTree, std::size_t> slot;
  for (std::size_t i = 0; i < pk.trees.size(); ++i) {
    if (pk.multiplicity[i] == 0) continue;
    auto [it, inserted] = slot.emplace(pk.trees[i], trees.size());
    if (inserted) {
      trees.push_back(pk.trees[i]);
      counts.push_back(0);
    }
    counts[it->second] += pk.multiplicity[i];
  }
  std::vector<Rational> weights;
  for (auto c : counts) weights.push_back(Rational(c, pk.rounds));
  return TreePacking::weighted(std::move(trees), std::move(weights), pk.source);
}

TreePacking multigraph_from_weighted(const TreePacking& pk) {
  if (pk.mode == PackingMode::Multigraph) return pk;
  mpz_class n = 1;
  for (const auto& w : pk.weights) {
    if (!w.is_zero()) n = lcm(n, w.denominator());
  }
  if (!n.fits_slong_p()) throw Error(ErrorCode::Overflow, "round count does not fit in 64 bits");
  const std::int64_t rounds = n.get_si();
  std::vector<SpanningTree> trees;
  std::vector<std::int64_t> mult;
  for (std::size_t i = 0; i < pk.trees.size(); ++i) {
    if (pk.weights[i].is_zero()) continue;
    trees.push_back(pk.trees[i]);
    mult.push_back((pk.weights[i] * Rational(rounds)).to_int64());
  }
  return TreePacking::multigraph(std::move(trees), std::move(mult), rounds, pk.source);
}

std::string to_string(PackingMode mode) {
  return mode == PackingMode::Weighted ? "weighted" : "multigraph";
}

std::string to_string(PackingSource source) {
  switch (source) {
    case PackingSource::Heuristic: return "heuristic";
    case PackingSource::Oracle: return "oracle";
    case PackingSource::Manual: return "manual";
  }
  return "manual";
}

}  // namespace qnet
