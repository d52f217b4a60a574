#include "qnet/packing.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "qnet/error.hpp"
#include "qnet/lp.hpp"
#include "qnet/rate.hpp"

namespace qnet {
namespace {

using json = nlohmann::ordered_json;
using EdgeList = std::vector<std::size_t>;  // indices into g.edges()

void require_integer_connected(const WeightedGraph& g) {
  if (g.node_count() < 2) throw Error(ErrorCode::TrivialNetwork, "packing needs at least two nodes");
  if (!g.has_integer_rates()) throw Error(ErrorCode::PreconditionFailed, "heuristic packing needs integer rates");
  if (!is_connected(g, true)) throw Error(ErrorCode::Disconnected, "positive-rate links do not connect the network");
}

std::vector<std::int64_t> integer_rates(const WeightedGraph& g, std::int64_t factor) {
  std::vector<std::int64_t> out;
  for (const auto& e : g.edges()) out.push_back((e.rate * Rational(factor)).to_int64());
  return out;
}

SpanningTree to_tree(const WeightedGraph& g, const EdgeList& idx) {
  std::vector<EdgeKey> keys;
  for (auto i : idx) keys.push_back(g.edge(i).key);
  return SpanningTree(std::move(keys));
}

EdgeList to_indices(const WeightedGraph& g, const SpanningTree& t) {
  EdgeList out;
  for (const auto& k : t.edges) out.push_back(*g.find_edge(k));
  return out;
}

json residual_json(const WeightedGraph& g, const std::vector<std::int64_t>& res) {
  json arr = json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (res[i] == 0) continue;
    arr.push_back({{"u", g.label(g.edge(i).key.u)}, {"v", g.label(g.edge(i).key.v)}, {"capacity", res[i]}});
  }
  return arr;
}

json trees_json(const WeightedGraph& g, const std::vector<EdgeList>& trees) {
  json arr = json::array();
  for (const auto& t : trees) {
    json edges = json::array();
    for (auto i : t) edges.push_back({g.label(g.edge(i).key.u), g.label(g.edge(i).key.v)});
    arr.push_back(edges);
  }
  return arr;
}

PackingOutcome finish(const WeightedGraph& g, TreePacking packing, PackingDiagnostics diag, const Limits& limits) {
  if (auto check = validate_packing(g, packing); !check.valid) {
    throw Error(ErrorCode::HeuristicFailed, "produced packing is invalid: " + check.reason);
  }
  PackingOutcome out;
  out.achieved_rate = packing_rate(packing);
  out.packing = std::move(packing);
  out.diagnostics = std::move(diag);
  if (!is_connected(g, true)) {
    out.optimum = Rational(0);
  } else {
    try {
      out.optimum = nwt_rate(g, limits).rate;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExactModeLimit) throw;
      out.diagnostics.notes.push_back("optimum not checked: network exceeds the exact-mode cap");
    }
  }
  out.optimal = out.optimum && *out.optimum == out.achieved_rate;
  return out;
}

// ---- basic search: greedy heavy trees, then a bounded search -----------------

class BasicSearch {
 public:
  BasicSearch(const WeightedGraph& g, const Limits& limits, std::vector<std::int64_t> residual)
      : g_(g), limits_(limits), res_(std::move(residual)) {}

  bool run(std::int64_t remaining) {
    if (remaining == 0) return true;
    if (++nodes_ > limits_.backtrack_nodes) {
      budget_hit_ = true;
      return false;
    }
    if (!plausible(remaining)) return false;
    if (remaining == 1) return take_last();

    auto greedy = max_weight_tree();
    if (!greedy) return false;
    if (attempt(*greedy, remaining)) return true;
    if (budget_hit_) return false;

    for (const auto& candidate : alternatives(*greedy)) {
      if (attempt(candidate, remaining)) return true;
      if (budget_hit_) return false;
    }
    return false;
  }

  const std::vector<EdgeList>& trees() const { return chosen_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t backtracks() const { return backtracks_; }
  bool budget_hit() const { return budget_hit_; }
  const std::vector<EdgeList>& deepest_trees() const { return deepest_; }
  const std::vector<std::int64_t>& deepest_residual() const { return deepest_res_; }

 private:
  bool attempt(const EdgeList& tree, std::int64_t remaining) {
    for (auto i : tree) --res_[i];
    chosen_.push_back(tree);
    if (chosen_.size() > deepest_.size() || deepest_res_.empty()) {
      deepest_ = chosen_;
      deepest_res_ = res_;
    }
    if (run(remaining - 1)) return true;
    chosen_.pop_back();
    for (auto i : tree) ++res_[i];
    ++backtracks_;
    return false;
  }

  // Each remaining tree needs one edge at every vertex and the support must stay connected.
  bool plausible(std::int64_t remaining) const {
    std::vector<std::int64_t> degree(g_.node_count(), 0);
    DisjointSets dsu(g_.node_count());
    for (std::size_t i = 0; i < res_.size(); ++i) {
      if (res_[i] <= 0) continue;
      degree[g_.edge(i).key.u] += res_[i];
      degree[g_.edge(i).key.v] += res_[i];
      dsu.unite(g_.edge(i).key.u, g_.edge(i).key.v);
    }
    if (dsu.components() != 1) return false;
    return std::all_of(degree.begin(), degree.end(), [&](std::int64_t d) { return d >= remaining; });
  }

  bool take_last() {
    EdgeList last;
    for (std::size_t i = 0; i < res_.size(); ++i) {
      if (res_[i] == 0) continue;
      if (res_[i] != 1) return false;
      last.push_back(i);
    }
    if (last.size() != g_.node_count() - 1) return false;
    DisjointSets dsu(g_.node_count());
    for (auto i : last) {
      if (!dsu.unite(g_.edge(i).key.u, g_.edge(i).key.v)) return false;
    }
    for (auto i : last) --res_[i];
    chosen_.push_back(std::move(last));
    return true;
  }

  // Kruskal on descending residual weight; equal weights in edge-key order.
  std::optional<EdgeList> max_weight_tree() const {
    EdgeList order;
    for (std::size_t i = 0; i < res_.size(); ++i) {
      if (res_[i] > 0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return res_[a] > res_[b]; });
    DisjointSets dsu(g_.node_count());
    EdgeList tree;
    for (auto i : order) {
      if (dsu.unite(g_.edge(i).key.u, g_.edge(i).key.v)) tree.push_back(i);
    }
    if (tree.size() != g_.node_count() - 1) return std::nullopt;
    std::sort(tree.begin(), tree.end());
    return tree;
  }

  std::int64_t weight(const EdgeList& t) const {
    std::int64_t w = 0;
    for (auto i : t) w += res_[i];
    return w;
  }

  // Other trees of the residual support, heaviest first.
  std::vector<EdgeList> alternatives(const EdgeList& skip) const {
    std::vector<Rational> support;
    for (auto r : res_) support.emplace_back(r > 0 ? 1L : 0L);
    WeightedGraph residual = g_.with_rates(support);
    Limits capped = limits_;
    capped.max_trees = std::min(limits_.max_trees, limits_.backtrack_nodes);
    std::vector<EdgeList> out;
    try {
      for_each_spanning_tree(residual, capped, [&](const SpanningTree& t) {
        EdgeList idx = to_indices(g_, t);
        if (idx != skip) out.push_back(std::move(idx));
      });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OracleLimit) throw;
    }
    std::stable_sort(out.begin(), out.end(),
                     [&](const EdgeList& a, const EdgeList& b) { return weight(a) > weight(b); });
    return out;
  }

  const WeightedGraph& g_;
  const Limits& limits_;
  std::vector<std::int64_t> res_;
  std::vector<EdgeList> chosen_;
  std::vector<EdgeList> deepest_;
  std::vector<std::int64_t> deepest_res_;
  std::size_t nodes_ = 0;
  std::size_t backtracks_ = 0;
  bool budget_hit_ = false;
};

struct OracleRun {
  std::vector<EdgeList> trees;
  std::size_t states = 0;
};

OracleRun oracle_search(const WeightedGraph& g, std::int64_t rounds, const Limits& limits);

TreePacking basic_core(const WeightedGraph& g, const Limits& limits, PackingDiagnostics& diag) {
  const std::size_t n = g.node_count();
  const auto rounds = static_cast<std::int64_t>(n - 1);
  auto residual = integer_rates(g, rounds);
  const std::int64_t total = std::accumulate(residual.begin(), residual.end(), std::int64_t{0}) / rounds;

  BasicSearch search(g, limits, residual);
  const bool ok = search.run(total);
  diag.search_nodes += search.nodes();
  diag.backtracks += search.backtracks();
  if (ok) {
    std::vector<SpanningTree> trees;
    for (const auto& t : search.trees()) trees.push_back(to_tree(g, t));
    return TreePacking::multigraph(std::move(trees), rounds, PackingSource::Heuristic);
  }

  diag.fallback_used = true;
  diag.notes.push_back(search.budget_hit() ? "search budget exhausted; used the exhaustive oracle"
                                           : "greedy search failed; used the exhaustive oracle");
  json partial = {{"trees_found", search.deepest_trees().size()},
                  {"trees_needed", total},
                  {"rounds", rounds},
                  {"search_nodes", search.nodes()},
                  {"trees", trees_json(g, search.deepest_trees())},
                  {"residual", residual_json(g, search.deepest_residual())}};
  try {
    OracleRun oracle = oracle_search(g, rounds, limits);
    diag.oracle_states += oracle.states;
    if (static_cast<std::int64_t>(oracle.trees.size()) == total) {
      std::vector<SpanningTree> trees;
      for (const auto& t : oracle.trees) trees.push_back(to_tree(g, t));
      return TreePacking::multigraph(std::move(trees), rounds, PackingSource::Oracle);
    }
    partial["oracle_trees"] = oracle.trees.size();
  } catch (const Error& e) {
    if (classify(e.code()) != ErrorClass::ResourceLimit) throw;
    partial["oracle_error"] = std::string(to_string(e.code()));
  }
  throw Error(ErrorCode::HeuristicFailed, "basic algorithm could not complete the packing", partial.dump());
}

// ---- exhaustive oracle -----------------------------------------------------------

class Oracle {
 public:
  Oracle(const WeightedGraph& g, std::vector<EdgeList> trees, const Limits& limits)
      : g_(g), trees_(std::move(trees)), limits_(limits) {}

  int solve(std::vector<std::int64_t>& res) {
    const int bound = upper_bound(res);
    if (bound == 0) return 0;
    std::string key = encode(res);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.first;

    int best = 0;
    int choice = -1;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      const auto& tree = trees_[t];
      if (!std::all_of(tree.begin(), tree.end(), [&](std::size_t i) { return res[i] > 0; })) continue;
      for (auto i : tree) --res[i];
      int value = 1 + solve(res);
      for (auto i : tree) ++res[i];
      if (value > best) {
        best = value;
        choice = static_cast<int>(t);
        if (best == bound) break;
      }
    }
    memo_.emplace(std::move(key), std::make_pair(best, choice));
    if (memo_.size() > limits_.oracle_states) {
      throw Error(ErrorCode::OracleLimit,
                  "oracle exceeded " + std::to_string(limits_.oracle_states) + " memoized states");
    }
    return best;
  }

  std::vector<EdgeList> reconstruct(std::vector<std::int64_t> res) {
    std::vector<EdgeList> out;
    while (true) {
      if (upper_bound(res) == 0) break;
      auto it = memo_.find(encode(res));
      if (it == memo_.end() || it->second.second < 0) break;
      const auto& tree = trees_[static_cast<std::size_t>(it->second.second)];
      for (auto i : tree) --res[i];
      out.push_back(tree);
    }
    return out;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  // Trees use N-1 units each and at least one unit at every vertex.
  int upper_bound(const std::vector<std::int64_t>& res) const {
    const std::size_t n = g_.node_count();
    std::vector<std::int64_t> degree(n, 0);
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      sum += res[i];
      degree[g_.edge(i).key.u] += res[i];
      degree[g_.edge(i).key.v] += res[i];
    }
    std::int64_t bound = sum / static_cast<std::int64_t>(n - 1);
    for (auto d : degree) bound = std::min(bound, d);
    return static_cast<int>(bound);
  }

  static std::string encode(const std::vector<std::int64_t>& res) {
    std::string key;
    key.reserve(res.size() * sizeof(std::int32_t));
    for (auto r : res) {
      auto v = static_cast<std::int32_t>(r);
      key.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
    return key;
  }

  const WeightedGraph& g_;
  std::vector<EdgeList> trees_;
  const Limits& limits_;
  std::unordered_map<std::string, std::pair<int, int>> memo_;
};

OracleRun oracle_search(const WeightedGraph& g, std::int64_t rounds, const Limits& limits) {
  if (rounds <= 0) throw Error(ErrorCode::MalformedInput, "rounds must be positive");
  if (rounds > limits.oracle_rounds) {
    throw Error(ErrorCode::OracleLimit, "oracle rounds " + std::to_string(rounds) + " exceed cap " +
                                            std::to_string(limits.oracle_rounds));
  }
  Multigraph mg(g, rounds);
  for (auto m : mg.multiplicity) {
    if (m > std::numeric_limits<std::int32_t>::max()) throw Error(ErrorCode::OracleLimit, "edge capacity too large");
  }
  // Trees may only use edges that still have capacity after flooring.
  std::vector<Rational> support;
  for (auto m : mg.multiplicity) support.emplace_back(m > 0 ? 1L : 0L);
  std::vector<EdgeList> trees;
  for (const auto& t : enumerate_spanning_trees(g.with_rates(support), limits)) trees.push_back(to_indices(g, t));

  Oracle oracle(g, std::move(trees), limits);
  std::vector<std::int64_t> res = mg.multiplicity;
  oracle.solve(res);
  OracleRun run;
  run.trees = oracle.reconstruct(mg.multiplicity);
  std::sort(run.trees.begin(), run.trees.end());
  run.states = oracle.states();
  return run;
}

// ---- general: split at a violating subset and merge ---------------------------

TreePacking general_rec(const WeightedGraph& g, const Limits& limits, std::size_t depth, PackingDiagnostics& diag) {
  require_integer_connected(g);
  diag.recursion_depth = std::max(diag.recursion_depth, depth);
  BottleneckCertificate cert = check_no_bottleneck(g, limits);
  if (cert.bottleneck_free()) return basic_core(g, limits, diag);

  const std::size_t n = g.node_count();
  std::vector<bool> inside(n, false);
  for (VertexId v : cert.violation->subset) inside[v] = true;
  std::vector<VertexId> rest;
  for (VertexId v = 0; v < n; ++v) {
    if (!inside[v]) rest.push_back(v);
  }

  Contraction contracted = contract_with_map(g, *cert.partition);
  WeightedGraph sub = induced_subgraph(g, rest);
  TreePacking pa = general_rec(contracted.graph, limits, depth + 1, diag);
  TreePacking pb = general_rec(sub, limits, depth + 1, diag);

  const mpz_class common = lcm(mpz_class(static_cast<long>(pa.rounds)), mpz_class(static_cast<long>(pb.rounds)));
  if (!common.fits_slong_p()) throw Error(ErrorCode::MergeFailed, "merged round count overflows");
  const std::int64_t rounds = common.get_si();

  auto replicate = [&](const TreePacking& pk) {
    std::vector<SpanningTree> out;
    const std::int64_t copies = rounds / pk.rounds;
    for (const auto& t : pk.expanded()) {
      for (std::int64_t c = 0; c < copies; ++c) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<SpanningTree> a = replicate(pa);
  std::vector<SpanningTree> b = replicate(pb);
  // Each contracted-graph tree needs a partner tree on the rest. Extra rest
  // trees are dropped since the contracted side is the bottleneck.
  if (b.size() < a.size()) {
    throw Error(ErrorCode::MergeFailed, "subgraph on the rest yields " + std::to_string(b.size()) +
                                            " trees but the contracted graph needs " + std::to_string(a.size()));
  }
  const std::size_t k = a.size();

  std::vector<std::int64_t> capacity = integer_rates(g, rounds);
  auto consume = [&](std::size_t idx) {
    if (capacity[idx] <= 0) {
      throw Error(ErrorCode::MergeFailed, "edge " + g.edge_label(g.edge(idx).key) + " over capacity in merge");
    }
    --capacity[idx];
  };

  std::vector<SpanningTree> merged;
  for (std::size_t t = 0; t < k; ++t) {
    std::vector<EdgeKey> keys;
    for (const auto& e : b[t].edges) {
      EdgeKey orig(rest[e.u], rest[e.v]);
      consume(*g.find_edge(orig));
      keys.push_back(orig);
    }
    for (const auto& e : a[t].edges) {
      auto members = contracted.members[*contracted.graph.find_edge(e)];
      std::sort(members.begin(), members.end());
      auto pick = std::find_if(members.begin(), members.end(), [&](std::size_t i) { return capacity[i] > 0; });
      if (pick == members.end()) {
        throw Error(ErrorCode::MergeFailed, "no capacity left to re-expand a contracted edge");
      }
      consume(*pick);
      keys.push_back(g.edge(*pick).key);
    }
    merged.emplace_back(std::move(keys));
  }
  if (b.size() > k) {
    diag.notes.push_back("merge at depth " + std::to_string(depth) + " used " + std::to_string(k) + " of " +
                         std::to_string(b.size()) + " subgraph trees");
  }
  return TreePacking::multigraph(std::move(merged), rounds, PackingSource::Heuristic);
}

}  // namespace

PackingOutcome basic_algorithm(const WeightedGraph& g, const Limits& limits) {
  require_integer_connected(g);
  if (!check_no_bottleneck(g, limits).bottleneck_free()) {
    throw Error(ErrorCode::PreconditionFailed, "basic algorithm needs a bottleneck-free network");
  }
  PackingDiagnostics diag;
  diag.method = "basic";
  TreePacking pk = basic_core(g, limits, diag);
  return finish(g, std::move(pk), std::move(diag), limits);
}

PackingOutcome general_algorithm(const WeightedGraph& g, const Limits& limits) {
  require_integer_connected(g);
  PackingDiagnostics diag;
  diag.method = "general";
  try {
    TreePacking pk = general_rec(g, limits, 0, diag);
    return finish(g, std::move(pk), std::move(diag), limits);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MergeFailed && e.code() != ErrorCode::Disconnected) throw;
    diag.notes.push_back(std::string("recursion failed (") + std::string(to_string(e.code())) + "): " + e.what());
  }
  // Oracle at the round count where the optimum becomes an integer tree count.
  const Rational rate = nwt_rate(g, limits).rate;
  if (!rate.denominator().fits_slong_p()) throw Error(ErrorCode::OracleLimit, "rate denominator too large");
  const std::int64_t rounds = rate.denominator().get_si();
  diag.fallback_used = true;
  OracleRun oracle;
  try {
    oracle = oracle_search(g, rounds, limits);
  } catch (const Error& e) {
    if (classify(e.code()) != ErrorClass::ResourceLimit) throw;
    json partial = {{"rounds", rounds}, {"oracle_error", std::string(to_string(e.code()))}};
    throw Error(ErrorCode::HeuristicFailed, "merge failed and the oracle fallback hit its caps", partial.dump());
  }
  diag.oracle_states += oracle.states;
  std::vector<SpanningTree> trees;
  for (const auto& t : oracle.trees) trees.push_back(to_tree(g, t));
  return finish(g, TreePacking::multigraph(std::move(trees), rounds, PackingSource::Oracle), std::move(diag),
                limits);
}

PackingOutcome brute_force_packing(const WeightedGraph& g, std::int64_t rounds, const Limits& limits) {
  if (g.node_count() < 2) throw Error(ErrorCode::TrivialNetwork, "packing needs at least two nodes");
  PackingDiagnostics diag;
  diag.method = "oracle";
  OracleRun run = oracle_search(g, rounds, limits);
  diag.oracle_states = run.states;
  std::vector<SpanningTree> trees;
  for (const auto& t : run.trees) trees.push_back(to_tree(g, t));
  return finish(g, TreePacking::multigraph(std::move(trees), rounds, PackingSource::Oracle), std::move(diag),
                limits);
}

PackingOutcome reweight_by_lp(const WeightedGraph& g, const std::vector<SpanningTree>& trees, const Limits& limits) {
  if (trees.empty()) throw Error(ErrorCode::InvalidPacking, "reweighting needs at least one tree");
  for (const auto& t : trees) {
    if (!is_spanning_tree(g, t)) throw Error(ErrorCode::InvalidPacking, "tree list contains a non-spanning tree");
  }
  SimplexProblem lp;
  lp.rows = g.edge_count();
  lp.cols = trees.size();
  lp.a.assign(lp.rows * lp.cols, Rational(0));
  lp.c.assign(lp.cols, Rational(1));
  for (const auto& e : g.edges()) lp.b.push_back(e.rate);
  for (std::size_t t = 0; t < trees.size(); ++t) {
    for (const auto& key : trees[t].edges) lp.at(*g.find_edge(key), t) = 1;
  }
  SimplexResult res = simplex_maximize(lp, limits);
  PackingDiagnostics diag;
  diag.method = "lp-reweight";
  diag.search_nodes = res.pivots;
  PackingOutcome out = finish(g, TreePacking::weighted(trees, res.x, PackingSource::Heuristic), std::move(diag), limits);
  if (!out.optimal) out.diagnostics.notes.push_back("fixed tree list cannot reach the optimal rate");
  return out;
}

}  // namespace qnet
