#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/limits.hpp"
#include "qnet/rational.hpp"
#include "qnet/tree_packing.hpp"

namespace qnet {

struct PackingDiagnostics {
  std::string method;
  std::size_t search_nodes = 0;
  std::size_t backtracks = 0;
  std::size_t recursion_depth = 0;
  std::size_t oracle_states = 0;
  bool fallback_used = false;
  std::vector<std::string> notes;
};

struct PackingOutcome {
  TreePacking packing;
  Rational achieved_rate;
  /// Exact optimum from the partition formula, when within the exact-mode cap.
  std::optional<Rational> optimum;
  bool optimal = false;
  PackingDiagnostics diagnostics;
};

/// Greedy maximum-weight trees over n = N-1 rounds, with a bounded search for
/// the final choices. Requires integer rates and no bottleneck (throws
/// Error(PreconditionFailed)); Error(HeuristicFailed) with partial state if the
/// search and the oracle fallback both fail.
PackingOutcome basic_algorithm(const WeightedGraph& g, const Limits& limits = {});

/// Splits at the first violating subset I: packs the graph with the rest
/// contracted and the subgraph induced on the rest, then merges the two tree
/// lists. Falls back to the oracle when the merge is impossible.
PackingOutcome general_algorithm(const WeightedGraph& g, const Limits& limits = {});

/// Maximum number of edge-disjoint spanning trees in (V, E, floor(n r_e)) by
/// exhaustive memoized search. Throws Error(OracleLimit) past the caps.
PackingOutcome brute_force_packing(const WeightedGraph& g, std::int64_t rounds, const Limits& limits = {});

/// Best weights for a fixed tree list: maximize sum w subject to the edge
/// capacities, solved exactly with the simplex.
PackingOutcome reweight_by_lp(const WeightedGraph& g, const std::vector<SpanningTree>& trees,
                              const Limits& limits = {});

}  // namespace qnet
