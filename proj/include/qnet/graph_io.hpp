#pragma once

#include <string>
#include <string_view>

#include "qnet/graph.hpp"

namespace qnet {

/// Parses the canonical graph document
///   {"nodes": ["1","2"], "edges": [{"u":"1","v":"2","rate":"1","epsilon":"0"}]}
/// Rates and epsilons may be integer strings, "p/q", terminating decimals, or
/// JSON integers; "epsilon" defaults to 0. Each structural problem raises its
/// own ErrorCode (SelfLoop, DuplicateEdge, NegativeValue, UnknownNode, ...).
WeightedGraph parse_graph(std::string_view document);

WeightedGraph load_graph(const std::string& path);

/// Canonical JSON with every rational emitted as "p/q".
std::string graph_to_json(const WeightedGraph& g);

std::string graph_to_dot(const WeightedGraph& g);

}  // namespace qnet
