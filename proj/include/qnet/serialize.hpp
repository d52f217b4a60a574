#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "qnet/graph.hpp"
#include "qnet/lp.hpp"
#include "qnet/packing.hpp"
#include "qnet/planner.hpp"
#include "qnet/protocol.hpp"
#include "qnet/rate.hpp"

namespace qnet {

using Json = nlohmann::ordered_json;

// Every Rational is written as "p/q" in lowest terms.
Json partition_json(const WeightedGraph& g, const VertexPartition& p);
Json edge_json(const WeightedGraph& g, EdgeKey e);
Json rate_report_json(const WeightedGraph& g, const RateReport& r);
Json certificate_json(const WeightedGraph& g, const BottleneckCertificate& c);
Json packing_json(const WeightedGraph& g, const TreePacking& pk);
Json packing_outcome_json(const WeightedGraph& g, const PackingOutcome& out);
Json lp_solution_json(const LPInstance& inst, const LPSolution& sol);
Json rates_json(const WeightedGraph& g, const CommunicationRates& rates);
Json budget_json(const SecurityBudget& b);
Json transcript_json(const WeightedGraph& g, const ProtocolTranscript& tr);
Json audit_json(const SecrecyAudit& a);
Json bottleneck_report_json(const WeightedGraph& g, const BottleneckReport& rep);
Json augmentation_json(const WeightedGraph& g, const AugmentationResult& a);
Json plan_json(const WeightedGraph& g, const AugmentationPlan& plan);

/// Reads the packing JSON format back; tree edges are label pairs.
/// Throws Error(MalformedInput) or Error(UnknownNode).
TreePacking parse_packing(const WeightedGraph& g, std::string_view document);

/// One colored cluster per tree, nodes duplicated per cluster.
std::string packing_dot(const WeightedGraph& g, const TreePacking& pk);

}  // namespace qnet
