#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/limits.hpp"
#include "qnet/rate.hpp"
#include "qnet/rational.hpp"

namespace qnet {

enum class BottleneckKind { None, Bipartition, Multipartite };

std::string to_string(BottleneckKind kind);

struct BottleneckReport {
  RateReport rate;
  BottleneckKind kind = BottleneckKind::None;
  /// The network contracted along the minimizing partition.
  WeightedGraph contracted;
  Rational finest_bound;
  /// What cuts alone would conclude; looser than the rate for richer structures.
  PartitionBound best_bipartition;
  /// First violating subset and both forms of its condition, if any.
  BottleneckCertificate certificate;
  std::string narrative;
};

BottleneckReport bottleneck_report(const WeightedGraph& g, const Limits& limits = {});

struct Candidate {
  EdgeKey edge;
  Rational rate = 1;
};

struct AugmentationResult {
  Candidate candidate;
  bool merged_existing = false;  // the link already existed; its rate was raised
  Rational old_rate;
  Rational new_rate;
  Rational delta;
  VertexPartition partition;  // minimizer after the addition
  std::size_t minimizer_count = 0;
  BottleneckKind kind = BottleneckKind::None;
  std::string narrative;
};

/// Throws Error(SelfLoop) or Error(UnknownNode) for bad endpoints and
/// Error(NegativeValue) unless the rate is positive.
AugmentationResult evaluate_addition(const WeightedGraph& g, const Candidate& c, const Limits& limits = {});

struct PlanStep {
  AugmentationResult result;
  std::string dot;  // network after this step
};

struct AugmentationPlan {
  bool exhaustive = false;
  std::size_t budget = 0;
  Rational initial_rate;
  Rational final_rate;
  std::vector<PlanStep> steps;
  WeightedGraph final_graph;
};

/// Greedy: each step adds the candidate with the largest new rate, ties broken
/// by edge order then list order. Exhaustive mode (budget <= 3) tries every
/// combination instead. Throws Error(EmptyPlan) for an empty candidate list
/// with a positive budget.
AugmentationPlan best_additions(const WeightedGraph& g, const std::vector<Candidate>& candidates, std::size_t budget,
                                bool exhaustive = false, const Limits& limits = {});

}  // namespace qnet
