#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/limits.hpp"
#include "qnet/rational.hpp"

namespace qnet {

/// Optimal conference-key rate: the minimum over vertex partitions P (|P| >= 2)
/// of r[E(P)] / (|P| - 1).
struct RateReport {
  Rational rate;
  /// First partition attaining the minimum in growth-string order.
  VertexPartition minimizing_partition;
  bool finest_is_optimal = false;
  /// Number of partitions attaining the minimum; > 1 means the reported
  /// minimizer is not unique.
  std::size_t minimizer_count = 0;
};

/// Throws Error(TrivialNetwork) for N < 2, Error(Disconnected) when the
/// positive-rate edges do not connect the graph, Error(ExactModeLimit) past
/// limits.partition_nodes.
RateReport nwt_rate(const WeightedGraph& g, const Limits& limits = {});

/// Number of edge-disjoint spanning trees after n rounds:
/// min over P of floor(n r[E(P)] / (|P| - 1)).
std::int64_t nwt_length(const WeightedGraph& g, std::int64_t rounds, const Limits& limits = {});

/// r[E(P)] / (|P| - 1); an upper bound on the rate for every P.
/// Throws Error(InvalidPartition) for single-block partitions.
Rational partition_bound(const WeightedGraph& g, const VertexPartition& p);

/// r[E] / (N - 1), the finest-partition bound.
Rational finest_bound(const WeightedGraph& g);

struct PartitionBound {
  VertexPartition partition;
  Rational bound;
};

/// Every partition with its bound, in enumeration order.
std::vector<PartitionBound> all_partition_bounds(const WeightedGraph& g, const Limits& limits = {});

/// Smallest bound among bipartitions only (the "linear" bottleneck view).
PartitionBound best_bipartition_bound(const WeightedGraph& g, const Limits& limits = {});

/// Both forms of the single-subset bottleneck condition for a subset I:
///   (A)  r[E]/(N-1)              <= (r[E(I)] + r[E(I, rest)]) / |I|
///   (B)  r[E(rest)]/(N-|I|-1)    <= (r[E(I)] + r[E(I, rest)]) / |I|
/// (B) has no left side when |rest| == 1 and then holds trivially.
struct SubsetCondition {
  std::vector<VertexId> subset;
  Rational whole_bound;                    // left side of (A)
  Rational contracted_bound;               // shared right side
  std::optional<Rational> remainder_bound; // left side of (B)

  bool holds() const { return whole_bound <= contracted_bound; }
  bool holds_remainder_form() const {
    return !remainder_bound || *remainder_bound <= contracted_bound;
  }
};

SubsetCondition subset_condition(const WeightedGraph& g, std::span<const VertexId> subset);

struct BottleneckCertificate {
  /// Empty when no subset violates the condition, i.e. the finest partition
  /// attains the optimal rate.
  std::optional<SubsetCondition> violation;
  /// The partition {i : i in I} + {rest} and its contraction, when violated.
  std::optional<VertexPartition> partition;
  std::optional<WeightedGraph> contracted;

  bool bottleneck_free() const { return !violation.has_value(); }
};

/// Scans nonempty proper subsets I by increasing size, then lexicographically,
/// and reports the first violation. Throws Error(ExactModeLimit) past
/// limits.subset_nodes.
BottleneckCertificate check_no_bottleneck(const WeightedGraph& g, const Limits& limits = {});

/// Visits nonempty proper subsets of {0..n-1} by increasing size, then
/// lexicographically. Returning false from the callback stops the scan.
void for_each_proper_subset(std::size_t n, const std::function<bool(std::span<const VertexId>)>& visit);

/// Closed-form rate of a triangle with the given link rates. Throws
/// Error(Disconnected) when two rates are zero, Error(NegativeValue) on negatives.
Rational triangle_rate(const Rational& r12, const Rational& r13, const Rational& r23);

}  // namespace qnet
