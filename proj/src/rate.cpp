#include "qnet/rate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qnet/error.hpp"

namespace qnet {
namespace {

void require_rate_input(const WeightedGraph& g, const Limits& limits) {
  if (g.node_count() < 2) {
    throw Error(ErrorCode::TrivialNetwork, "a conference needs at least two nodes");
  }
  if (g.node_count() > limits.partition_nodes) {
    throw Error(ErrorCode::ExactModeLimit, "exact rate over " + std::to_string(g.node_count()) +
                                               " nodes exceeds cap " + std::to_string(limits.partition_nodes));
  }
  if (!is_connected(g, true)) {
    throw Error(ErrorCode::Disconnected, "positive-rate links do not connect the network");
  }
}

// Rates scaled to a common denominator. When every partial sum fits in int64
// the partition scan runs on machine integers; comparisons use 128-bit products.
struct ScaledRates {
  bool fits = false;
  std::vector<std::int64_t> value;
};

ScaledRates scale_to_integers(const WeightedGraph& g) {
  mpz_class common = 1;
  for (const auto& e : g.edges()) common = lcm(common, e.rate.denominator());
  ScaledRates out;
  mpz_class total = 0;
  for (const auto& e : g.edges()) {
    mpz_class s = e.rate.numerator() * (common / e.rate.denominator());
    total += s;
    out.value.push_back(s.fits_slong_p() ? s.get_si() : 0);
  }
  // Headroom for the 128-bit cross-multiplication by block counts.
  out.fits = total < (mpz_class(1) << 62);
  return out;
}

}  // namespace

RateReport nwt_rate(const WeightedGraph& g, const Limits& limits) {
  require_rate_input(g, limits);
  const std::size_t n = g.node_count();
  const auto& edges = g.edges();

  RateReport report;
  std::vector<std::uint8_t> best_rgs;
  std::size_t ties = 0;

  ScaledRates scaled = scale_to_integers(g);
  if (scaled.fits) {
    __int128 best_sum = -1;
    __int128 best_den = 1;
    for_each_partition(n, limits, [&](std::span<const std::uint8_t> rgs, std::size_t blocks) {
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (rgs[edges[i].key.u] != rgs[edges[i].key.v]) sum += scaled.value[i];
      }
      const __int128 den = static_cast<__int128>(blocks) - 1;
      if (best_sum < 0) {
        best_sum = sum;
        best_den = den;
        best_rgs.assign(rgs.begin(), rgs.end());
        ties = 1;
        return;
      }
      const __int128 lhs = static_cast<__int128>(sum) * best_den;
      const __int128 rhs = best_sum * den;
      if (lhs < rhs) {
        best_sum = sum;
        best_den = den;
        best_rgs.assign(rgs.begin(), rgs.end());
        ties = 1;
      } else if (lhs == rhs) {
        ++ties;
      }
    });
  } else {
    std::optional<Rational> best;
    for_each_partition(n, limits, [&](std::span<const std::uint8_t> rgs, std::size_t blocks) {
      Rational sum;
      for (const auto& e : edges) {
        if (rgs[e.key.u] != rgs[e.key.v]) sum += e.rate;
      }
      Rational value = sum / Rational(static_cast<long>(blocks - 1));
      if (!best || value < *best) {
        best = value;
        best_rgs.assign(rgs.begin(), rgs.end());
        ties = 1;
      } else if (value == *best) {
        ++ties;
      }
    });
  }

  report.minimizing_partition = VertexPartition::from_growth_string(best_rgs);
  report.rate = partition_bound(g, report.minimizing_partition);
  report.minimizer_count = ties;
  report.finest_is_optimal = finest_bound(g) == report.rate;
  return report;
}

std::int64_t nwt_length(const WeightedGraph& g, std::int64_t rounds, const Limits& limits) {
  if (rounds <= 0) throw Error(ErrorCode::MalformedInput, "rounds must be positive");
  // floor is monotone, so the minimum of the floors is the floor of the minimum.
  Rational best = nwt_rate(g, limits).rate * Rational(rounds);
  return Rational(mpq_class(best.floor())).to_int64();
}

Rational partition_bound(const WeightedGraph& g, const VertexPartition& p) {
  if (p.node_count() != g.node_count()) {
    throw Error(ErrorCode::InvalidPartition, "partition does not match the graph");
  }
  if (p.block_count() < 2) {
    throw Error(ErrorCode::InvalidPartition, "bound needs at least two blocks");
  }
  Rational sum;
  for (std::size_t idx : cross_edges(g, p)) sum += g.edge(idx).rate;
  return sum / Rational(static_cast<long>(p.block_count() - 1));
}

Rational finest_bound(const WeightedGraph& g) {
  if (g.node_count() < 2) throw Error(ErrorCode::TrivialNetwork, "finest bound needs N >= 2");
  return g.total_rate() / Rational(static_cast<long>(g.node_count() - 1));
}

std::vector<PartitionBound> all_partition_bounds(const WeightedGraph& g, const Limits& limits) {
  std::vector<PartitionBound> out;
  for_each_partition(g.node_count(), limits, [&](std::span<const std::uint8_t> rgs, std::size_t) {
    auto p = VertexPartition::from_growth_string(rgs);
    Rational b = partition_bound(g, p);
    out.push_back({std::move(p), std::move(b)});
  });
  return out;
}

PartitionBound best_bipartition_bound(const WeightedGraph& g, const Limits& limits) {
  std::optional<PartitionBound> best;
  for_each_partition(g.node_count(), limits, [&](std::span<const std::uint8_t> rgs, std::size_t blocks) {
    if (blocks != 2) return;
    auto p = VertexPartition::from_growth_string(rgs);
    Rational b = partition_bound(g, p);
    if (!best || b < best->bound) best = PartitionBound{std::move(p), std::move(b)};
  });
  if (!best) throw Error(ErrorCode::TrivialNetwork, "no bipartitions for N < 2");
  return *best;
}

SubsetCondition subset_condition(const WeightedGraph& g, std::span<const VertexId> subset) {
  const std::size_t n = g.node_count();
  if (subset.empty() || subset.size() >= n) {
    throw Error(ErrorCode::InvalidSubset, "subset must be nonempty and proper");
  }
  std::vector<bool> inside(n, false);
  for (VertexId v : subset) {
    if (v >= n || inside[v]) throw Error(ErrorCode::InvalidSubset, "subset has duplicates or unknown vertices");
    inside[v] = true;
  }
  Rational touching;  // r[E(I)] + r[E(I, rest)]
  Rational remainder; // r[E(rest)]
  for (const auto& e : g.edges()) {
    if (inside[e.key.u] || inside[e.key.v]) {
      touching += e.rate;
    } else {
      remainder += e.rate;
    }
  }
  SubsetCondition out;
  out.subset.assign(subset.begin(), subset.end());
  std::sort(out.subset.begin(), out.subset.end());
  out.whole_bound = finest_bound(g);
  out.contracted_bound = touching / Rational(static_cast<long>(subset.size()));
  const std::size_t rest = n - subset.size();
  if (rest >= 2) out.remainder_bound = remainder / Rational(static_cast<long>(rest - 1));
  return out;
}

void for_each_proper_subset(std::size_t n, const std::function<bool(std::span<const VertexId>)>& visit) {
  std::vector<VertexId> combo;
  for (std::size_t size = 1; size < n; ++size) {
    combo.resize(size);
    std::iota(combo.begin(), combo.end(), VertexId{0});
    while (true) {
      if (!visit(combo)) return;
      // Advance to the next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && combo[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
}

BottleneckCertificate check_no_bottleneck(const WeightedGraph& g, const Limits& limits) {
  const std::size_t n = g.node_count();
  if (n > limits.subset_nodes) {
    throw Error(ErrorCode::ExactModeLimit, "subset scan over " + std::to_string(n) +
                                               " nodes exceeds cap " + std::to_string(limits.subset_nodes));
  }
  BottleneckCertificate cert;
  if (n < 2) return cert;
  for_each_proper_subset(n, [&](std::span<const VertexId> subset) {
    SubsetCondition c = subset_condition(g, subset);
    if (c.holds()) return true;
    cert.violation = std::move(c);
    return false;
  });
  if (cert.violation) {
    std::vector<bool> inside(n, false);
    std::vector<std::vector<VertexId>> blocks;
    for (VertexId v : cert.violation->subset) {
      inside[v] = true;
      blocks.push_back({v});
    }
    auto& rest = blocks.emplace_back();
    for (VertexId v = 0; v < n; ++v) {
      if (!inside[v]) rest.push_back(v);
    }
    cert.partition = VertexPartition::from_blocks(n, std::move(blocks));
    cert.contracted = contract(g, *cert.partition);
  }
  return cert;
}

Rational triangle_rate(const Rational& r12, const Rational& r13, const Rational& r23) {
  if (r12.sign() < 0 || r13.sign() < 0 || r23.sign() < 0) {
    throw Error(ErrorCode::NegativeValue, "triangle rates must be nonnegative");
  }
  int zeros = static_cast<int>(r12.is_zero()) + static_cast<int>(r13.is_zero()) + static_cast<int>(r23.is_zero());
  if (zeros >= 2) throw Error(ErrorCode::Disconnected, "triangle with two zero links is disconnected");
  if (r12 + r13 <= r23) return r12 + r13;
  if (r12 + r23 <= r13) return r12 + r23;
  if (r13 + r23 <= r12) return r13 + r23;
  return (r12 + r13 + r23) / Rational(2);
}

}  // namespace qnet
