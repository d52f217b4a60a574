#include "qnet/planner.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qnet/error.hpp"
#include "qnet/graph_io.hpp"

namespace qnet {
namespace {

std::string partition_text(const WeightedGraph& g, const VertexPartition& p) {
  std::ostringstream out;
  for (const auto& block : p.labelled(g)) {
    out << "{";
    for (std::size_t i = 0; i < block.size(); ++i) out << (i ? "," : "") << block[i];
    out << "}";
  }
  return out.str();
}

BottleneckKind kind_of(const RateReport& r) {
  if (r.finest_is_optimal) return BottleneckKind::None;
  return r.minimizing_partition.block_count() == 2 ? BottleneckKind::Bipartition : BottleneckKind::Multipartite;
}

std::string narrate(const WeightedGraph& g, const RateReport& r) {
  std::ostringstream out;
  switch (kind_of(r)) {
    case BottleneckKind::None:
      out << "finest partition attains " << r.rate.pretty() << "; no bottleneck";
      break;
    case BottleneckKind::Bipartition:
      out << "bipartition " << partition_text(g, r.minimizing_partition) << " limits the rate to " << r.rate.pretty();
      break;
    case BottleneckKind::Multipartite:
      out << r.minimizing_partition.block_count() << "-block structure " << partition_text(g, r.minimizing_partition)
          << " limits the rate to " << r.rate.pretty();
      break;
  }
  if (r.minimizer_count > 1) out << " (" << r.minimizer_count << " partitions attain it)";
  return out.str();
}

}  // namespace

std::string to_string(BottleneckKind kind) {
  switch (kind) {
    case BottleneckKind::None: return "none";
    case BottleneckKind::Bipartition: return "bipartition";
    case BottleneckKind::Multipartite: return "multipartite";
  }
  return "none";
}

BottleneckReport bottleneck_report(const WeightedGraph& g, const Limits& limits) {
  BottleneckReport rep;
  rep.rate = nwt_rate(g, limits);
  rep.kind = kind_of(rep.rate);
  rep.contracted = contract(g, rep.rate.minimizing_partition);
  rep.finest_bound = finest_bound(g);
  rep.best_bipartition = best_bipartition_bound(g, limits);
  rep.certificate = check_no_bottleneck(g, limits);
  rep.narrative = narrate(g, rep.rate);
  return rep;
}

AugmentationResult evaluate_addition(const WeightedGraph& g, const Candidate& c, const Limits& limits) {
  if (c.edge.u == c.edge.v) throw Error(ErrorCode::SelfLoop, "candidate link is a self-loop");
  if (c.edge.v >= g.node_count()) throw Error(ErrorCode::UnknownNode, "candidate endpoint is not a node");
  if (c.rate.sign() <= 0) throw Error(ErrorCode::NegativeValue, "candidate rate must be positive");

  AugmentationResult out;
  out.candidate = c;
  out.merged_existing = g.find_edge(c.edge).has_value();
  out.old_rate = nwt_rate(g, limits).rate;
  RateReport after = nwt_rate(g.with_link(c.edge, c.rate), limits);
  out.new_rate = after.rate;
  out.delta = out.new_rate - out.old_rate;
  out.partition = after.minimizing_partition;
  out.minimizer_count = after.minimizer_count;
  out.kind = kind_of(after);
  out.narrative = narrate(g, after);
  return out;
}

AugmentationPlan best_additions(const WeightedGraph& g, const std::vector<Candidate>& candidates, std::size_t budget,
                                bool exhaustive, const Limits& limits) {
  AugmentationPlan plan;
  plan.exhaustive = exhaustive;
  plan.budget = budget;
  plan.initial_rate = nwt_rate(g, limits).rate;
  plan.final_rate = plan.initial_rate;
  plan.final_graph = g;
  if (budget == 0) return plan;
  if (candidates.empty()) throw Error(ErrorCode::EmptyPlan, "no candidate links to choose from");

  // Candidate order for ties: edge key, then position in the list.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return candidates[a].edge < candidates[b].edge; });

  auto apply = [&](const std::vector<std::size_t>& picks) {
    WeightedGraph current = g;
    std::vector<PlanStep> steps;
    for (auto idx : picks) {
      PlanStep step{evaluate_addition(current, candidates[idx], limits), {}};
      current = current.with_link(candidates[idx].edge, candidates[idx].rate);
      step.dot = graph_to_dot(current);
      steps.push_back(std::move(step));
    }
    return std::make_pair(std::move(current), std::move(steps));
  };

  std::vector<std::size_t> picks;
  if (exhaustive) {
    if (budget > 3) throw Error(ErrorCode::PreconditionFailed, "exhaustive planning supports at most 3 additions");
    const std::size_t take = std::min(budget, candidates.size());
    std::vector<std::size_t> combo(take);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    std::optional<Rational> best;
    while (true) {
      std::vector<std::size_t> chosen;
      for (auto c : combo) chosen.push_back(order[c]);
      WeightedGraph trial = g;
      for (auto idx : chosen) trial = trial.with_link(candidates[idx].edge, candidates[idx].rate);
      Rational r = nwt_rate(trial, limits).rate;
      if (!best || r > *best) {
        best = r;
        picks = chosen;
      }
      std::size_t i = take;
      while (i > 0 && combo[i - 1] == candidates.size() - take + (i - 1)) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < take; ++j) combo[j] = combo[j - 1] + 1;
    }
  } else {
    std::vector<bool> used(candidates.size(), false);
    WeightedGraph current = g;
    for (std::size_t step = 0; step < budget; ++step) {
      std::optional<std::size_t> pick;
      Rational best;
      for (auto idx : order) {
        if (used[idx]) continue;
        Rational r = nwt_rate(current.with_link(candidates[idx].edge, candidates[idx].rate), limits).rate;
        if (!pick || r > best) {
          pick = idx;
          best = r;
        }
      }
      if (!pick) break;
      used[*pick] = true;
      picks.push_back(*pick);
      current = current.with_link(candidates[*pick].edge, candidates[*pick].rate);
    }
  }

  auto [final_graph, steps] = apply(picks);
  plan.steps = std::move(steps);
  plan.final_graph = std::move(final_graph);
  plan.final_rate = nwt_rate(plan.final_graph, limits).rate;
  return plan;
}

}  // namespace qnet
