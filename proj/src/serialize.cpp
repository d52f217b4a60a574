#include "qnet/serialize.hpp"

#include <sstream>

#include "qnet/error.hpp"

namespace qnet {
namespace {

Json tree_json(const WeightedGraph& g, const SpanningTree& t) {
  Json arr = Json::array();
  for (const auto& e : t.edges) arr.push_back(edge_json(g, e));
  return arr;
}

Json rationals(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(v.str());
  return arr;
}

Json labels_of(const WeightedGraph& g, const std::vector<VertexId>& vs) {
  Json arr = Json::array();
  for (auto v : vs) arr.push_back(g.label(v));
  return arr;
}

std::string bits_text(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

Json partition_json(const WeightedGraph& g, const VertexPartition& p) {
  Json arr = Json::array();
  for (const auto& block : p.labelled(g)) arr.push_back(block);
  return arr;
}

Json edge_json(const WeightedGraph& g, EdgeKey e) { return Json::array({g.label(e.u), g.label(e.v)}); }

Json rate_report_json(const WeightedGraph& g, const RateReport& r) {
  Json out;
  out["rate"] = r.rate.str();
  out["minimizing_partition"] = partition_json(g, r.minimizing_partition);
  out["finest_is_optimal"] = r.finest_is_optimal;
  out["minimizer_count"] = r.minimizer_count;
  out["minimizer_unique"] = r.minimizer_count == 1;
  return out;
}

Json certificate_json(const WeightedGraph& g, const BottleneckCertificate& c) {
  Json out;
  out["bottleneck_free"] = c.bottleneck_free();
  if (!c.violation) {
    out["violating_subset"] = nullptr;
    return out;
  }
  const auto& v = *c.violation;
  out["violating_subset"] = labels_of(g, v.subset);
  out["whole_bound"] = v.whole_bound.str();
  out["contracted_bound"] = v.contracted_bound.str();
  out["remainder_bound"] = v.remainder_bound ? Json(v.remainder_bound->str()) : Json(nullptr);
  out["holds"] = v.holds();
  out["holds_remainder_form"] = v.holds_remainder_form();
  out["partition"] = partition_json(g, *c.partition);
  out["contracted_nodes"] = c.contracted->labels();
  return out;
}

Json packing_json(const WeightedGraph& g, const TreePacking& pk) {
  Json out;
  out["mode"] = to_string(pk.mode);
  out["source"] = to_string(pk.source);
  Json trees = Json::array();
  for (const auto& t : pk.trees) trees.push_back(tree_json(g, t));
  out["trees"] = trees;
  if (pk.mode == PackingMode::Weighted) {
    out["weights"] = rationals(pk.weights);
  } else {
    out["rounds"] = pk.rounds;
    out["multiplicity"] = pk.multiplicity;
    out["tree_count"] = pk.tree_count();
  }
  out["rate"] = packing_rate(pk).str();
  return out;
}

Json packing_outcome_json(const WeightedGraph& g, const PackingOutcome& o) {
  Json out;
  out["rate"] = o.achieved_rate.str();
  out["optimum"] = o.optimum ? Json(o.optimum->str()) : Json(nullptr);
  out["optimal"] = o.optimal;
  out["valid"] = validate_packing(g, o.packing).valid;
  out["packing"] = packing_json(g, o.packing);
  Json d;
  d["method"] = o.diagnostics.method;
  d["search_nodes"] = o.diagnostics.search_nodes;
  d["backtracks"] = o.diagnostics.backtracks;
  d["recursion_depth"] = o.diagnostics.recursion_depth;
  d["oracle_states"] = o.diagnostics.oracle_states;
  d["fallback_used"] = o.diagnostics.fallback_used;
  d["notes"] = o.diagnostics.notes;
  out["diagnostics"] = d;
  return out;
}

Json lp_solution_json(const LPInstance& inst, const LPSolution& sol) {
  Json out;
  Json rates = Json::object();
  for (std::size_t i = 0; i < inst.variables; ++i) rates[inst.labels[i]] = sol.node_rates[i].str();
  out["node_rates"] = rates;
  out["omniscience_rate"] = sol.omniscience.str();
  out["z"] = sol.z.str();
  out["total_rate"] = inst.total_rate.str();
  out["constraints"] = inst.constraints.size();
  Json active = Json::array();
  for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
    if (sol.multipliers[j].is_zero()) continue;
    Json subset = Json::array();
    for (auto v : inst.constraints[j].subset) subset.push_back(inst.labels[v]);
    active.push_back({{"subset", subset}, {"multiplier", sol.multipliers[j].str()}});
  }
  out["dual_multipliers"] = active;
  out["basis"] = sol.basis;
  out["pivots"] = sol.pivots;
  return out;
}

Json rates_json(const WeightedGraph& g, const CommunicationRates& rates) {
  Json out;
  out["source"] = to_string(rates.source);
  Json per = Json::object();
  for (VertexId v = 0; v < g.node_count(); ++v) per[g.label(v)] = rates.rates[v].str();
  out["rates"] = per;
  out["total"] = rates.total().str();
  return out;
}

Json budget_json(const SecurityBudget& b) {
  return Json{{"per_tree", rationals(b.per_tree)}, {"merged", b.merged.str()}};
}

Json transcript_json(const WeightedGraph& g, const ProtocolTranscript& tr) {
  Json out;
  out["seed"] = tr.seed;
  out["generator"] = tr.algorithm;
  out["rounds"] = tr.rounds;
  out["tree_count"] = tr.conference_edges.size();
  Json conf = Json::array();
  for (const auto& e : tr.conference_edges) conf.push_back(edge_json(g, e));
  out["conference_edges"] = conf;
  Json anns = Json::array();
  for (const auto& a : tr.announcements) {
    anns.push_back({{"tree", a.tree},
                    {"round", a.round},
                    {"announcer", g.label(a.announcer)},
                    {"edge", edge_json(g, a.edge)},
                    {"via", edge_json(g, a.via)},
                    {"bits", a.bit ? "1" : "0"}});
  }
  out["announcements"] = anns;
  Json views = Json::object();
  for (VertexId v = 0; v < g.node_count(); ++v) {
    Json view = Json::object();
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto& key = g.edge(i).key;
      if (key.touches(v)) view[g.label(key.other(v))] = bits_text(tr.key_bits[i]);
    }
    views[g.label(v)] = view;
  }
  out["node_views"] = views;
  Json rec = Json::object();
  for (VertexId v = 0; v < g.node_count(); ++v) rec[g.label(v)] = tr.recovered[v];
  out["recovered"] = rec;
  out["conference_key"] = tr.conference_key;
  out["unanimous"] = tr.unanimous;
  Json used = Json::array();
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    used.push_back({{"edge", edge_json(g, g.edge(i).key)},
                    {"used", tr.bits_used[i]},
                    {"available", tr.key_bits[i].size()}});
  }
  out["key_usage"] = used;
  out["security"] = budget_json(tr.budget);
  return out;
}

Json audit_json(const SecrecyAudit& a) {
  Json out;
  out["secrecy"] = a.uniform ? "uniform" : "leaky";
  out["total_bits"] = a.total_bits;
  out["tree_count"] = a.tree_count;
  out["assignments"] = a.assignments;
  out["reused_bits"] = a.reused_bits;
  out["distinct_transcripts"] = a.distinct_transcripts;
  out["violations"] = a.violations;
  Json hist = Json::array();
  for (const auto& h : a.histograms) {
    Json counts = Json::object();
    for (const auto& [value, count] : h.counts) counts[value] = count;
    hist.push_back({{"transcript", h.transcript}, {"counts", counts}});
  }
  out["histograms"] = hist;
  out["histograms_truncated"] = a.distinct_transcripts > a.histograms.size();
  return out;
}

Json bottleneck_report_json(const WeightedGraph& g, const BottleneckReport& rep) {
  Json out = rate_report_json(g, rep.rate);
  out["kind"] = to_string(rep.kind);
  out["finest_bound"] = rep.finest_bound.str();
  out["best_bipartition"] = {{"partition", partition_json(g, rep.best_bipartition.partition)},
                             {"bound", rep.best_bipartition.bound.str()}};
  Json contracted;
  contracted["nodes"] = rep.contracted.labels();
  Json edges = Json::array();
  for (const auto& e : rep.contracted.edges()) {
    edges.push_back({{"u", rep.contracted.label(e.key.u)},
                     {"v", rep.contracted.label(e.key.v)},
                     {"rate", e.rate.str()}});
  }
  contracted["edges"] = edges;
  out["contracted"] = contracted;
  out["certificate"] = certificate_json(g, rep.certificate);
  out["narrative"] = rep.narrative;
  return out;
}

Json augmentation_json(const WeightedGraph& g, const AugmentationResult& a) {
  Json out;
  out["edge"] = edge_json(g, a.candidate.edge);
  out["rate_added"] = a.candidate.rate.str();
  out["merged_existing"] = a.merged_existing;
  out["before"] = a.old_rate.str();
  out["after"] = a.new_rate.str();
  out["delta"] = a.delta.str();
  out["partition"] = partition_json(g, a.partition);
  out["minimizer_count"] = a.minimizer_count;
  out["kind"] = to_string(a.kind);
  out["narrative"] = a.narrative;
  return out;
}

Json plan_json(const WeightedGraph& g, const AugmentationPlan& plan) {
  Json out;
  out["mode"] = plan.exhaustive ? "exhaustive" : "greedy";
  out["budget"] = plan.budget;
  out["initial_rate"] = plan.initial_rate.str();
  Json steps = Json::array();
  for (const auto& s : plan.steps) {
    Json step = augmentation_json(g, s.result);
    step["dot"] = s.dot;
    steps.push_back(step);
  }
  out["steps"] = steps;
  out["final_rate"] = plan.final_rate.str();
  return out;
}

TreePacking parse_packing(const WeightedGraph& g, std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("invalid packing JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("trees") || !doc["trees"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "packing needs a \"trees\" array");
  }
  auto label = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error(ErrorCode::MalformedInput, "tree endpoints must be labels");
  };
  std::vector<SpanningTree> trees;
  for (const auto& t : doc["trees"]) {
    if (!t.is_array()) throw Error(ErrorCode::MalformedInput, "each tree is a list of edges");
    std::vector<EdgeKey> keys;
    for (const auto& e : t) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::MalformedInput, "tree edges are [u, v] pairs");
      keys.emplace_back(g.node(label(e[0])), g.node(label(e[1])));
    }
    trees.emplace_back(std::move(keys));
  }
  const std::string mode = doc.value("mode", std::string("weighted"));
  try {
    if (mode == "weighted") {
      std::vector<Rational> weights;
      if (!doc.contains("weights")) throw Error(ErrorCode::MalformedInput, "weighted packing needs \"weights\"");
      for (const auto& w : doc["weights"]) {
        weights.push_back(w.is_string() ? Rational::parse(w.get<std::string>()) : Rational(w.get<long>()));
      }
      return TreePacking::weighted(std::move(trees), std::move(weights));
    }
    if (mode == "multigraph") {
      const auto rounds = doc.value("rounds", std::int64_t{1});
      if (!doc.contains("multiplicity")) return TreePacking::multigraph(std::move(trees), rounds);
      return TreePacking::multigraph(std::move(trees), doc["multiplicity"].get<std::vector<std::int64_t>>(), rounds);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("bad packing field: ") + e.what());
  }
  throw Error(ErrorCode::MalformedInput, "unknown packing mode '" + mode + "'");
}

std::string packing_dot(const WeightedGraph& g, const TreePacking& pk) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  std::ostringstream out;
  out << "graph packing {\n  node [shape=circle];\n";
  for (std::size_t t = 0; t < pk.trees.size(); ++t) {
    const char* color = palette[t % std::size(palette)];
    std::string weight = pk.mode == PackingMode::Weighted ? "w=" + pk.weights[t].pretty()
                                                          : "x" + std::to_string(pk.multiplicity[t]);
    out << "  subgraph cluster_" << t << " {\n"
        << "    label=\"T" << t + 1 << " " << weight << "\";\n"
        << "    color=\"" << color << "\";\n";
    for (VertexId v = 0; v < g.node_count(); ++v) {
      out << "    \"t" << t << "_" << g.label(v) << "\" [label=\"" << g.label(v) << "\"];\n";
    }
    for (const auto& e : pk.trees[t].edges) {
      out << "    \"t" << t << "_" << g.label(e.u) << "\" -- \"t" << t << "_" << g.label(e.v) << "\" [color=\""
          << color << "\", penwidth=2];\n";
    }
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace qnet
