#include "qnet/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qnet/error.hpp"
#include "qnet/graph_io.hpp"
#include "qnet/serialize.hpp"

namespace qnet {
namespace {

struct Options {
  std::string input;
  std::string format = "json";
  std::string caps;
  std::string method = "general";
  std::int64_t rounds = 0;  // 0 = not given
  bool rounds_given = false;
  std::uint64_t seed = 1;
  bool audit = false;
  std::string candidates;
  std::size_t budget = 1;
  bool exhaustive = false;
  bool format_given = false;
};

int exit_code(ErrorCode code) {
  switch (classify(code)) {
    case ErrorClass::Validation: return 2;
    case ErrorClass::ResourceLimit: return 3;
    case ErrorClass::Internal: return 4;
  }
  return 4;
}

std::vector<Candidate> parse_candidates(const WeightedGraph& g, const std::string& text) {
  std::vector<Candidate> out;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item.empty()) continue;
    Candidate c;
    std::string link = item;
    if (auto colon = item.find(':'); colon != std::string::npos) {
      link = item.substr(0, colon);
      c.rate = Rational::parse(item.substr(colon + 1));
    }
    auto dash = link.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == link.size()) {
      throw Error(ErrorCode::MalformedInput, "candidate '" + item + "' is not of the form u-v[:rate]");
    }
    const VertexId u = g.node(link.substr(0, dash));
    const VertexId v = g.node(link.substr(dash + 1));
    if (u == v) throw Error(ErrorCode::SelfLoop, "candidate '" + item + "' is a self-loop");
    c.edge = EdgeKey(u, v);
    out.push_back(c);
  }
  return out;
}

std::string partition_text(const Json& p) {
  std::string s;
  for (const auto& block : p) {
    s += "{";
    for (std::size_t i = 0; i < block.size(); ++i) s += (i ? "," : "") + block[i].get<std::string>();
    s += "}";
  }
  return s;
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << "\n"; }

int cmd_rate(const Options& o, const Limits& limits, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  const RateReport r = nwt_rate(g, limits);
  if (o.format == "dot") {
    out << graph_to_dot(g);
  } else if (o.format == "text") {
    out << "rate " << r.rate.pretty() << "\n"
        << "minimizing partition " << partition_text(partition_json(g, r.minimizing_partition)) << "\n"
        << "finest partition optimal: " << (r.finest_is_optimal ? "yes" : "no") << "\n";
  } else {
    emit(out, rate_report_json(g, r));
  }
  return 0;
}

int cmd_pack(const Options& o, const Limits& limits, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  if (o.rounds_given && o.rounds <= 0) throw Error(ErrorCode::MalformedInput, "--rounds must be positive");
  PackingOutcome res;
  if (o.method == "basic") {
    res = basic_algorithm(g, limits);
  } else if (o.method == "general") {
    res = general_algorithm(g, limits);
  } else {
    std::int64_t rounds = o.rounds;
    if (!o.rounds_given) {
      const Rational rate = nwt_rate(g, limits).rate;
      rounds = rate.denominator().fits_slong_p() ? rate.denominator().get_si() : limits.oracle_rounds + 1;
    }
    res = brute_force_packing(g, rounds, limits);
  }
  if (o.format == "dot") {
    out << packing_dot(g, res.packing);
  } else if (o.format == "text") {
    out << "method " << res.diagnostics.method << "\n"
        << "trees " << res.packing.tree_count() << " over " << res.packing.rounds << " rounds\n"
        << "rate " << res.achieved_rate.pretty() << (res.optimal ? " (optimal)" : "") << "\n";
  } else {
    Json doc = packing_outcome_json(g, res);
    doc["k"] = res.packing.tree_count();
    doc["n"] = res.packing.rounds;
    emit(out, doc);
  }
  return 0;
}

int cmd_simulate(const Options& o, const Limits& limits, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  if (o.rounds_given && o.rounds <= 0) throw Error(ErrorCode::MalformedInput, "--rounds must be positive");
  PackingOutcome pk = o.rounds_given ? brute_force_packing(g, o.rounds, limits) : general_algorithm(g, limits);
  const ProtocolTranscript tr = run_packing_protocol(g, pk.packing, o.seed);
  Json doc = transcript_json(g, tr);
  doc["packing"] = packing_json(g, pk.packing);
  if (o.audit) {
    Json audit = audit_json(secrecy_audit(g, pk.packing, limits));
    doc["secrecy"] = audit["secrecy"];
    doc["audit"] = audit;
  }
  if (o.format == "dot") {
    out << packing_dot(g, pk.packing);
  } else if (o.format == "text") {
    out << "conference key " << tr.conference_key << " (" << tr.conference_key.size() << " bits, " << tr.rounds
        << " rounds)\n"
        << "announcements " << tr.announcements.size() << "\n"
        << "unanimous " << (tr.unanimous ? "yes" : "no") << "\n";
    if (o.audit) out << "secrecy " << doc["secrecy"].get<std::string>() << "\n";
  } else {
    emit(out, doc);
  }
  return 0;
}

int cmd_analyze(const Options& o, const Limits& limits, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  const BottleneckReport rep = bottleneck_report(g, limits);
  if (o.format == "dot") {
    out << graph_to_dot(rep.contracted);
    return 0;
  }
  Json doc = bottleneck_report_json(g, rep);
  if (g.node_count() <= limits.lp_nodes) {
    const Rational z = solve_z(g, limits);
    doc["lp_z"] = z.str();
    doc["lp_agrees"] = z == rep.rate.rate;
  }
  if (o.format == "text") {
    out << rep.narrative << "\n"
        << "kind " << to_string(rep.kind) << "\n"
        << "best bipartition bound " << rep.best_bipartition.bound.pretty() << "\n";
  } else {
    emit(out, doc);
  }
  return 0;
}

int cmd_optimize(const Options& o, const Limits& limits, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  const auto candidates = parse_candidates(g, o.candidates);
  const AugmentationPlan plan = best_additions(g, candidates, o.budget, o.exhaustive, limits);
  if (o.format == "dot") {
    out << graph_to_dot(plan.final_graph);
    return 0;
  }
  Json doc = plan_json(g, plan);
  Json picked = Json::array();
  for (const auto& s : plan.steps) {
    picked.push_back(g.label(s.result.candidate.edge.u) + "-" + g.label(s.result.candidate.edge.v));
  }
  doc["picked"] = picked;
  if (o.format == "text") {
    out << "rate " << plan.initial_rate.pretty();
    for (const auto& s : plan.steps) out << " -> " << s.result.new_rate.pretty();
    out << "\n";
    for (const auto& p : picked) out << "add " << p.get<std::string>() << "\n";
  } else {
    emit(out, doc);
  }
  return 0;
}

int cmd_export_dot(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph(o.input);
  if (o.format_given && o.format == "json") {
    out << graph_to_json(g) << "\n";
  } else {
    out << graph_to_dot(g);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conference key rates and spanning-tree packings for QKD networks", "qnet-stp"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> formats{"json", "dot", "text"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "network JSON file")->required();
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--caps", o.caps, "cap overrides key=value,... (also QNET_STP_CAPS)");
  };

  auto* rate = app.add_subcommand("rate", "optimal conference key rate");
  common(rate);
  auto* pack = app.add_subcommand("pack", "spanning-tree packing");
  common(pack);
  pack->add_option("--method", o.method, "basic | general | oracle")
      ->check(CLI::IsMember({"basic", "general", "oracle"}));
  pack->add_option("--rounds", o.rounds, "round count for the oracle");
  auto* sim = app.add_subcommand("simulate", "run the key propagation protocol");
  common(sim);
  sim->add_option("--rounds", o.rounds, "use the oracle packing for this many rounds");
  sim->add_option("--seed", o.seed, "key generator seed");
  sim->add_flag("--audit", o.audit, "exhaustive secrecy audit");
  auto* analyze = app.add_subcommand("analyze", "bottleneck report");
  common(analyze);
  auto* optimize = app.add_subcommand("optimize", "choose links to add");
  common(optimize);
  optimize->add_option("--candidates", o.candidates, "u-v[:rate],...");
  optimize->add_option("--budget", o.budget, "number of links to add");
  optimize->add_flag("--exhaustive", o.exhaustive, "try every combination (budget <= 3)");
  auto* dot = app.add_subcommand("export-dot", "graph as DOT");
  common(dot);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << Json{{"error", "MalformedInput"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  o.rounds_given = pack->count("--rounds") > 0 || sim->count("--rounds") > 0;
  o.format_given = dot->count("--format") > 0;

  try {
    Limits limits = Limits::from_environment();
    if (!o.caps.empty()) limits = Limits::parse(o.caps, limits);
    if (rate->parsed()) return cmd_rate(o, limits, out);
    if (pack->parsed()) return cmd_pack(o, limits, out);
    if (sim->parsed()) return cmd_simulate(o, limits, out);
    if (analyze->parsed()) return cmd_analyze(o, limits, out);
    if (optimize->parsed()) return cmd_optimize(o, limits, out);
    return cmd_export_dot(o, out);
  } catch (const Error& e) {
    Json doc{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.detail().empty()) doc["partial"] = Json::parse(e.detail(), nullptr, false);
    err << doc.dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 4;
  }
}

}  // namespace qnet
