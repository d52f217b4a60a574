#include "qnet/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qnet/error.hpp"

namespace qnet {
namespace {

using json = nlohmann::ordered_json;

std::string node_name(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw Error(ErrorCode::MalformedInput, "node labels must be strings or integers");
}

Rational number_field(const json& edge, const char* field, bool required) {
  auto it = edge.find(field);
  if (it == edge.end()) {
    if (required) throw Error(ErrorCode::MalformedInput, std::string("edge is missing '") + field + "'");
    return Rational(0);
  }
  if (it->is_string()) return Rational::parse(it->get<std::string>());
  if (it->is_number_integer()) return Rational::parse(std::to_string(it->get<long long>()));
  throw Error(ErrorCode::MalformedInput,
              std::string("'") + field + "' must be a string (\"p/q\" or decimal) or an integer");
}

}  // namespace

WeightedGraph parse_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "document needs a \"nodes\" array");
  }
  std::vector<std::string> labels;
  for (const auto& n : doc["nodes"]) labels.push_back(node_name(n));

  auto index_of = [&](const json& ref) -> VertexId {
    std::string name = node_name(ref);
    for (VertexId v = 0; v < labels.size(); ++v) {
      if (labels[v] == name) return v;
    }
    throw Error(ErrorCode::UnknownNode, "edge references unknown node '" + name + "'");
  };

  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw Error(ErrorCode::MalformedInput, "\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("u") || !e.contains("v")) {
        throw Error(ErrorCode::MalformedInput, "edge needs \"u\" and \"v\"");
      }
      VertexId u = index_of(e["u"]);
      VertexId v = index_of(e["v"]);
      Edge edge;
      edge.key.u = u;  // raw order; the graph constructor rejects u == v
      edge.key.v = v;
      edge.rate = number_field(e, "rate", true);
      edge.epsilon = number_field(e, "epsilon", false);
      edges.push_back(std::move(edge));
    }
  }
  return WeightedGraph(std::move(labels), std::move(edges));
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string graph_to_json(const WeightedGraph& g) {
  json doc;
  doc["nodes"] = g.labels();
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) {
    doc["edges"].push_back({{"u", g.label(e.key.u)},
                            {"v", g.label(e.key.v)},
                            {"rate", e.rate.str()},
                            {"epsilon", e.epsilon.str()}});
  }
  return doc.dump(2);
}

std::string graph_to_dot(const WeightedGraph& g) {
  std::ostringstream out;
  out << "graph network {\n";
  for (const auto& l : g.labels()) out << "  \"" << l << "\";\n";
  for (const auto& e : g.edges()) {
    out << "  \"" << g.label(e.key.u) << "\" -- \"" << g.label(e.key.v) << "\" [label=\""
        << e.rate.pretty() << "\"";
    if (e.rate.is_zero()) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace qnet
