// Thin bindings: graphs go in as JSON documents, results come back as JSON
// text that the Python package turns into dicts with Fraction values.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qnet/error.hpp"
#include "qnet/graph_io.hpp"
#include "qnet/serialize.hpp"

namespace py = pybind11;
using namespace qnet;

namespace {

Limits limits_from(const std::string& caps) {
  Limits l = Limits::from_environment();
  return caps.empty() ? l : Limits::parse(caps, l);
}

std::string rate(const std::string& doc, const std::string& caps) {
  const auto g = parse_graph(doc);
  return rate_report_json(g, nwt_rate(g, limits_from(caps))).dump();
}

std::string length(const std::string& doc, std::int64_t rounds, const std::string& caps) {
  const auto g = parse_graph(doc);
  return Json{{"rounds", rounds}, {"length", nwt_length(g, rounds, limits_from(caps))}}.dump();
}

std::string lp(const std::string& doc, const std::string& caps) {
  const auto g = parse_graph(doc);
  const auto limits = limits_from(caps);
  const auto inst = build_lp(g, limits);
  return lp_solution_json(inst, solve_lp(inst, limits)).dump();
}

std::string pack(const std::string& doc, const std::string& method, std::int64_t rounds, const std::string& caps) {
  const auto g = parse_graph(doc);
  const auto limits = limits_from(caps);
  PackingOutcome out;
  if (method == "basic") {
    out = basic_algorithm(g, limits);
  } else if (method == "general") {
    out = general_algorithm(g, limits);
  } else if (method == "oracle") {
    if (rounds <= 0) rounds = nwt_rate(g, limits).rate.denominator().get_si();
    out = brute_force_packing(g, rounds, limits);
  } else {
    throw Error(ErrorCode::MalformedInput, "unknown method '" + method + "'");
  }
  Json j = packing_outcome_json(g, out);
  j["k"] = out.packing.tree_count();
  j["n"] = out.packing.rounds;
  return j.dump();
}

std::string rates_for_packing(const std::string& doc, const std::string& packing) {
  const auto g = parse_graph(doc);
  return rates_json(g, rates_from_packing(g, parse_packing(g, packing))).dump();
}

std::string simulate(const std::string& doc, std::int64_t rounds, std::uint64_t seed, bool audit,
                     const std::string& caps) {
  const auto g = parse_graph(doc);
  const auto limits = limits_from(caps);
  const auto pk = rounds > 0 ? brute_force_packing(g, rounds, limits) : general_algorithm(g, limits);
  Json j = transcript_json(g, run_packing_protocol(g, pk.packing, seed));
  j["packing"] = packing_json(g, pk.packing);
  if (audit) {
    Json a = audit_json(secrecy_audit(g, pk.packing, limits));
    j["secrecy"] = a["secrecy"];
    j["audit"] = a;
  }
  return j.dump();
}

std::string analyze(const std::string& doc, const std::string& caps) {
  const auto g = parse_graph(doc);
  return bottleneck_report_json(g, bottleneck_report(g, limits_from(caps))).dump();
}

Candidate candidate(const WeightedGraph& g, const std::string& u, const std::string& v, const std::string& rate) {
  return Candidate{EdgeKey(g.node(u), g.node(v)), Rational::parse(rate)};
}

std::string add_link(const std::string& doc, const std::string& u, const std::string& v, const std::string& rate,
                     const std::string& caps) {
  const auto g = parse_graph(doc);
  if (u == v) throw Error(ErrorCode::SelfLoop, "candidate " + u + "-" + v + " is a self-loop");
  return augmentation_json(g, evaluate_addition(g, candidate(g, u, v, rate), limits_from(caps))).dump();
}

std::string plan(const std::string& doc, const std::vector<std::tuple<std::string, std::string, std::string>>& cands,
                 std::size_t budget, bool exhaustive, const std::string& caps) {
  const auto g = parse_graph(doc);
  std::vector<Candidate> list;
  for (const auto& [u, v, r] : cands) {
    if (u == v) throw Error(ErrorCode::SelfLoop, "candidate " + u + "-" + v + " is a self-loop");
    list.push_back(candidate(g, u, v, r));
  }
  return plan_json(g, best_additions(g, list, budget, exhaustive, limits_from(caps))).dump();
}

PyObject* error_type = nullptr;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conference key rates and spanning-tree packings (C++ core)";
  py::exception<Error> error(m, "Error");
  error_type = error.inc_ref().ptr();  // kept alive for the interpreter's lifetime
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("detail") = e.detail();
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("normalize", [](const std::string& doc) { return graph_to_json(parse_graph(doc)); });
  m.def("to_dot", [](const std::string& doc) { return graph_to_dot(parse_graph(doc)); });
  m.def("rate", &rate, py::arg("graph"), py::arg("caps") = "");
  m.def("length", &length, py::arg("graph"), py::arg("rounds"), py::arg("caps") = "");
  m.def("lp", &lp, py::arg("graph"), py::arg("caps") = "");
  m.def("pack", &pack, py::arg("graph"), py::arg("method") = "general", py::arg("rounds") = 0, py::arg("caps") = "");
  m.def("rates_from_packing", &rates_for_packing, py::arg("graph"), py::arg("packing"));
  m.def("simulate", &simulate, py::arg("graph"), py::arg("rounds") = 0, py::arg("seed") = 1, py::arg("audit") = false,
        py::arg("caps") = "");
  m.def("analyze", &analyze, py::arg("graph"), py::arg("caps") = "");
  m.def("add_link", &add_link, py::arg("graph"), py::arg("u"), py::arg("v"), py::arg("rate") = "1",
        py::arg("caps") = "");
  m.def("plan", &plan, py::arg("graph"), py::arg("candidates"), py::arg("budget") = 1, py::arg("exhaustive") = false,
        py::arg("caps") = "");
}
