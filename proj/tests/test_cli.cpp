#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "qnet/cli.hpp"
#include "support/support.hpp"

using qnet::run_cli;
using qnet::testing::fixture_path;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("rate command") {
  auto r = run({"rate", fixture_path("triangle")});
  REQUIRE(r.code == 0);
  auto doc = Json::parse(r.out);
  CHECK(doc["rate"] == "3/2");
  CHECK(doc["finest_is_optimal"] == true);
  CHECK(doc["minimizing_partition"].size() == 3);

  CHECK(Json::parse(run({"rate", fixture_path("hexagon")}).out)["rate"] == "6/5");

  auto bad = run({"rate", fixture_path("disconnected")});
  CHECK(bad.code == 2);
  CHECK(Json::parse(bad.err)["error"] == "Disconnected");

  CHECK(run({"rate", fixture_path("triangle"), "--format", "text"}).out.rfind("rate 3/2", 0) == 0);
  CHECK(run({"rate", fixture_path("hexagon"), "--caps", "partition_nodes=4"}).code == 3);
  CHECK(run({"rate", fixture_path("missing")}).code == 2);
}

TEST_CASE("pack command") {
  auto k4 = Json::parse(run({"pack", fixture_path("k4"), "--method", "basic"}).out);
  CHECK(k4["k"] == 6);
  CHECK(k4["n"] == 3);
  CHECK(k4["rate"] == "2/1");
  CHECK(k4["valid"] == true);

  auto tail = Json::parse(run({"pack", fixture_path("square_tail"), "--method", "general"}).out);
  CHECK(tail["rate"] == "3/2");

  auto tri = Json::parse(run({"pack", fixture_path("triangle"), "--method", "oracle", "--rounds", "2"}).out);
  CHECK(tri["k"] == 3);

  auto dot = run({"pack", fixture_path("triangle"), "--format", "dot"});
  CHECK(dot.out.find("subgraph cluster_") != std::string::npos);

  CHECK(run({"pack", fixture_path("triangle_pendant"), "--method", "basic"}).code == 2);
  CHECK(run({"pack", fixture_path("triangle"), "--method", "oracle", "--rounds", "50"}).code == 3);
  CHECK(run({"pack", fixture_path("triangle"), "--method", "magic"}).code == 2);
}

TEST_CASE("simulate command") {
  auto tree = Json::parse(run({"simulate", fixture_path("tree9"), "--seed", "1"}).out);
  CHECK(tree["unanimous"] == true);

  auto audited = run({"simulate", fixture_path("triangle"), "--rounds", "2", "--audit"});
  REQUIRE(audited.code == 0);
  auto doc = Json::parse(audited.out);
  CHECK(doc["secrecy"] == "uniform");
  CHECK(doc["conference_key"].get<std::string>().size() == 3);

  CHECK(run({"simulate", fixture_path("triangle"), "--rounds", "0"}).code == 2);
}

TEST_CASE("analyze and optimize commands") {
  auto pendant = Json::parse(run({"analyze", fixture_path("triangle_pendant")}).out);
  CHECK(pendant["kind"] == "bipartition");
  CHECK(pendant["minimizing_partition"] == Json::parse(R"([["1","2","3"],["4"]])"));
  CHECK(pendant["lp_agrees"] == true);

  auto opt = Json::parse(run({"optimize", fixture_path("hexagon"), "--candidates", "1-4,2-6", "--budget", "1"}).out);
  CHECK(opt["picked"] == Json::parse(R"(["1-4"])"));

  auto noop = run({"optimize", fixture_path("hexagon"), "--budget", "0"});
  REQUIRE(noop.code == 0);
  CHECK(Json::parse(noop.out)["picked"].empty());

  CHECK(run({"optimize", fixture_path("hexagon"), "--candidates", "1-4"}).code == 0);
  CHECK(run({"optimize", fixture_path("hexagon"), "--candidates", "1-1"}).code == 2);
  CHECK(run({"optimize", fixture_path("hexagon"), "--candidates", "nonsense"}).code == 2);
  CHECK(run({"optimize", fixture_path("hexagon"), "--budget", "1"}).code == 2);
}

TEST_CASE("export-dot and usage errors") {
  auto dot = run({"export-dot", fixture_path("triangle")});
  CHECK(dot.out.rfind("graph network {", 0) == 0);
  CHECK(Json::parse(run({"export-dot", fixture_path("triangle"), "--format", "json"}).out)["nodes"].size() == 3);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"rate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"simulate", fixture_path("k4"), "--seed", "42"},
           {"pack", fixture_path("cliques_triangle")},
           {"analyze", fixture_path("square_tail")}}) {
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
