#include <doctest.h>

#include <fstream>

#include "graphgen/graph_io.hpp"
#include "test_util.hpp"

using namespace graphgen;
using testutil::TempDir;
using testutil::slurp;

TEST_CASE("graph sets round-trip with ids") {
  TempDir dir;
  std::vector<GraphRecord> records;
  records.push_back({"a", Graph::build(3, {{0, 1}, {1, 2}}, false)});
  records.push_back({"b", Graph::build(2, {{1, 0}}, true)});
  const std::string path = dir.file("set.jsonl");
  write_graph_set(path, records);

  const auto back = read_graph_set(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "a");
  CHECK(back[0].graph == records[0].graph);
  CHECK(back[1].graph.directed());
  CHECK(back[1].graph.has_edge(1, 0));
  CHECK_FALSE(back[1].graph.has_edge(0, 1));
}

TEST_CASE("writing is deterministic and stores undirected edges once") {
  TempDir dir;
  const Graph g = Graph::build(3, {{2, 1}, {1, 0}}, false);
  write_graphs(dir.file("a.jsonl"), {g}, "x");
  write_graphs(dir.file("b.jsonl"), {g}, "x");
  const std::string a = slurp(dir.file("a.jsonl"));
  CHECK(a == slurp(dir.file("b.jsonl")));
  CHECK(a.find("[0,1]") != std::string::npos);
  CHECK(a.find("[1,2]") != std::string::npos);
  CHECK(a.find("[2,1]") == std::string::npos);
}

TEST_CASE("missing and malformed files raise") {
  CHECK_THROWS_AS(read_graph_set("/nonexistent/file.jsonl"), std::runtime_error);

  TempDir dir;
  std::ofstream(dir.file("bad.jsonl")) << "not json\n";
  CHECK_THROWS_AS(read_graph_set(dir.file("bad.jsonl")), std::runtime_error);
}
