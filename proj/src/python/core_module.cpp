#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphgen/baselines.hpp"
#include "graphgen/config.hpp"
#include "graphgen/datasets.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/graph_io.hpp"
#include "graphgen/metrics.hpp"
#include "graphgen/models.hpp"
#include "graphgen/sequence.hpp"

namespace py = pybind11;
using namespace graphgen;

namespace {

std::vector<std::vector<int>> matrix_rows(const AdjacencyMatrix& a) {
  std::vector<std::vector<int>> rows(a.size(), std::vector<int>(a.size(), 0));
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) rows[i][j] = a(i, j);
  return rows;
}

GraphSequence sequence_from_rows(const std::vector<std::vector<int>>& rows,
                                 const std::string& alphabet,
                                 std::optional<int> m) {
  GraphSequence seq;
  seq.alphabet = alphabet == "directed4" ? SequenceAlphabet::Directed4
                                         : SequenceAlphabet::Binary;
  seq.truncation_m = m;
  seq.num_nodes = static_cast<int>(rows.size()) + 1;
  for (const auto& row : rows) {
    std::vector<std::uint8_t> r(row.begin(), row.end());
    seq.rows.push_back(std::move(r));
  }
  return seq;
}

std::vector<std::vector<int>> sequence_rows(const GraphSequence& seq) {
  std::vector<std::vector<int>> rows;
  for (const auto& row : seq.rows) rows.emplace_back(row.begin(), row.end());
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph generation core: sequence codecs, datasets, baselines, metrics";

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int num_nodes, const std::vector<std::pair<int, int>>& edges,
                       bool directed) {
             return Graph::build(num_nodes, edges, directed);
           }),
           py::arg("num_nodes"), py::arg("edges"), py::arg("directed") = false)
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("directed", &Graph::directed)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("edges", [](const Graph& g) { return g.edges(); })
      .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("neighbors",
           [](const Graph& g, int u) { return g.neighbors(u); }, py::arg("u"))
      .def("as_undirected", &Graph::as_undirected)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " m=" +
               std::to_string(g.num_edges()) + (g.directed() ? " directed>" : ">");
      });

  m.def(
      "bfs_ordering",
      [](const Graph& g, int start, std::uint64_t seed) {
        Rng rng(seed);
        return bfs_ordering(g, start, rng).perm;
      },
      py::arg("graph"), py::arg("start"), py::arg("seed") = 0);
  m.def(
      "topological_ordering",
      [](const Graph& g, std::uint64_t seed) {
        Rng rng(seed);
        return topological_ordering(g, rng).perm;
      },
      py::arg("graph"), py::arg("seed") = 0);
  m.def(
      "bandwidth",
      [](const Graph& g, const std::vector<int>& perm) {
        return bandwidth(g, NodeOrdering{perm, OrderingKind::Identity});
      },
      py::arg("graph"), py::arg("perm"));
  m.def(
      "permute_adjacency",
      [](const Graph& g, const std::vector<int>& perm) {
        return matrix_rows(
            permute_adjacency(g, NodeOrdering{perm, OrderingKind::Identity}));
      },
      py::arg("graph"), py::arg("perm"));

  m.def(
      "encode_sequence",
      [](const Graph& g, const std::vector<int>& perm, std::optional<int> m_opt) {
        return sequence_rows(encode_sequence(
            g, NodeOrdering{perm, OrderingKind::Identity}, m_opt));
      },
      py::arg("graph"), py::arg("perm"), py::arg("m") = py::none());
  m.def(
      "encode_directed",
      [](const Graph& g, const std::vector<int>& perm, std::optional<int> m_opt) {
        return sequence_rows(encode_directed(
            g, NodeOrdering{perm, OrderingKind::Identity}, m_opt));
      },
      py::arg("graph"), py::arg("perm"), py::arg("m") = py::none());
  m.def(
      "decode_sequence",
      [](const std::vector<std::vector<int>>& rows, const std::string& alphabet,
         std::optional<int> m_opt) {
        return decode_sequence(sequence_from_rows(rows, alphabet, m_opt));
      },
      py::arg("rows"), py::arg("alphabet") = "binary", py::arg("m") = py::none());
  m.def(
      "decode_dag",
      [](const std::vector<std::vector<int>>& rows) {
        return decode_dag(sequence_from_rows(rows, "binary", std::nullopt));
      },
      py::arg("rows"));

  // datasets
  m.def("gen_grid", &gen_grid, py::arg("rows"), py::arg("cols"));
  m.def("gen_grid_small", &gen_grid_small, py::arg("count"));
  m.def(
      "gen_community_small",
      [](int count, std::uint64_t seed) {
        CommunityParams params;
        Rng rng(seed);
        return gen_community_small(count, params, rng);
      },
      py::arg("count"), py::arg("seed"));
  m.def(
      "estimate_m",
      [](const std::vector<Graph>& graphs, int samples, std::uint64_t seed) {
        Rng rng(seed);
        return estimate_m(graphs, samples, rng);
      },
      py::arg("graphs"), py::arg("samples") = 9000, py::arg("seed") = 0);
  m.def(
      "split",
      [](const std::vector<Graph>& graphs, double ratio, std::uint64_t seed) {
        Rng rng(seed);
        SplitDataset s = split(graphs, ratio, rng);
        return py::make_tuple(s.train, s.test);
      },
      py::arg("graphs"), py::arg("ratio") = 0.8, py::arg("seed") = 0);
  m.def(
      "extract_ego",
      [](const Graph& g, int center, int hops) { return extract_ego(g, center, hops); },
      py::arg("graph"), py::arg("center"), py::arg("hops"));

  // baselines
  m.def(
      "er_fit", [](const std::vector<Graph>& train) { return er_fit(train).p; },
      py::arg("train"));
  m.def(
      "ba_fit", [](const std::vector<Graph>& train) { return ba_fit(train).m; },
      py::arg("train"));
  m.def(
      "er_sample",
      [](const std::vector<Graph>& train, int count, std::uint64_t seed) {
        Rng rng(seed);
        return er_sample(er_fit(train), count, rng);
      },
      py::arg("train"), py::arg("count"), py::arg("seed") = 0);
  m.def(
      "ba_sample",
      [](const std::vector<Graph>& train, int count, std::uint64_t seed) {
        Rng rng(seed);
        return ba_sample(ba_fit(train), count, rng);
      },
      py::arg("train"), py::arg("count"), py::arg("seed") = 0);

  // metrics
  m.def("degree_values", &degree_values, py::arg("graph"));
  m.def("clustering_values", &clustering_values, py::arg("graph"));
  m.def("betweenness_values", &betweenness_values, py::arg("graph"));
  m.def("closeness_values", &closeness_values, py::arg("graph"));
  m.def(
      "orbit_counts",
      [](const Graph& g) {
        std::vector<std::vector<long long>> rows;
        for (const auto& row : orbit_counts(g))
          rows.emplace_back(row.begin(), row.end());
        return rows;
      },
      py::arg("graph"));
  m.def("density", &density, py::arg("graph"));
  m.def("transitivity", &transitivity, py::arg("graph"));
  m.def(
      "evaluate",
      [](const std::vector<Graph>& generated, const std::vector<Graph>& test) {
        const MmdReport r = evaluate(generated, test, KernelConfig{});
        py::dict d;
        d["degree_mmd"] = r.degree;
        d["clustering_mmd"] = r.clustering;
        if (r.orbit) d["orbit_mmd"] = *r.orbit;
        d["betweenness_mmd"] = r.betweenness;
        d["closeness_mmd"] = r.closeness;
        d["density_diff"] = r.density_diff;
        d["transitivity_diff"] = r.transitivity_diff;
        d["components_per_graph"] = r.components_per_graph;
        return d;
      },
      py::arg("generated"), py::arg("test"));

  // files + sampling
  m.def("read_graphs", &read_graphs, py::arg("path"));
  m.def(
      "write_graphs",
      [](const std::string& path, const std::vector<Graph>& graphs,
         const std::string& prefix) { write_graphs(path, graphs, prefix); },
      py::arg("path"), py::arg("graphs"), py::arg("id_prefix") = "graph");
  m.def("sample_from_checkpoint", &sample_from_checkpoint, py::arg("checkpoint"),
        py::arg("count"), py::arg("seed") = 0);
}
