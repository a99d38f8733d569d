#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "graphgen/datasets.hpp"
#include "graphgen/graph_io.hpp"
#include "graphgen/metrics.hpp"
#include "test_util.hpp"

using namespace graphgen;
using testutil::TempDir;
using testutil::slurp;

TEST_CASE("grid generator") {
  const Graph g22 = gen_grid(2, 2);
  CHECK(g22.num_nodes() == 4);
  CHECK(g22.num_edges() == 4);
  for (int v = 0; v < 4; ++v) CHECK(g22.degree(v) == 2);

  const Graph g13 = gen_grid(1, 3);
  CHECK(g13.num_nodes() == 3);
  CHECK(g13.num_edges() == 2);

  const Graph g66 = gen_grid(6, 6);
  CHECK(g66.num_nodes() == 36);
  CHECK(g66.num_edges() == 60);

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int r = rng.uniform_int(1, 7), c = rng.uniform_int(1, 7);
    CHECK(gen_grid(r, c).num_edges() == 2 * r * c - r - c);
  }
}

TEST_CASE("grid-small spans exactly [4, 36] nodes and is triangle-free") {
  const auto graphs = gen_grid_small(500);
  CHECK(graphs.size() == 500);
  int min_n = 1000, max_n = 0;
  for (const auto& g : graphs) {
    min_n = std::min(min_n, g.num_nodes());
    max_n = std::max(max_n, g.num_nodes());
  }
  CHECK(min_n == 4);
  CHECK(max_n == 36);
  for (int i = 0; i < 15; ++i) {
    CHECK(triangle_count(graphs[i]) == 0);
    for (double c : clustering_values(graphs[i])) CHECK(c == 0.0);
  }
}

TEST_CASE("community graphs stay in the configured node range") {
  CommunityParams params;
  Rng rng(5);
  const auto graphs = gen_community_small(200, params, rng);
  for (const auto& g : graphs) {
    CHECK(g.num_nodes() >= 12);
    CHECK(g.num_nodes() <= 20);
  }
}

TEST_CASE("degenerate community parameters give two cliques") {
  CommunityParams params;
  params.p_intra = 1.0;
  params.inter_fraction = 0.0;
  Rng rng(7);
  const Graph g = gen_community_graph(params, rng);
  const int n = g.num_nodes();
  const int a = (n + 1) / 2, b = n / 2;
  CHECK(g.num_edges() == a * (a - 1) / 2 + b * (b - 1) / 2);
  CHECK(count_weak_components(g) == 2);
}

TEST_CASE("community mean density tracks the closed-form expectation") {
  CommunityParams params;
  Rng rng(11);
  const int trials = 500;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double d = density(gen_community_graph(params, rng));
    mean += d;
    m2 += d * d;
  }
  mean /= trials;
  const double sd = std::sqrt(std::max(0.0, m2 / trials - mean * mean));
  // E[density] averaged over n uniform in [12, 20].
  double expected = 0.0;
  for (int n = 12; n <= 20; ++n) {
    const int a = (n + 1) / 2, b = n / 2;
    const double intra = params.p_intra * (a * (a - 1) / 2.0 + b * (b - 1) / 2.0);
    const double inter = std::ceil(params.inter_fraction * n);
    expected += (intra + inter) / (n * (n - 1) / 2.0);
  }
  expected /= 9.0;
  CHECK(std::abs(mean - expected) < 3.0 * sd / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("citation edge lists load as the largest weak component") {
  TempDir dir;
  {
    std::ofstream out(dir.file("edges.txt"));
    out << "# comment line\n";
    out << "a b\n";
    out << "b c\n";
  }
  const auto loaded = load_citation_graph(dir.file("edges.txt"));
  CHECK(loaded.graph.num_nodes() == 3);
  CHECK(loaded.graph.num_edges() == 2);
  CHECK(loaded.graph.directed());

  {
    std::ofstream out(dir.file("two.txt"));
    out << "a b\nb c\nx y\n";
  }
  const auto two = load_citation_graph(dir.file("two.txt"));
  CHECK(two.graph.num_nodes() == 3);

  {
    std::ofstream out(dir.file("loops.txt"));
    out << "a a\na b\nc c\n";
  }
  const auto loops = load_citation_graph(dir.file("loops.txt"));
  CHECK(loops.dropped_self_loops == 2);
  CHECK(loops.graph.num_nodes() == 2);
}

TEST_CASE("ego extraction") {
  const Graph chain = Graph::build(3, {{0, 1}, {1, 2}}, true);

  const Graph zero = extract_ego(chain, 1, 0);
  CHECK(zero.num_nodes() == 1);
  CHECK(zero.num_edges() == 0);

  // Star, center at a leaf, one hop: just the leaf-hub edge.
  const Graph star = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}}, false);
  const Graph leaf_ego = extract_ego(star, 1, 1);
  CHECK(leaf_ego.num_nodes() == 2);
  CHECK(leaf_ego.num_edges() == 1);

  // Directed chain around the middle keeps both edges and their directions.
  const Graph mid = extract_ego(chain, 1, 1);
  CHECK(mid.num_nodes() == 3);
  CHECK(mid.num_edges() == 2);
  CHECK(mid.directed());
}

TEST_CASE("synthetic citation network is acyclic and hub-heavy") {
  CitationParams params;
  Rng rng(13);
  const Graph citation = gen_citation_synthetic(params, rng);
  CHECK(citation.num_nodes() == params.num_papers);
  CHECK_FALSE(has_cycle(citation));
  int max_deg = 0;
  for (int v = 0; v < citation.num_nodes(); ++v)
    max_deg = std::max(max_deg, citation.degree(v));
  CHECK(max_deg >= 20);
}

TEST_CASE("directed ego dataset respects the published bounds") {
  CitationParams params;
  Rng crng(17);
  const Graph citation = gen_citation_synthetic(params, crng);
  Rng rng(19);
  const auto egos = gen_ego_directed(citation, 50, rng);
  CHECK(egos.size() == 50);
  for (const auto& g : egos) {
    CHECK(g.num_nodes() >= 7);
    CHECK(g.num_nodes() <= 30);
    CHECK(g.directed());
    CHECK(count_weak_components(g) == 1);
    CHECK_FALSE(has_cycle(g));
  }
}

TEST_CASE("undirected ego dataset respects its bounds") {
  CitationParams params;
  Rng crng(23);
  const Graph citation = gen_citation_synthetic(params, crng);
  Rng rng(29);
  EgoParams ego;
  const auto egos = gen_ego_small(citation, 50, ego, rng);
  for (const auto& g : egos) {
    CHECK(g.num_nodes() >= 4);
    CHECK(g.num_nodes() <= 18);
    CHECK_FALSE(g.directed());
    CHECK(count_weak_components(g) == 1);
  }
}

TEST_CASE("ego sampling fails cleanly when the budget runs out") {
  const Graph tiny = Graph::build(2, {{0, 1}}, true);
  Rng rng(31);
  CHECK_THROWS_AS(gen_ego_directed(tiny, 10, rng), std::runtime_error);
}

TEST_CASE("estimate_m on a triangle is 2 regardless of samples") {
  const Graph tri = Graph::build(3, {{0, 1}, {0, 2}, {1, 2}}, false);
  for (int samples : {1, 10, 500}) {
    Rng rng(37);
    CHECK(estimate_m({tri}, samples, rng) == 2);
  }
}

TEST_CASE("estimate_m grows monotonically with the sample budget") {
  const auto graphs = gen_grid_small(30);
  std::vector<int> ms;
  for (int samples : {5, 20, 80, 320}) {
    Rng rng(41);
    ms.push_back(estimate_m(graphs, samples, rng));
  }
  CHECK(std::is_sorted(ms.begin(), ms.end()));
}

TEST_CASE("estimate_m bounds every sampled bandwidth") {
  const auto graphs = gen_grid_small(15);
  Rng rng(43);
  const int m = estimate_m(graphs, 400, rng);
  Rng replay(43);
  for (int s = 0; s < 400; ++s) {
    const Graph& g = graphs[replay.uniform_int(0, 14)];
    const int start = replay.uniform_int(0, g.num_nodes() - 1);
    CHECK(bandwidth(g, bfs_ordering(g, start, replay)) <= m);
  }
}

TEST_CASE("split ratios, determinism and partition") {
  std::vector<Graph> graphs;
  for (int i = 0; i < 10; ++i) graphs.push_back(gen_grid(2, 2 + i % 3));

  Rng a(47), b(47);
  const SplitDataset s1 = split(graphs, 0.8, a);
  const SplitDataset s2 = split(graphs, 0.8, b);
  CHECK(s1.train.size() == 8);
  CHECK(s1.test.size() == 2);
  REQUIRE(s1.train.size() == s2.train.size());
  for (std::size_t i = 0; i < s1.train.size(); ++i)
    CHECK(s1.train[i] == s2.train[i]);

  // union of sizes matches the input multiset of node counts
  std::multiset<int> in_sizes, out_sizes;
  for (const auto& g : graphs) in_sizes.insert(g.num_nodes());
  for (const auto& g : s1.train) out_sizes.insert(g.num_nodes());
  for (const auto& g : s1.test) out_sizes.insert(g.num_nodes());
  CHECK(in_sizes == out_sizes);

  CHECK_THROWS_AS(split({graphs[0]}, 0.8, a), std::invalid_argument);
}

TEST_CASE("generators are byte-deterministic through the file format") {
  TempDir dir;
  DatasetSpec spec;
  spec.name = "community-small";
  spec.count = 40;
  spec.seed = 99;
  write_graphs(dir.file("a.jsonl"), generate_dataset(spec), "c");
  write_graphs(dir.file("b.jsonl"), generate_dataset(spec), "c");
  CHECK(slurp(dir.file("a.jsonl")) == slurp(dir.file("b.jsonl")));

  DatasetSpec ego;
  ego.name = "ego-small";
  ego.count = 30;
  ego.seed = 7;
  write_graphs(dir.file("e1.jsonl"), generate_dataset(ego), "e");
  write_graphs(dir.file("e2.jsonl"), generate_dataset(ego), "e");
  CHECK(slurp(dir.file("e1.jsonl")) == slurp(dir.file("e2.jsonl")));
}
