#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include "graphgen/datasets.hpp"
#include "graphgen/metrics.hpp"
#include "test_util.hpp"

using namespace graphgen;
using testutil::random_graph;

namespace {

Graph example_graph() {
  return Graph::build(5, {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {2, 3}, {2, 4}}, false);
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::build(n, edges, false);
}

Graph star_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph::build(n, edges, false);
}

// ---- independent orbit oracle: scan every node subset of size 2..4 ----

int oracle_orbit(int size, int edges, int degree, int max_degree) {
  if (size == 2) return 0;
  if (size == 3) return edges == 3 ? 3 : (degree == 2 ? 2 : 1);
  switch (edges) {
    case 3:
      if (max_degree == 3) return degree == 3 ? 7 : 6;  // star
      return degree == 2 ? 5 : 4;                       // path
    case 4:
      if (max_degree == 3) return degree == 1 ? 9 : (degree == 3 ? 11 : 10);  // paw
      return 8;                                                               // cycle
    case 5:
      return degree == 3 ? 13 : 12;  // diamond
    case 6:
      return 14;  // K4
  }
  return -1;
}

std::vector<std::array<long long, 15>> brute_orbit_counts(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<std::array<long long, 15>> counts(n);
  for (auto& c : counts) c.fill(0);

  auto consider = [&](const std::vector<int>& nodes) {
    const int k = static_cast<int>(nodes.size());
    int edges = 0;
    std::array<int, 4> deg{};
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (g.has_edge(nodes[i], nodes[j])) {
          ++edges;
          ++deg[i];
          ++deg[j];
        }
    // connectivity of the induced subgraph
    std::array<bool, 4> seen{};
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < k; ++j)
        if (!seen[j] && g.has_edge(nodes[i], nodes[j])) {
          seen[j] = true;
          ++reached;
          stack.push_back(j);
        }
    }
    if (reached != k) return;
    int max_deg = 0;
    for (int i = 0; i < k; ++i) max_deg = std::max(max_deg, deg[i]);
    for (int i = 0; i < k; ++i)
      ++counts[nodes[i]][oracle_orbit(k, edges, deg[i], max_deg)];
  };

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      consider({a, b});
      for (int c = b + 1; c < n; ++c) {
        consider({a, b, c});
        for (int d = c + 1; d < n; ++d) consider({a, b, c, d});
      }
    }
  return counts;
}

// ---- independent EMD oracle: transportation LP solved by min-cost flow ----
// Successive shortest augmenting paths (Bellman-Ford on the residual network)
// on source -> supplies -> demands -> sink.

double transport_lp(const Histogram& p, const Histogram& q) {
  const int bins = static_cast<int>(p.masses.size());
  const int nodes = 2 * bins + 2;
  const int source = 2 * bins, sink = 2 * bins + 1;
  std::vector<std::vector<double>> cap(nodes, std::vector<double>(nodes, 0.0));
  std::vector<std::vector<double>> cost(nodes, std::vector<double>(nodes, 0.0));
  for (int i = 0; i < bins; ++i) {
    cap[source][i] = p.masses[i];
    cap[bins + i][sink] = q.masses[i];
    for (int j = 0; j < bins; ++j) {
      cap[i][bins + j] = 2.0;  // effectively unbounded
      cost[i][bins + j] = std::abs(i - j) * p.bin_width;
      cost[bins + j][i] = -cost[i][bins + j];
    }
  }
  double total = 0.0;
  for (;;) {
    // Bellman-Ford shortest path in the residual network.
    std::vector<double> dist(nodes, 1e18);
    std::vector<int> prev(nodes, -1);
    dist[source] = 0.0;
    for (int round = 0; round < nodes; ++round)
      for (int u = 0; u < nodes; ++u) {
        if (dist[u] >= 1e18) continue;
        for (int v = 0; v < nodes; ++v)
          if (cap[u][v] > 1e-13 && dist[u] + cost[u][v] < dist[v] - 1e-15) {
            dist[v] = dist[u] + cost[u][v];
            prev[v] = u;
          }
      }
    if (prev[sink] < 0) break;
    double flow = 1e18;
    for (int v = sink; v != source; v = prev[v]) flow = std::min(flow, cap[prev[v]][v]);
    for (int v = sink; v != source; v = prev[v]) {
      cap[prev[v]][v] -= flow;
      cap[v][prev[v]] += flow;
      total += flow * cost[prev[v]][v];
    }
  }
  return total;
}

}  // namespace

TEST_CASE("degree values") {
  const auto k3 = degree_values(complete_graph(3));
  CHECK(k3 == std::vector<double>{2, 2, 2});
  CHECK(degree_values(star_graph(4)) == std::vector<double>{3, 1, 1, 1});
  CHECK(degree_values(example_graph()) == std::vector<double>{3, 2, 3, 2, 2});
}

TEST_CASE("clustering values") {
  for (double c : clustering_values(complete_graph(3))) CHECK(c == 1.0);
  for (double c : clustering_values(gen_grid(4, 5))) CHECK(c == 0.0);
  const auto vals = clustering_values(example_graph());
  CHECK(vals[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("orbit counts on hand-checkable graphs") {
  const auto k3 = orbit_counts(complete_graph(3));
  for (int v = 0; v < 3; ++v) {
    CHECK(k3[v][0] == 2);  // two incident edges
    CHECK(k3[v][1] == 0);
    CHECK(k3[v][2] == 0);
    CHECK(k3[v][3] == 1);  // one triangle
  }
  const auto path = orbit_counts(Graph::build(3, {{0, 1}, {1, 2}}, false));
  CHECK(path[1][2] == 1);  // path center
  CHECK(path[0][1] == 1);  // path end
  CHECK(path[2][1] == 1);
  CHECK(path[1][1] == 0);
}

TEST_CASE("orbit counts match the all-subsets oracle on random graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = random_graph(rng.uniform_int(2, 8), rng.uniform_real(0.15, 0.7), rng);
    CHECK(orbit_counts(g) == brute_orbit_counts(g));
  }
}

TEST_CASE("orbit counting rejects directed graphs") {
  CHECK_THROWS_AS(orbit_counts(Graph::build(2, {{0, 1}}, true)),
                  std::invalid_argument);
}

TEST_CASE("betweenness examples") {
  const auto star = betweenness_values(star_graph(5));
  CHECK(star[0] == doctest::Approx(1.0));
  for (int v = 1; v < 5; ++v) CHECK(star[v] == 0.0);

  for (double b : betweenness_values(complete_graph(5))) CHECK(b == 0.0);

  const auto path = betweenness_values(Graph::build(3, {{0, 1}, {1, 2}}, false));
  CHECK(path[1] == doctest::Approx(1.0));
}

TEST_CASE("betweenness matches a pair-summation reference") {
  Rng rng(15);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = rng.uniform_int(4, 30);
    const Graph g = random_graph(n, 0.2, rng);

    // Reference: per-source BFS path counts, then explicit sum over (s, t)
    // pairs of sigma_st(v) / sigma_st.
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
      dist[s][s] = 0;
      sigma[s][s] = 1.0;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : g.neighbors(u)) {
          if (dist[s][w] < 0) {
            dist[s][w] = dist[s][u] + 1;
            q.push(w);
          }
          if (dist[s][w] == dist[s][u] + 1) sigma[s][w] += sigma[s][u];
        }
      }
    }
    std::vector<double> expected(n, 0.0);
    for (int v = 0; v < n; ++v) {
      for (int s = 0; s < n; ++s) {
        if (s == v) continue;
        for (int t = s + 1; t < n; ++t) {
          if (t == v || dist[s][t] < 0) continue;
          if (dist[s][v] < 0 || dist[v][t] < 0) continue;
          if (dist[s][v] + dist[v][t] == dist[s][t])
            expected[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
        }
      }
      if (n > 2) expected[v] /= (n - 1.0) * (n - 2.0) / 2.0;
    }
    const auto actual = betweenness_values(g);
    for (int v = 0; v < n; ++v) CHECK(actual[v] == doctest::Approx(expected[v]).epsilon(1e-9));
  }
}

TEST_CASE("closeness examples") {
  for (double c : closeness_values(complete_graph(3))) CHECK(c == doctest::Approx(0.5));
  const auto path = closeness_values(Graph::build(3, {{0, 1}, {1, 2}}, false));
  CHECK(path[0] == doctest::Approx(1.0 / 3.0));
  CHECK(path[2] == doctest::Approx(1.0 / 3.0));
  const auto star = closeness_values(star_graph(4));
  CHECK(star[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("closeness on disconnected graphs scales by component reach") {
  // Two components: an edge pair and an isolated node.
  const Graph g = Graph::build(3, {{0, 1}}, false);
  const auto c = closeness_values(g);
  // Nodes 0,1 reach one other node at distance 1, scaled by 1/2.
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.5));
  CHECK(c[2] == 0.0);
}

TEST_CASE("density examples") {
  CHECK(density(complete_graph(4)) == 1.0);
  CHECK(density(Graph::build(5, {}, false)) == 0.0);
  CHECK(density(example_graph()) == doctest::Approx(0.6));
}

TEST_CASE("transitivity examples") {
  CHECK(transitivity(complete_graph(3)) == 1.0);
  CHECK(transitivity(star_graph(6)) == 0.0);
  CHECK(transitivity(example_graph()) == 1.0 / 3.0);
  for (int n = 3; n <= 6; ++n) CHECK(transitivity(complete_graph(n)) == 1.0);
}

TEST_CASE("emd basics") {
  Histogram p{{0.5, 0.5, 0.0}, 1.0};
  CHECK(emd_1d(p, p) == 0.0);

  Histogram a{{1.0, 0.0, 0.0}, 1.0};
  Histogram b{{0.0, 1.0, 0.0}, 1.0};
  CHECK(emd_1d(a, b) == doctest::Approx(1.0));

  Histogram aw{{1.0, 0.0}, 0.25};
  Histogram bw{{0.0, 1.0}, 0.25};
  CHECK(emd_1d(aw, bw) == doctest::Approx(0.25));
}

TEST_CASE("emd equals the transport LP on small histograms") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int bins = rng.uniform_int(2, 5);
    Histogram p, q;
    p.bin_width = q.bin_width = rng.bernoulli(0.5) ? 1.0 : 0.1;
    p.masses.resize(bins);
    q.masses.resize(bins);
    double ps = 0, qs = 0;
    for (int i = 0; i < bins; ++i) {
      p.masses[i] = rng.uniform01();
      q.masses[i] = rng.uniform01();
      ps += p.masses[i];
      qs += q.masses[i];
    }
    for (int i = 0; i < bins; ++i) {
      p.masses[i] /= ps;
      q.masses[i] /= qs;
    }
    CHECK(emd_1d(p, q) == doctest::Approx(transport_lp(p, q)).epsilon(1e-9));
  }
}

TEST_CASE("emd satisfies the triangle inequality on random triples") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int bins = rng.uniform_int(2, 8);
    auto make = [&] {
      Histogram h;
      h.masses.resize(bins);
      double s = 0;
      for (auto& m : h.masses) {
        m = rng.uniform01();
        s += m;
      }
      for (auto& m : h.masses) m /= s;
      return h;
    };
    const Histogram a = make(), b = make(), c = make();
    CHECK(emd_1d(a, c) <= emd_1d(a, b) + emd_1d(b, c) + 1e-12);
  }
}

TEST_CASE("mmd axioms and hand expansion") {
  Histogram h1{{1.0, 0.0}, 1.0};
  Histogram h2{{0.0, 1.0}, 1.0};
  Histogram h3{{0.5, 0.5}, 1.0};

  const std::vector<Histogram> a{h1, h2};
  CHECK(mmd(a, a, 1.0) == 0.0);

  const std::vector<Histogram> b{h3, h1};
  CHECK(mmd(a, b, 1.0) == doctest::Approx(mmd(b, a, 1.0)));
  CHECK(mmd(a, b, 1.0) >= 0.0);

  // Hand expansion for 2-element sets: each mean has four kernel terms.
  auto k = [](const Histogram& x, const Histogram& y) {
    const double d = emd_1d(x, y);
    return std::exp(-d * d / 2.0);
  };
  const double kaa = (k(h1, h1) + k(h1, h2) + k(h2, h1) + k(h2, h2)) / 4.0;
  const double kbb = (k(h3, h3) + k(h3, h1) + k(h1, h3) + k(h1, h1)) / 4.0;
  const double kab = (k(h1, h3) + k(h1, h1) + k(h2, h3) + k(h2, h1)) / 4.0;
  CHECK(mmd(a, b, 1.0) == doctest::Approx(kaa + kbb - 2 * kab).epsilon(1e-12));
}

TEST_CASE("mean_abs_diff") {
  const std::vector<Graph> a{complete_graph(4)};
  CHECK(mean_abs_diff(a, a, density) == 0.0);

  // densities 0.2 vs 0.5 -> 0.3
  const Graph g1 = Graph::build(5, {{0, 1}, {2, 3}}, false);            // 2/10
  const Graph g2 = Graph::build(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}}, false);
  CHECK(mean_abs_diff({g1}, {g2}, density) == doctest::Approx(0.3));
}

TEST_CASE("statistics are permutation invariant") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_graph(rng.uniform_int(3, 10), 0.4, rng);
    const Graph h = relabel(g, random_ordering(g, rng));
    CHECK(density(g) == doctest::Approx(density(h)));
    CHECK(transitivity(g) == doctest::Approx(transitivity(h)));
    auto sorted = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK(sorted(degree_values(g)) == sorted(degree_values(h)));
    auto approx_equal = [&](std::vector<double> x, std::vector<double> y) {
      x = sorted(x);
      y = sorted(y);
      REQUIRE(x.size() == y.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-9));
    };
    approx_equal(clustering_values(g), clustering_values(h));
    approx_equal(betweenness_values(g), betweenness_values(h));
    approx_equal(closeness_values(g), closeness_values(h));
  }
}

TEST_CASE("evaluate: identical sets score zero everywhere") {
  Rng rng(37);
  std::vector<Graph> set;
  for (int i = 0; i < 6; ++i) set.push_back(random_graph(8, 0.4, rng));
  const MmdReport r = evaluate(set, set, KernelConfig{});
  CHECK(r.degree == 0.0);
  CHECK(r.clustering == 0.0);
  REQUIRE(r.orbit.has_value());
  CHECK(*r.orbit == 0.0);
  CHECK(r.betweenness == 0.0);
  CHECK(r.closeness == 0.0);
  CHECK(r.density_diff == 0.0);
  CHECK(r.transitivity_diff == 0.0);
}

TEST_CASE("evaluate: mismatched families score worse than matched ones") {
  Rng rng(41);
  std::vector<Graph> grids1 = gen_grid_small(40);
  std::vector<Graph> grids2 = gen_grid_small(40);
  std::vector<Graph> er;
  for (int i = 0; i < 40; ++i) er.push_back(random_graph(16, 0.5, rng));
  const KernelConfig cfg;
  const double matched = evaluate(grids1, grids2, cfg).degree;
  const double mismatched = evaluate(er, grids2, cfg).degree;
  CHECK(mismatched > 10.0 * matched);
}

TEST_CASE("evaluate omits orbit scores for directed graphs") {
  std::vector<Graph> dir{Graph::build(3, {{0, 1}, {1, 2}}, true)};
  const MmdReport r = evaluate(dir, dir, KernelConfig{});
  CHECK_FALSE(r.orbit.has_value());
  CHECK(r.components_per_graph == doctest::Approx(1.0));
}
