#include "graphgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <stack>
#include <stdexcept>

namespace graphgen {

std::vector<double> degree_values(const Graph& g) {
  std::vector<double> out(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) out[v] = g.degree(v);
  return out;
}

std::vector<double> clustering_values(const Graph& g) {
  std::vector<double> out(g.num_nodes(), 0.0);
  for (int v = 0; v < g.num_nodes(); ++v) {
    const auto& nb = g.neighbors(v);
    const int d = static_cast<int>(nb.size());
    if (d < 2) continue;
    long long closed = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (g.has_edge(nb[i], nb[j]) || g.has_edge(nb[j], nb[i])) ++closed;
    out[v] = static_cast<double>(closed) / (0.5 * d * (d - 1));
  }
  return out;
}

std::vector<double> betweenness_values(const Graph& g) {
  // Brandes' dependency accumulation on the undirected view, normalized so a
  // node on every shortest path scores 1.
  const int n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  if (n <= 2) return bc;

  for (int s = 0; s < n; ++s) {
    std::stack<int> order;
    std::vector<std::vector<int>> preds(n);
    std::vector<long long> sigma(n, 0);
    std::vector<int> dist(n, -1);
    sigma[s] = 1;
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      order.push(v);
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::vector<double> delta(n, 0.0);
    while (!order.empty()) {
      const int w = order.top();
      order.pop();
      for (int v : preds[w])
        delta[v] += (static_cast<double>(sigma[v]) / sigma[w]) * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was counted twice; pair count is (n-1)(n-2)/2.
  const double scale = 1.0 / (static_cast<double>(n - 1) * (n - 2));
  for (double& x : bc) x *= scale;
  return bc;
}

std::vector<double> closeness_values(const Graph& g) {
  // Reciprocal of the summed distances to all other nodes. On a disconnected
  // graph the sum runs within the node's component and the value is scaled
  // by (reachable - 1) / (n - 1).
  const int n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  if (n <= 1) return out;
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    long long total = 0;
    int reached = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      total += dist[v];
      ++reached;
      for (int w : g.neighbors(v))
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
    if (reached > 1 && total > 0)
      out[s] = (static_cast<double>(reached - 1) / (n - 1)) / total;
  }
  return out;
}

namespace {

/// Orbit of each member of a connected induced subgraph, keyed by subgraph
/// size, edge count and the node's degree inside the subgraph.
int orbit_of(int size, int edge_count, int degree) {
  switch (size) {
    case 2:
      return 0;
    case 3:
      if (edge_count == 2) return degree == 2 ? 2 : 1;  // path
      return 3;                                         // triangle
    case 4:
      switch (edge_count) {
        case 3:
          if (degree == 3) return 7;  // star center
          if (degree == 1) {
            return -1;  // resolved by caller: star leaf vs path end
          }
          return 5;  // path middle
        case 4:
          if (degree == 1) return 9;   // paw tail
          if (degree == 3) return 11;  // paw hub
          return -2;                   // cycle node vs paw cycle node
        case 5:
          return degree == 3 ? 13 : 12;  // diamond
        case 6:
          return 14;  // K4
      }
  }
  throw std::logic_error("orbit_of: impossible graphlet");
}

struct SubgraphClassifier {
  const Graph& g;

  // Classifies nodes[0..k) (a connected induced subgraph) and bumps counts.
  void tally(const std::vector<int>& nodes, int k,
             std::vector<std::array<long long, 15>>& counts) const {
    int edge_count = 0;
    std::array<int, 4> deg{};
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (g.has_edge(nodes[i], nodes[j])) {
          ++edge_count;
          ++deg[i];
          ++deg[j];
        }
    int max_deg = 0;
    for (int i = 0; i < k; ++i) max_deg = std::max(max_deg, deg[i]);
    for (int i = 0; i < k; ++i) {
      int orb = orbit_of(k, edge_count, deg[i]);
      if (orb == -1) orb = max_deg == 3 ? 6 : 4;  // star leaf vs path end
      if (orb == -2) orb = max_deg == 3 ? 10 : 8;  // paw cycle vs C4
      ++counts[nodes[i]][orb];
    }
  }
};

/// ESU-style enumeration: grow subgraphs from each root using only nodes with
/// larger index, so every connected induced subgraph of size <= 4 is visited
/// exactly once.
void enumerate_subgraphs(const Graph& g, const SubgraphClassifier& classify,
                         std::vector<std::array<long long, 15>>& counts) {
  const int n = g.num_nodes();
  std::vector<int> sub;
  std::vector<int> in_sub(n, 0);

  struct Frame {
    std::vector<int> extension;
  };

  for (int root = 0; root < n; ++root) {
    std::vector<int> ext;
    for (int v : g.neighbors(root))
      if (v > root) ext.push_back(v);
    sub = {root};
    in_sub[root] = 1;

    // Depth-first extension with explicit recursion.
    std::function<void(std::vector<int>)> extend = [&](std::vector<int> extension) {
      const int k = static_cast<int>(sub.size());
      if (k >= 2) classify.tally(sub, k, counts);
      if (k == 4) return;
      while (!extension.empty()) {
        const int w = extension.back();
        extension.pop_back();
        std::vector<int> next = extension;
        for (int u : g.neighbors(w)) {
          if (u <= root || in_sub[u]) continue;
          bool neighbor_of_sub = false;
          for (int s : sub)
            if (g.has_edge(u, s)) {
              neighbor_of_sub = true;
              break;
            }
          if (!neighbor_of_sub &&
              std::find(next.begin(), next.end(), u) == next.end())
            next.push_back(u);
        }
        sub.push_back(w);
        in_sub[w] = 1;
        extend(std::move(next));
        in_sub[w] = 0;
        sub.pop_back();
      }
    };
    extend(std::move(ext));
    in_sub[root] = 0;
  }
}

}  // namespace

std::vector<std::array<long long, 15>> orbit_counts(const Graph& g) {
  if (g.directed())
    throw std::invalid_argument("orbit_counts: directed graphs are not supported");
  std::vector<std::array<long long, 15>> counts(g.num_nodes());
  for (auto& c : counts) c.fill(0);
  SubgraphClassifier classifier{g};
  enumerate_subgraphs(g, classifier, counts);
  return counts;
}

std::array<double, 15> mean_orbit_counts(const Graph& g) {
  std::array<double, 15> mean{};
  const auto counts = orbit_counts(g);
  if (counts.empty()) return mean;
  for (const auto& row : counts)
    for (int k = 0; k < 15; ++k) mean[k] += static_cast<double>(row[k]);
  for (auto& x : mean) x /= static_cast<double>(counts.size());
  return mean;
}

double density(const Graph& g) {
  const long long n = g.num_nodes();
  if (n <= 1) return 0.0;
  const double possible =
      g.directed() ? static_cast<double>(n) * (n - 1)
                   : static_cast<double>(n) * (n - 1) / 2.0;
  return static_cast<double>(g.num_edges()) / possible;
}

long long triangle_count(const Graph& g) {
  long long triangles = 0;
  for (auto [u, v] : g.edges()) {
    const auto& nu = g.neighbors(u);
    const auto& nv = g.neighbors(v);
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
      if (nu[i] == nv[j]) {
        if (nu[i] > v) ++triangles;  // count each triangle once via u < v < w
        ++i;
        ++j;
      } else if (nu[i] < nv[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  return triangles;
}

double transitivity(const Graph& g) {
  long long triads = 0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const long long d = g.degree(v);
    triads += d * (d - 1) / 2;
  }
  if (triads == 0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) / static_cast<double>(triads);
}

double emd_1d(const Histogram& p, const Histogram& q) {
  if (p.masses.size() != q.masses.size() || p.bin_width != q.bin_width)
    throw std::invalid_argument("emd_1d: histograms must share a grid");
  double cdf_gap = 0.0, total = 0.0;
  for (std::size_t i = 0; i < p.masses.size(); ++i) {
    cdf_gap += p.masses[i] - q.masses[i];
    total += std::abs(cdf_gap);
  }
  return total * p.bin_width;
}

Histogram histogram_integer(const std::vector<double>& values, int max_value) {
  Histogram h;
  h.bin_width = 1.0;
  h.masses.assign(static_cast<std::size_t>(max_value) + 1, 0.0);
  if (values.empty()) return h;
  for (double v : values) {
    const int k = std::clamp(static_cast<int>(std::lround(v)), 0, max_value);
    h.masses[k] += 1.0;
  }
  for (double& m : h.masses) m /= static_cast<double>(values.size());
  return h;
}

Histogram histogram_unit_interval(const std::vector<double>& values, int bins) {
  Histogram h;
  h.bin_width = 1.0 / bins;
  h.masses.assign(bins, 0.0);
  if (values.empty()) return h;
  for (double v : values) {
    const int k = std::clamp(static_cast<int>(v * bins), 0, bins - 1);
    h.masses[k] += 1.0;
  }
  for (double& m : h.masses) m /= static_cast<double>(values.size());
  return h;
}

namespace {

double gaussian_emd_kernel(const Histogram& x, const Histogram& y, double sigma) {
  const double d = emd_1d(x, y);
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

template <typename T, typename Kernel>
double mmd_vstat(const std::vector<T>& a, const std::vector<T>& b, Kernel k) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mmd: empty set");
  double kaa = 0.0, kbb = 0.0, kab = 0.0;
  for (const auto& x : a)
    for (const auto& y : a) kaa += k(x, y);
  for (const auto& x : b)
    for (const auto& y : b) kbb += k(x, y);
  for (const auto& x : a)
    for (const auto& y : b) kab += k(x, y);
  kaa /= static_cast<double>(a.size()) * a.size();
  kbb /= static_cast<double>(b.size()) * b.size();
  kab /= static_cast<double>(a.size()) * b.size();
  return std::max(0.0, kaa + kbb - 2.0 * kab);
}

}  // namespace

double mmd(const std::vector<Histogram>& set_a, const std::vector<Histogram>& set_b,
           double sigma) {
  return mmd_vstat(set_a, set_b, [sigma](const Histogram& x, const Histogram& y) {
    return gaussian_emd_kernel(x, y, sigma);
  });
}

double mmd_euclidean(const std::vector<std::array<double, 15>>& set_a,
                     const std::vector<std::array<double, 15>>& set_b,
                     double sigma) {
  auto kernel = [sigma](const std::array<double, 15>& x,
                        const std::array<double, 15>& y) {
    double d2 = 0.0;
    for (int i = 0; i < 15; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    return std::exp(-d2 / (2.0 * sigma * sigma));
  };
  return mmd_vstat(set_a, set_b, kernel);
}

double mean_abs_diff(const std::vector<Graph>& set_a, const std::vector<Graph>& set_b,
                     double (*stat)(const Graph&)) {
  if (set_a.empty() || set_b.empty())
    throw std::invalid_argument("mean_abs_diff: empty set");
  double ma = 0.0, mb = 0.0;
  for (const auto& g : set_a) ma += stat(g);
  for (const auto& g : set_b) mb += stat(g);
  return std::abs(ma / set_a.size() - mb / set_b.size());
}

namespace {

std::vector<Histogram> value_histograms(const std::vector<Graph>& graphs,
                                        std::vector<double> (*values)(const Graph&),
                                        int bins) {
  std::vector<Histogram> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(histogram_unit_interval(values(g), bins));
  return out;
}

}  // namespace

MmdReport evaluate(const std::vector<Graph>& generated, const std::vector<Graph>& test,
                   const KernelConfig& cfg) {
  if (generated.empty() || test.empty())
    throw std::invalid_argument("evaluate: empty graph set");

  const bool any_directed = [&] {
    for (const auto& g : generated)
      if (g.directed()) return true;
    for (const auto& g : test)
      if (g.directed()) return true;
    return false;
  }();

  // Directed graphs are compared on their undirected views (orbit scoring is
  // skipped entirely).
  std::vector<Graph> gen_u, test_u;
  const std::vector<Graph>* gen = &generated;
  const std::vector<Graph>* tst = &test;
  if (any_directed) {
    for (const auto& g : generated) gen_u.push_back(g.as_undirected());
    for (const auto& g : test) test_u.push_back(g.as_undirected());
    gen = &gen_u;
    tst = &test_u;
  }

  MmdReport report;

  int max_degree = 0;
  for (const auto& g : *gen)
    for (int v = 0; v < g.num_nodes(); ++v) max_degree = std::max(max_degree, g.degree(v));
  for (const auto& g : *tst)
    for (int v = 0; v < g.num_nodes(); ++v) max_degree = std::max(max_degree, g.degree(v));

  auto degree_hists = [&](const std::vector<Graph>& graphs) {
    std::vector<Histogram> out;
    out.reserve(graphs.size());
    for (const auto& g : graphs)
      out.push_back(histogram_integer(degree_values(g), max_degree));
    return out;
  };
  report.degree = mmd(degree_hists(*gen), degree_hists(*tst), cfg.sigma_degree);

  report.clustering =
      mmd(value_histograms(*gen, clustering_values, cfg.value_bins),
          value_histograms(*tst, clustering_values, cfg.value_bins),
          cfg.sigma_clustering);

  if (!any_directed) {
    std::vector<std::array<double, 15>> oa, ob;
    for (const auto& g : *gen) oa.push_back(mean_orbit_counts(g));
    for (const auto& g : *tst) ob.push_back(mean_orbit_counts(g));
    report.orbit = mmd_euclidean(oa, ob, cfg.sigma_orbit);
  }

  report.betweenness =
      mmd(value_histograms(*gen, betweenness_values, cfg.value_bins),
          value_histograms(*tst, betweenness_values, cfg.value_bins),
          cfg.sigma_betweenness);
  report.closeness =
      mmd(value_histograms(*gen, closeness_values, cfg.value_bins),
          value_histograms(*tst, closeness_values, cfg.value_bins),
          cfg.sigma_closeness);

  report.density_diff = mean_abs_diff(*gen, *tst, density);
  report.transitivity_diff = mean_abs_diff(*gen, *tst, transitivity);

  double comp = 0.0;
  for (const auto& g : generated) comp += count_weak_components(g);
  report.components_per_graph = comp / static_cast<double>(generated.size());
  return report;
}

std::string report_to_csv(const MmdReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "metric,value\n";
  out << "degree_mmd," << report.degree << '\n';
  out << "clustering_mmd," << report.clustering << '\n';
  if (report.orbit) out << "orbit_mmd," << *report.orbit << '\n';
  out << "betweenness_mmd," << report.betweenness << '\n';
  out << "closeness_mmd," << report.closeness << '\n';
  out << "density_diff," << report.density_diff << '\n';
  out << "transitivity_diff," << report.transitivity_diff << '\n';
  out << "components_per_graph," << report.components_per_graph << '\n';
  return out.str();
}

}  // namespace graphgen
