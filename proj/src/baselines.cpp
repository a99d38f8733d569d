#include "graphgen/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphgen/metrics.hpp"

namespace graphgen {

namespace {

std::vector<int> collect_node_counts(const std::vector<Graph>& train) {
  std::vector<int> counts;
  counts.reserve(train.size());
  for (const auto& g : train) counts.push_back(g.num_nodes());
  return counts;
}

int draw_node_count(const std::vector<int>& counts, Rng& rng) {
  return counts[rng.uniform_int(0, static_cast<int>(counts.size()) - 1)];
}

}  // namespace

ErParams er_fit(const std::vector<Graph>& train) {
  if (train.empty()) throw std::invalid_argument("er_fit: empty training set");
  ErParams params;
  double sum = 0.0;
  for (const auto& g : train) sum += density(g);
  params.p = sum / static_cast<double>(train.size());
  params.node_counts = collect_node_counts(train);
  return params;
}

BaParams ba_fit(const std::vector<Graph>& train) {
  if (train.empty()) throw std::invalid_argument("ba_fit: empty training set");
  BaParams params;
  double sum = 0.0;
  for (const auto& g : train) {
    if (g.num_nodes() > 0)
      sum += static_cast<double>(g.num_edges()) / g.num_nodes();
  }
  const double mean_ratio = sum / static_cast<double>(train.size());
  params.m = std::max(1, static_cast<int>(std::lround(mean_ratio)));
  params.node_counts = collect_node_counts(train);
  return params;
}

Graph er_graph(int n, double p, Rng& rng) {
  if (n < 0) throw std::invalid_argument("er_graph: n must be nonnegative");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("er_graph: p out of [0, 1]");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph::build(n, edges, false);
}

Graph ba_graph(int n, int m, Rng& rng) {
  if (n < 1) throw std::invalid_argument("ba_graph: n must be positive");
  if (m < 1) throw std::invalid_argument("ba_graph: m must be >= 1");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree(n, 0);
  // Repeated-endpoints list makes degree-proportional draws O(1).
  std::vector<int> pool;
  const int core = std::min(m, n);
  for (int t = core; t < n; ++t) {
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < m && static_cast<int>(chosen.size()) < t) {
      int target;
      if (pool.empty()) {
        target = rng.uniform_int(0, t - 1);
      } else {
        target = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
      }
      if (std::find(chosen.begin(), chosen.end(), target) != chosen.end()) continue;
      chosen.push_back(target);
    }
    for (int target : chosen) {
      edges.emplace_back(target, t);
      ++degree[target];
      ++degree[t];
      pool.push_back(target);
      pool.push_back(t);
    }
  }
  return Graph::build(n, edges, false);
}

std::vector<Graph> er_sample(const ErParams& params, int count, Rng& rng) {
  if (params.node_counts.empty())
    throw std::invalid_argument("er_sample: no node counts to draw from");
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(er_graph(draw_node_count(params.node_counts, rng), params.p, rng));
  return out;
}

std::vector<Graph> ba_sample(const BaParams& params, int count, Rng& rng) {
  if (params.node_counts.empty())
    throw std::invalid_argument("ba_sample: no node counts to draw from");
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(ba_graph(draw_node_count(params.node_counts, rng), params.m, rng));
  return out;
}

}  // namespace graphgen
