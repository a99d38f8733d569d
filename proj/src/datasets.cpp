#include "graphgen/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace graphgen {

Graph gen_grid(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("gen_grid: rows and cols must be >= 1");
  std::vector<std::pair<int, int>> edges;
  auto at = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (r + 1 < rows) edges.emplace_back(at(r, c), at(r + 1, c));
      if (c + 1 < cols) edges.emplace_back(at(r, c), at(r, c + 1));
    }
  return Graph::build(rows * cols, edges, false);
}

std::vector<Graph> gen_grid_small(int count) {
  if (count <= 0) throw std::invalid_argument("gen_grid_small: count must be positive");
  std::vector<Graph> base;
  for (int r = 2; r <= 6; ++r)
    for (int c = r; c <= 6; ++c) base.push_back(gen_grid(r, c));
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(base[i % base.size()]);
  return out;
}

Graph gen_community_graph(const CommunityParams& params, Rng& rng) {
  const int n = rng.uniform_int(params.min_nodes, params.max_nodes);
  const int size_a = (n + 1) / 2;
  std::vector<std::pair<int, int>> edges;
  auto er_block = [&](int lo, int hi) {
    for (int u = lo; u < hi; ++u)
      for (int v = u + 1; v < hi; ++v)
        if (rng.bernoulli(params.p_intra)) edges.emplace_back(u, v);
  };
  er_block(0, size_a);
  er_block(size_a, n);

  const int inter = static_cast<int>(std::ceil(params.inter_fraction * n));
  std::vector<std::pair<int, int>> cross;
  for (int u = 0; u < size_a; ++u)
    for (int v = size_a; v < n; ++v) cross.emplace_back(u, v);
  rng.shuffle(cross);
  for (int k = 0; k < inter && k < static_cast<int>(cross.size()); ++k)
    edges.push_back(cross[k]);

  return Graph::build(n, edges, false);
}

std::vector<Graph> gen_community_small(int count, const CommunityParams& params,
                                       Rng& rng) {
  if (count <= 0)
    throw std::invalid_argument("gen_community_small: count must be positive");
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(gen_community_graph(params, rng));
  return out;
}

CitationLoadResult load_citation_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open citation edge list: " + path);

  std::map<std::string, int> ids;
  std::vector<std::pair<int, int>> edges;
  int dropped = 0;
  std::string line;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(ids.size()));
    (void)inserted;
    return it->second;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string src, dst;
    if (!(ss >> src >> dst)) continue;
    if (src == dst) {
      ++dropped;
      continue;
    }
    edges.emplace_back(intern(src), intern(dst));
  }
  const int total = static_cast<int>(ids.size());
  if (total == 0) throw std::runtime_error("citation edge list is empty: " + path);

  const Graph full = Graph::build(total, edges, true);

  // Largest weakly connected component, densely reindexed.
  std::vector<int> comp(total, -1);
  int num_comp = 0;
  std::vector<int> stack;
  for (int s = 0; s < total; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = num_comp;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : full.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = num_comp;
          stack.push_back(v);
        }
    }
    ++num_comp;
  }
  std::vector<int> comp_size(num_comp, 0);
  for (int c : comp) ++comp_size[c];
  const int best =
      static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) -
                       comp_size.begin());

  std::vector<int> new_id(total, -1);
  int next = 0;
  for (int v = 0; v < total; ++v)
    if (comp[v] == best) new_id[v] = next++;
  std::vector<std::pair<int, int>> kept;
  for (auto [u, v] : full.edges())
    if (comp[u] == best && comp[v] == best)
      kept.emplace_back(new_id[u], new_id[v]);

  CitationLoadResult result;
  result.graph = Graph::build(next, kept, true);
  result.dropped_self_loops = dropped;
  result.total_nodes_read = total;
  return result;
}

Graph gen_citation_synthetic(const CitationParams& params, Rng& rng) {
  if (params.num_papers < 2)
    throw std::invalid_argument("gen_citation_synthetic: need at least 2 papers");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> cited_count(params.num_papers, 0);
  // Repeated-targets list for degree-proportional picks.
  std::vector<int> pool;
  pool.push_back(0);
  for (int t = 1; t < params.num_papers; ++t) {
    const int refs = std::min(t, rng.uniform_int(params.min_refs, params.max_refs));
    std::vector<int> chosen;
    int guard = 0;
    while (static_cast<int>(chosen.size()) < refs && guard < 200) {
      ++guard;
      int target;
      if (rng.bernoulli(params.pref_mix)) {
        target = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
      } else {
        const int lo = std::max(0, t - params.recent_window);
        target = rng.uniform_int(lo, t - 1);
      }
      if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
        chosen.push_back(target);
    }
    for (int target : chosen) {
      edges.emplace_back(t, target);  // later papers cite earlier ones
      ++cited_count[target];
      pool.push_back(target);
    }
    pool.push_back(t);
  }
  return Graph::build(params.num_papers, edges, true);
}

Graph extract_ego(const Graph& g, int center, int hops,
                  bool respect_direction_for_hops) {
  if (center < 0 || center >= g.num_nodes())
    throw std::invalid_argument("extract_ego: center out of range");

  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<int> order;
  dist[center] = 0;
  order.push_back(center);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    if (dist[u] == hops) continue;
    const auto& next =
        respect_direction_for_hops ? g.out_neighbors(u) : g.neighbors(u);
    for (int v : next)
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        order.push_back(v);
      }
  }

  std::vector<int> new_id(g.num_nodes(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : g.edges())
    if (new_id[u] >= 0 && new_id[v] >= 0)
      edges.emplace_back(new_id[u], new_id[v]);
  return Graph::build(static_cast<int>(order.size()), edges, g.directed());
}

namespace {

std::vector<Graph> sample_egos(const Graph& base, int count, int hops,
                               int min_nodes, int max_nodes, int retry_factor,
                               Rng& rng) {
  std::vector<Graph> out;
  out.reserve(count);
  const int budget = retry_factor * count;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (attempts++ >= budget)
      throw std::runtime_error(
          "ego sampling exhausted its retry budget; the citation graph is too "
          "small for the requested count");
    const int center = rng.uniform_int(0, base.num_nodes() - 1);
    Graph ego = extract_ego(base, center, hops);
    if (ego.num_nodes() < min_nodes || ego.num_nodes() > max_nodes) continue;
    out.push_back(std::move(ego));
  }
  return out;
}

}  // namespace

std::vector<Graph> gen_ego_directed(const Graph& citation, int count, Rng& rng) {
  if (!citation.directed())
    throw std::invalid_argument("gen_ego_directed: citation graph must be directed");
  return sample_egos(citation, count, 3, 7, 30, 50, rng);
}

std::vector<Graph> gen_ego_small(const Graph& citation, int count,
                                 const EgoParams& params, Rng& rng) {
  const Graph base = citation.as_undirected();
  return sample_egos(base, count, params.hops, params.min_nodes, params.max_nodes,
                     params.retry_factor, rng);
}

int estimate_m(const std::vector<Graph>& graphs, int samples, Rng& rng,
               BfsStartPolicy start_policy) {
  if (graphs.empty()) throw std::invalid_argument("estimate_m: empty graph set");
  if (samples < 1) throw std::invalid_argument("estimate_m: samples must be >= 1");
  int m = 0;
  for (int s = 0; s < samples; ++s) {
    const Graph& g = graphs[rng.uniform_int(0, static_cast<int>(graphs.size()) - 1)];
    if (g.num_nodes() == 0) continue;
    if (start_policy == BfsStartPolicy::UniformRandom) {
      const int start = rng.uniform_int(0, g.num_nodes() - 1);
      m = std::max(m, bandwidth(g, bfs_ordering(g, start, rng)));
    } else {
      for (int start = 0; start < g.num_nodes(); ++start)
        m = std::max(m, bandwidth(g, bfs_ordering(g, start, rng)));
    }
  }
  return m;
}

SplitDataset split(const std::vector<Graph>& graphs, double ratio, Rng& rng) {
  if (graphs.size() < 2)
    throw std::invalid_argument("split: need at least two graphs");
  if (ratio <= 0.0 || ratio >= 1.0)
    throw std::invalid_argument("split: ratio must be in (0, 1)");
  std::vector<int> idx(graphs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  rng.shuffle(idx);
  int train_count = static_cast<int>(std::lround(ratio * graphs.size()));
  train_count = std::clamp(train_count, 1, static_cast<int>(graphs.size()) - 1);

  SplitDataset out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (static_cast<int>(i) < train_count)
      out.train.push_back(graphs[idx[i]]);
    else
      out.test.push_back(graphs[idx[i]]);
  }
  return out;
}

std::vector<Graph> generate_dataset(const DatasetSpec& spec) {
  Rng rng(spec.seed);
  if (spec.name == "grid-small") return gen_grid_small(spec.count);
  if (spec.name == "community-small")
    return gen_community_small(spec.count, spec.community, rng);

  if (spec.name == "ego-small" || spec.name == "ego-directed") {
    Graph citation;
    if (!spec.citation_path.empty()) {
      citation = load_citation_graph(spec.citation_path).graph;
    } else {
      Rng crng(spec.seed, 77);
      citation = gen_citation_synthetic(spec.citation, crng);
    }
    if (spec.name == "ego-directed") return gen_ego_directed(citation, spec.count, rng);
    return gen_ego_small(citation, spec.count, spec.ego, rng);
  }
  throw std::invalid_argument("unknown dataset: " + spec.name);
}

}  // namespace graphgen
