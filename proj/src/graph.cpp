#include "graphgen/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace graphgen {

namespace {

std::string edge_str(int u, int v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

void check_permutation(const Graph& g, const NodeOrdering& pi) {
  const int n = g.num_nodes();
  if (static_cast<int>(pi.perm.size()) != n)
    throw std::invalid_argument("ordering size does not match graph");
  std::vector<char> seen(n, 0);
  for (int v : pi.perm) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("ordering is not a permutation of the nodes");
    seen[v] = 1;
  }
}

}  // namespace

Graph Graph::build(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                   bool directed) {
  if (num_nodes < 0) throw std::invalid_argument("num_nodes must be nonnegative");
  Graph g;
  g.n_ = num_nodes;
  g.directed_ = directed;
  g.edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes)
      throw std::invalid_argument("edge endpoint out of range: " + edge_str(u, v));
    if (u == v)
      throw std::invalid_argument("self-loop rejected: " + edge_str(u, v));
    if (!directed && u > v) std::swap(u, v);
    g.edges_.emplace_back(u, v);
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.adj_.assign(num_nodes, {});
  if (directed) {
    g.out_.assign(num_nodes, {});
    g.in_.assign(num_nodes, {});
  }
  for (auto [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
    if (directed) {
      g.out_[u].push_back(v);
      g.in_[v].push_back(u);
    }
  }
  for (auto& nb : g.adj_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v) return false;
  if (directed_) {
    const auto& out = out_[u];
    return std::binary_search(out.begin(), out.end(), v);
  }
  if (u > v) std::swap(u, v);
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

Graph Graph::as_undirected() const {
  if (!directed_) return *this;
  return Graph::build(n_, edges_, false);
}

std::vector<int> NodeOrdering::positions() const {
  std::vector<int> pos(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = static_cast<int>(i);
  return pos;
}

NodeOrdering identity_ordering(const Graph& g) {
  NodeOrdering pi;
  pi.kind = OrderingKind::Identity;
  pi.perm.resize(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) pi.perm[i] = i;
  return pi;
}

NodeOrdering random_ordering(const Graph& g, Rng& rng) {
  NodeOrdering pi = identity_ordering(g);
  pi.kind = OrderingKind::Random;
  rng.shuffle(pi.perm);
  return pi;
}

NodeOrdering bfs_ordering(const Graph& g, int start, Rng& rng) {
  const int n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("bfs_ordering: empty graph");
  if (start < 0 || start >= n)
    throw std::invalid_argument("bfs_ordering: start node out of range");

  NodeOrdering pi;
  pi.kind = OrderingKind::Bfs;
  pi.perm.reserve(n);
  std::vector<char> visited(n, 0);
  std::deque<int> queue;
  int next_restart = 0;

  auto visit = [&](int v) {
    visited[v] = 1;
    pi.perm.push_back(v);
    queue.push_back(v);
  };
  visit(start);

  while (static_cast<int>(pi.perm.size()) < n) {
    if (queue.empty()) {
      while (visited[next_restart]) ++next_restart;
      visit(next_restart);
      continue;
    }
    const int u = queue.front();
    queue.pop_front();
    std::vector<int> frontier;
    for (int v : g.out_neighbors(u))
      if (!visited[v]) frontier.push_back(v);
    rng.shuffle(frontier);
    for (int v : frontier) visit(v);
  }
  return pi;
}

NodeOrdering topological_ordering(const Graph& g, Rng& rng) {
  if (!g.directed())
    throw std::invalid_argument("topological_ordering: graph must be directed");
  const int n = g.num_nodes();
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : g.edges()) {
    (void)u;
    ++indeg[v];
  }
  std::vector<int> avail;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) avail.push_back(v);

  NodeOrdering pi;
  pi.kind = OrderingKind::Topological;
  pi.perm.reserve(n);
  while (!avail.empty()) {
    const int k = rng.uniform_int(0, static_cast<int>(avail.size()) - 1);
    const int u = avail[k];
    avail[k] = avail.back();
    avail.pop_back();
    pi.perm.push_back(u);
    for (int v : g.out_neighbors(u))
      if (--indeg[v] == 0) avail.push_back(v);
  }

  if (static_cast<int>(pi.perm.size()) != n) {
    // Walk backwards along in-edges among the remaining nodes until a node
    // repeats; that node lies on a cycle.
    std::vector<char> remaining(n, 0);
    int cur = -1;
    for (int v = 0; v < n; ++v)
      if (indeg[v] > 0) {
        remaining[v] = 1;
        cur = v;
      }
    std::vector<char> seen(n, 0);
    while (!seen[cur]) {
      seen[cur] = 1;
      for (int p : g.in_neighbors(cur))
        if (remaining[p]) {
          cur = p;
          break;
        }
    }
    throw std::invalid_argument("graph has a cycle through node " +
                                std::to_string(cur));
  }
  return pi;
}

bool is_topological_ordering(const Graph& g, const NodeOrdering& pi) {
  const auto pos = pi.positions();
  for (auto [u, v] : g.edges())
    if (pos[u] >= pos[v]) return false;
  return true;
}

AdjacencyMatrix permute_adjacency(const Graph& g, const NodeOrdering& pi) {
  check_permutation(g, pi);
  const int n = g.num_nodes();
  AdjacencyMatrix a(n);
  const auto pos = pi.positions();
  for (auto [u, v] : g.edges()) {
    a.set(pos[u], pos[v], 1);
    if (!g.directed()) a.set(pos[v], pos[u], 1);
  }
  return a;
}

int bandwidth(const Graph& g, const NodeOrdering& pi) {
  check_permutation(g, pi);
  const auto pos = pi.positions();
  int bw = 0;
  for (auto [u, v] : g.edges())
    bw = std::max(bw, std::abs(pos[u] - pos[v]));
  return bw;
}

bool is_upper_triangular(const AdjacencyMatrix& a) {
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j <= i; ++j)
      if (a(i, j)) return false;
  return true;
}

Graph relabel(const Graph& g, const NodeOrdering& pi) {
  check_permutation(g, pi);
  const auto pos = pi.positions();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges().size());
  for (auto [u, v] : g.edges()) edges.emplace_back(pos[u], pos[v]);
  return Graph::build(g.num_nodes(), edges, g.directed());
}

bool has_cycle(const Graph& g) {
  if (!g.directed()) throw std::invalid_argument("has_cycle: graph must be directed");
  const int n = g.num_nodes();
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : g.edges()) {
    (void)u;
    ++indeg[v];
  }
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  int removed = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++removed;
    for (int v : g.out_neighbors(u))
      if (--indeg[v] == 0) stack.push_back(v);
  }
  return removed != n;
}

int count_weak_components(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<char> visited(n, 0);
  int components = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (visited[s]) continue;
    ++components;
    visited[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(u))
        if (!visited[v]) {
          visited[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return components;
}

}  // namespace graphgen
