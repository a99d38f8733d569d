#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphgen/rng.hpp"

namespace graphgen {

/// Immutable simple graph. Undirected edges are stored once with u < v and
/// adjacency queries are symmetric; directed edges keep their orientation.
/// Self-loops are rejected at construction.
class Graph {
 public:
  Graph() = default;

  /// Validates, deduplicates and canonicalizes the edge list.
  /// Throws std::invalid_argument on an out-of-range endpoint or self-loop,
  /// naming the offending edge.
  static Graph build(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                     bool directed);

  int num_nodes() const { return n_; }
  bool directed() const { return directed_; }

  /// Canonical edge count (an undirected pair counts once).
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Symmetric for undirected graphs, exact orientation for directed ones.
  bool has_edge(int u, int v) const;

  /// Neighbors ignoring direction (sorted, deduplicated).
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }
  const std::vector<int>& out_neighbors(int u) const {
    return directed_ ? out_[u] : adj_[u];
  }
  const std::vector<int>& in_neighbors(int u) const {
    return directed_ ? in_[u] : adj_[u];
  }

  int degree(int u) const { return static_cast<int>(adj_[u].size()); }

  /// Canonical sorted edge list (u < v for undirected graphs).
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Undirected copy (antiparallel pairs collapse to one edge).
  Graph as_undirected() const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && directed_ == other.directed_ &&
           edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  bool directed_ = false;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

enum class OrderingKind { Bfs, Topological, Random, Identity };

/// A permutation of node indices: perm[position] = node id.
struct NodeOrdering {
  std::vector<int> perm;
  OrderingKind kind = OrderingKind::Identity;

  /// position_of[node] = position, the inverse permutation.
  std::vector<int> positions() const;
};

NodeOrdering identity_ordering(const Graph& g);
NodeOrdering random_ordering(const Graph& g, Rng& rng);

/// Breadth-first traversal order from `start`. Within each dequeued node the
/// unvisited neighbors are enqueued in a uniformly random order drawn from
/// `rng`. Directed graphs follow out-edges; whenever the queue empties with
/// unvisited nodes left, traversal restarts at the lowest-index unvisited
/// node, so the result always covers every node.
NodeOrdering bfs_ordering(const Graph& g, int start, Rng& rng);

/// Topological order of a directed acyclic graph. Ties among simultaneously
/// available nodes are broken uniformly at random via `rng`.
/// Throws std::invalid_argument naming a node on a cycle if g is not a DAG.
NodeOrdering topological_ordering(const Graph& g, Rng& rng);

/// True iff for every edge (u, v), u precedes v in the ordering.
/// (Only meaningful for directed graphs.)
bool is_topological_ordering(const Graph& g, const NodeOrdering& pi);

/// Dense 0/1 matrix with zero diagonal.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  std::uint8_t operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }
  void set(int i, int j, std::uint8_t v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
  }

 private:
  int n_;
  std::vector<std::uint8_t> a_;
};

/// A^pi: entry (i, j) = 1 iff the graph has an edge from perm[i] to perm[j]
/// (symmetric for undirected graphs).
AdjacencyMatrix permute_adjacency(const Graph& g, const NodeOrdering& pi);

/// max over edges (u, v) of |position(u) - position(v)|; 0 when edgeless.
int bandwidth(const Graph& g, const NodeOrdering& pi);

/// True iff A[i][j] = 0 whenever i >= j.
bool is_upper_triangular(const AdjacencyMatrix& a);

/// Graph with node i of the result standing for pi.perm[i] of the input.
Graph relabel(const Graph& g, const NodeOrdering& pi);

/// True iff the directed graph has a cycle.
bool has_cycle(const Graph& g);

/// Number of connected components of the undirected view.
int count_weak_components(const Graph& g);

}  // namespace graphgen
