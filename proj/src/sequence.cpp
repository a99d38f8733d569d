#include "graphgen/sequence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace graphgen {

namespace {

void check_bandwidth(const Graph& g, const NodeOrdering& pi, int m) {
  if (m <= 0) throw std::invalid_argument("truncation M must be positive");
  const auto pos = pi.positions();
  for (auto [u, v] : g.edges()) {
    if (std::abs(pos[u] - pos[v]) > m)
      throw std::invalid_argument(
          "bandwidth exceeds M=" + std::to_string(m) + " at edge (" +
          std::to_string(u) + ", " + std::to_string(v) + ")");
  }
}

GraphSequence encode_columns(const Graph& g, const NodeOrdering& pi,
                             std::optional<int> m, SequenceAlphabet alphabet) {
  if (m) check_bandwidth(g, pi, *m);
  const AdjacencyMatrix a = permute_adjacency(g, pi);
  const int n = g.num_nodes();

  GraphSequence seq;
  seq.alphabet = alphabet;
  seq.truncation_m = m;
  seq.num_nodes = n;
  seq.rows.reserve(n > 0 ? n - 1 : 0);
  for (int v = 1; v < n; ++v) {
    const int len = row_length(v - 1, m);
    std::vector<std::uint8_t> row(len, 0);
    for (int k = 0; k < len; ++k) {
      const int j = v - len + k;
      if (alphabet == SequenceAlphabet::Binary) {
        row[k] = a(j, v);
      } else {
        const std::uint8_t fwd = a(j, v);
        const std::uint8_t bwd = a(v, j);
        row[k] = static_cast<std::uint8_t>(fwd && bwd ? 3 : fwd ? 1 : bwd ? 2 : 0);
      }
    }
    seq.rows.push_back(std::move(row));
  }
  return seq;
}

void check_well_formed(const GraphSequence& seq) {
  const int n = static_cast<int>(seq.rows.size()) + 1;
  const std::uint8_t max_symbol =
      seq.alphabet == SequenceAlphabet::Binary ? 1 : 3;
  for (int r = 0; r < n - 1; ++r) {
    if (static_cast<int>(seq.rows[r].size()) != row_length(r, seq.truncation_m))
      throw std::invalid_argument("malformed sequence: row " + std::to_string(r) +
                                  " has the wrong length");
    for (std::uint8_t s : seq.rows[r])
      if (s > max_symbol)
        throw std::invalid_argument("malformed sequence: symbol out of alphabet");
  }
}

}  // namespace

int row_length(int row_index, std::optional<int> m) {
  const int full = row_index + 1;
  return m ? std::min(full, *m) : full;
}

GraphSequence encode_sequence(const Graph& g, const NodeOrdering& pi,
                              std::optional<int> m) {
  if (g.directed())
    throw std::invalid_argument("encode_sequence: graph must be undirected");
  return encode_columns(g, pi, m, SequenceAlphabet::Binary);
}

GraphSequence encode_directed(const Graph& g, const NodeOrdering& pi,
                              std::optional<int> m) {
  if (!g.directed())
    throw std::invalid_argument("encode_directed: graph must be directed");
  return encode_columns(g, pi, m, SequenceAlphabet::Directed4);
}

GraphSequence encode_dag(const Graph& g, const NodeOrdering& pi) {
  if (!g.directed())
    throw std::invalid_argument("encode_dag: graph must be directed");
  if (!is_topological_ordering(g, pi))
    throw std::invalid_argument("encode_dag: ordering is not topological");
  const AdjacencyMatrix a = permute_adjacency(g, pi);
  const int n = g.num_nodes();

  GraphSequence seq;
  seq.alphabet = SequenceAlphabet::Binary;
  seq.num_nodes = n;
  seq.rows.reserve(n > 0 ? n - 1 : 0);
  for (int v = 1; v < n; ++v) {
    std::vector<std::uint8_t> row(v, 0);
    for (int j = 0; j < v; ++j) row[j] = a(j, v);
    seq.rows.push_back(std::move(row));
  }
  return seq;
}

Graph decode_sequence(const GraphSequence& seq) {
  check_well_formed(seq);
  const int n = static_cast<int>(seq.rows.size()) + 1;
  const bool directed = seq.alphabet == SequenceAlphabet::Directed4;
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < n - 1; ++r) {
    const int v = r + 1;
    const int len = static_cast<int>(seq.rows[r].size());
    for (int k = 0; k < len; ++k) {
      const int j = v - len + k;
      const std::uint8_t s = seq.rows[r][k];
      if (s == 0) continue;
      if (!directed) {
        edges.emplace_back(j, v);
      } else {
        if (s == 1 || s == 3) edges.emplace_back(j, v);
        if (s == 2 || s == 3) edges.emplace_back(v, j);
      }
    }
  }
  return Graph::build(n, edges, directed);
}

Graph decode_dag(const GraphSequence& seq) {
  if (seq.alphabet != SequenceAlphabet::Binary)
    throw std::invalid_argument("decode_dag: binary alphabet required");
  check_well_formed(seq);
  const int n = static_cast<int>(seq.rows.size()) + 1;
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < n - 1; ++r) {
    const int v = r + 1;
    const int len = static_cast<int>(seq.rows[r].size());
    for (int k = 0; k < len; ++k)
      if (seq.rows[r][k]) edges.emplace_back(v - len + k, v);
  }
  return Graph::build(n, edges, true);
}

int class_from_one_hot(const std::vector<double>& v) {
  int hit = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 1.0) {
      if (hit >= 0) throw std::invalid_argument("malformed one-hot: multiple ones");
      hit = static_cast<int>(i);
    } else if (v[i] != 0.0) {
      throw std::invalid_argument("malformed one-hot: entry not in {0, 1}");
    }
  }
  if (hit < 0) throw std::invalid_argument("malformed one-hot: no one set");
  return hit;
}

}  // namespace graphgen
