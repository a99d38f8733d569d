#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

enum class SequenceAlphabet : std::uint8_t {
  Binary,     // symbols {0, 1}
  Directed4,  // symbols {0: none, 1: earlier->later, 2: later->earlier, 3: both}
};

/// Column-by-column encoding of a permuted adjacency matrix. Row r describes
/// node r+1's connections to earlier nodes, oldest first: entry k of row r is
/// matrix entry (j, r+1) with j = (r+1) - len + k. With truncation the row
/// keeps only the last M column entries, so len = min(r+1, M); without it
/// len = r+1.
struct GraphSequence {
  std::vector<std::vector<std::uint8_t>> rows;
  SequenceAlphabet alphabet = SequenceAlphabet::Binary;
  std::optional<int> truncation_m;
  int num_nodes = 0;
};

/// Binary encoding of an undirected graph under ordering pi.
/// If M is given, requires bandwidth(g, pi) <= M; otherwise throws
/// std::invalid_argument reporting the offending edge.
GraphSequence encode_sequence(const Graph& g, const NodeOrdering& pi,
                              std::optional<int> m = std::nullopt);

/// Four-class encoding of a directed graph under ordering pi; entry (j, i)
/// classifies the ordered pair (earlier, later) as none / forward / backward
/// / both. Same bandwidth precondition as encode_sequence.
GraphSequence encode_directed(const Graph& g, const NodeOrdering& pi,
                              std::optional<int> m = std::nullopt);

/// Binary encoding of a directed acyclic graph under a topological ordering:
/// the upper triangle of A^pi captures every edge. Never truncated.
/// Throws std::invalid_argument if pi is not topological for g.
GraphSequence encode_dag(const Graph& g, const NodeOrdering& pi);

/// Inverse of encode_sequence / encode_directed (by alphabet). The result is
/// the input graph relabeled by the encoding order.
Graph decode_sequence(const GraphSequence& seq);

/// Decodes binary rows as a directed upper-triangular adjacency; the result
/// is acyclic by construction.
Graph decode_dag(const GraphSequence& seq);

/// Expected length of row r (node r+1) for the given truncation.
int row_length(int row_index, std::optional<int> m);

/// Maps a one-hot vector to its class index; throws std::invalid_argument on
/// a malformed one-hot (not exactly one entry equal to 1).
int class_from_one_hot(const std::vector<double>& v);

}  // namespace graphgen
