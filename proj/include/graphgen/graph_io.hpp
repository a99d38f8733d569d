#pragma once

#include <string>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

struct GraphRecord {
  std::string id;
  Graph graph;
};

/// Graph-set files are JSON lines, one graph per line, with fields
/// {id, directed, num_nodes, edges}. Undirected graphs store each edge once
/// with u < v. Writing is deterministic: sorted keys, canonical edge order.
void write_graph_set(const std::string& path, const std::vector<GraphRecord>& records);
std::vector<GraphRecord> read_graph_set(const std::string& path);

/// Convenience wrappers for sets without meaningful ids; writing synthesizes
/// ids "<prefix>-0000", "<prefix>-0001", ...
void write_graphs(const std::string& path, const std::vector<Graph>& graphs,
                  const std::string& id_prefix);
std::vector<Graph> read_graphs(const std::string& path);

}  // namespace graphgen
