#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "graphgen/graph.hpp"
#include "graphgen/rng.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  std::filesystem::path path;
  static inline int counter = 0;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("graphgen_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::string dir() const { return path.string(); }
};

inline graphgen::Graph random_graph(int n, double p, graphgen::Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return graphgen::Graph::build(n, edges, false);
}

inline graphgen::Graph random_digraph(int n, double p, graphgen::Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(p)) edges.emplace_back(u, v);
  return graphgen::Graph::build(n, edges, true);
}

}  // namespace testutil
