#include "graphgen/graph_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphgen {

using nlohmann::json;

void write_graph_set(const std::string& path, const std::vector<GraphRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& rec : records) {
    json j;
    j["id"] = rec.id;
    j["directed"] = rec.graph.directed();
    j["num_nodes"] = rec.graph.num_nodes();
    json edges = json::array();
    for (auto [u, v] : rec.graph.edges()) edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<GraphRecord> read_graph_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph set: " + path);
  std::vector<GraphRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad graph record: " + e.what());
    }
    GraphRecord rec;
    rec.id = j.value("id", "");
    const bool directed = j.at("directed").get<bool>();
    const int n = j.at("num_nodes").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    rec.graph = Graph::build(n, edges, directed);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_graphs(const std::string& path, const std::vector<Graph>& graphs,
                  const std::string& id_prefix) {
  std::vector<GraphRecord> records;
  records.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::ostringstream id;
    id << id_prefix << '-' << std::setw(4) << std::setfill('0') << i;
    records.push_back({id.str(), graphs[i]});
  }
  write_graph_set(path, records);
}

std::vector<Graph> read_graphs(const std::string& path) {
  std::vector<Graph> graphs;
  for (auto& rec : read_graph_set(path)) graphs.push_back(std::move(rec.graph));
  return graphs;
}

}  // namespace graphgen
