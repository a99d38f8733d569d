#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

/// Parameters of the two-block community generator. The construction follows
/// the published recipe: two Erdos-Renyi blocks plus a fixed number of
/// inter-block edges, all sizes drawn uniformly.
struct CommunityParams {
  int min_nodes = 12;
  int max_nodes = 20;
  double p_intra = 0.3;
  double inter_fraction = 0.05;  // ceil(inter_fraction * n) inter-block edges
};

struct EgoParams {
  int hops = 3;
  int min_nodes = 4;
  int max_nodes = 18;
  int retry_factor = 50;  // give up after retry_factor * count rejections
};

/// Stand-in citation network used when no edge-list file is supplied: a
/// preferential-attachment model where paper t cites earlier papers, so the
/// graph is acyclic by construction. Hub sizes are capped to keep ego
/// networks in the small-dataset range.
struct CitationParams {
  int num_papers = 2400;
  int min_refs = 1;
  int max_refs = 3;
  double pref_mix = 0.72;  // probability a reference is degree-proportional
  int recent_window = 160; // uniform references land in this trailing window
};

struct DatasetSpec {
  std::string name;  // grid-small | community-small | ego-small | ego-directed
  int count = 0;
  std::uint64_t seed = 0;
  CommunityParams community;
  EgoParams ego;
  CitationParams citation;
  std::string citation_path;  // optional edge-list file for the ego datasets
};

struct SplitDataset {
  std::vector<Graph> train;
  std::vector<Graph> test;
  std::uint64_t split_seed = 0;
};

/// rows x cols rectangular lattice; node (r, c) sits at index r * cols + c.
Graph gen_grid(int rows, int cols);

/// All r x c grids with 2 <= r <= c <= 6, cycled until `count` graphs.
std::vector<Graph> gen_grid_small(int count);

std::vector<Graph> gen_community_small(int count, const CommunityParams& params,
                                       Rng& rng);
Graph gen_community_graph(const CommunityParams& params, Rng& rng);

struct CitationLoadResult {
  Graph graph;              // largest weakly connected component, densely indexed
  int dropped_self_loops = 0;
  int total_nodes_read = 0;
};

/// Reads a directed edge list ("src dst" per line, '#' comments ignored,
/// arbitrary string ids) and keeps the largest weakly connected component.
CitationLoadResult load_citation_graph(const std::string& path);

Graph gen_citation_synthetic(const CitationParams& params, Rng& rng);

/// Induced subgraph on every node within `hops` of `center`, hops counted on
/// the undirected view unless respect_direction_for_hops is set. Edge
/// directions are preserved. The center becomes node 0 of the result.
Graph extract_ego(const Graph& g, int center, int hops,
                  bool respect_direction_for_hops = false);

/// 3-hop directed ego networks with 7 <= |V| <= 30 sampled at random centers.
std::vector<Graph> gen_ego_directed(const Graph& citation, int count, Rng& rng);

/// Undirected 3-hop ego networks with sizes in [params.min_nodes,
/// params.max_nodes]; the citation graph is symmetrized first.
std::vector<Graph> gen_ego_small(const Graph& citation, int count,
                                 const EgoParams& params, Rng& rng);

enum class BfsStartPolicy { UniformRandom, AllNodes };

/// Empirical truncation width: the max bandwidth over `samples` draws of
/// (uniform graph, random BFS ordering). With AllNodes every start node of
/// the drawn graph is tried per sample.
int estimate_m(const std::vector<Graph>& graphs, int samples, Rng& rng,
               BfsStartPolicy start_policy = BfsStartPolicy::UniformRandom);

SplitDataset split(const std::vector<Graph>& graphs, double ratio, Rng& rng);

/// Generates (or ingests) the dataset named by the spec.
std::vector<Graph> generate_dataset(const DatasetSpec& spec);

}  // namespace graphgen
