#pragma once

#include <vector>

#include "graphgen/graph.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

/// Erdos-Renyi parameters fit by moment matching: p is the mean density of
/// the training graphs, node counts are resampled from the empirical list.
struct ErParams {
  double p = 0.0;
  std::vector<int> node_counts;
};

/// Barabasi-Albert parameters: m attachments per new node, fit as the
/// rounded mean of per-graph edge/node ratios (mean degree of BA graphs is
/// about 2m), clamped to >= 1.
struct BaParams {
  int m = 1;
  std::vector<int> node_counts;
};

ErParams er_fit(const std::vector<Graph>& train);
BaParams ba_fit(const std::vector<Graph>& train);

std::vector<Graph> er_sample(const ErParams& params, int count, Rng& rng);
std::vector<Graph> ba_sample(const BaParams& params, int count, Rng& rng);

/// One preferential-attachment draw on n nodes: seed with m isolated nodes,
/// then each new node attaches to m distinct existing nodes with probability
/// proportional to degree (uniform while all degrees are zero).
Graph ba_graph(int n, int m, Rng& rng);

Graph er_graph(int n, double p, Rng& rng);

}  // namespace graphgen
