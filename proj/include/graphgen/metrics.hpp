#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

/// Histogram on a uniform grid; masses are nonnegative and sum to 1 for
/// normalized histograms.
struct Histogram {
  std::vector<double> masses;
  double bin_width = 1.0;
};

/// Kernel used inside MMD: k(x, y) = exp(-d(x, y)^2 / (2 sigma^2)) with d the
/// 1-D EMD between histograms (Euclidean distance for orbit descriptors).
struct KernelConfig {
  double sigma_degree = 1.0;
  double sigma_clustering = 0.1;
  double sigma_orbit = 30.0;
  double sigma_betweenness = 1.0;
  double sigma_closeness = 1.0;
  int value_bins = 100;  // bins over [0, 1] for clustering / BC / CC
};

struct MmdReport {
  double degree = 0.0;
  double clustering = 0.0;
  std::optional<double> orbit;  // absent for directed inputs
  double betweenness = 0.0;
  double closeness = 0.0;
  double density_diff = 0.0;
  double transitivity_diff = 0.0;
  double components_per_graph = 0.0;  // mean weak components of the generated set
};

// Per-graph statistics. Directed graphs are measured on their undirected
// view except where noted.

std::vector<double> degree_values(const Graph& g);
std::vector<double> clustering_values(const Graph& g);
std::vector<double> betweenness_values(const Graph& g);
std::vector<double> closeness_values(const Graph& g);

/// Exact per-node counts over the 15 orbits of connected 2-4 node graphlets.
/// Throws std::invalid_argument for directed input.
std::vector<std::array<long long, 15>> orbit_counts(const Graph& g);

/// Mean per-node orbit-count vector, the per-graph orbit descriptor.
std::array<double, 15> mean_orbit_counts(const Graph& g);

double density(const Graph& g);
double transitivity(const Graph& g);
long long triangle_count(const Graph& g);

/// First Wasserstein distance between histograms on a shared grid:
/// sum over bins of |CDF_p - CDF_q| * bin width.
double emd_1d(const Histogram& p, const Histogram& q);

Histogram histogram_integer(const std::vector<double>& values, int max_value);
Histogram histogram_unit_interval(const std::vector<double>& values, int bins);

/// Squared-MMD V-statistic with a Gaussian-EMD kernel:
/// mean k(a,a') + mean k(b,b') - 2 mean k(a,b), clamped at 0.
double mmd(const std::vector<Histogram>& set_a, const std::vector<Histogram>& set_b,
           double sigma);

/// Same statistic with the Gaussian kernel over Euclidean distance (orbit
/// descriptors).
double mmd_euclidean(const std::vector<std::array<double, 15>>& set_a,
                     const std::vector<std::array<double, 15>>& set_b,
                     double sigma);

/// |mean stat over set_a - mean stat over set_b|.
double mean_abs_diff(const std::vector<Graph>& set_a, const std::vector<Graph>& set_b,
                     double (*stat)(const Graph&));

/// All scores of the report; orbit is omitted when either side is directed.
MmdReport evaluate(const std::vector<Graph>& generated, const std::vector<Graph>& test,
                   const KernelConfig& cfg);

std::string report_to_csv(const MmdReport& report);

}  // namespace graphgen
