#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphgen/config.hpp"
#include "graphgen/graph.hpp"

namespace graphgen::cli {

/// GRAPHGEN_LOG=quiet|info|debug (default info).
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

struct PreparedDataset {
  std::vector<Graph> train;
  std::vector<Graph> test;
  int min_nodes = 0;
  int max_nodes = 0;
  int estimated_m = 0;
  double reduction_pct = 0.0;
};

/// Generates, splits and measures a dataset per the config (pure; no files).
PreparedDataset prepare_dataset(const ExperimentConfig& cfg);

/// Applies the auto rules for M and max_nodes to the model config.
ModelConfig resolve_model_config(const ExperimentConfig& cfg,
                                 const PreparedDataset& data);

/// Ablation wiring: full keeps BFS + M, no_m keeps BFS with untruncated
/// rows, no_bfs uses a random ordering (no M is defined then).
ModelConfig ablation_model_config(ModelConfig base, const std::string& which);

void write_loss_svg(const std::vector<std::pair<long long, double>>& log,
                    const std::string& path);

int cmd_dataset(const ExperimentConfig& cfg, bool force);
int cmd_train(const ExperimentConfig& cfg, bool force, const std::string& resume);
int cmd_sample(const ExperimentConfig& cfg, const std::string& checkpoint, int count,
               bool force);
int cmd_eval(const std::string& generated_path, const std::string& test_path,
             const ExperimentConfig& cfg, const std::string& out_dir, bool force);
int cmd_ablate(const ExperimentConfig& cfg, bool force);
int cmd_baseline(const ExperimentConfig& cfg, bool force);

}  // namespace graphgen::cli
