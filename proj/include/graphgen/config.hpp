#pragma once

#include <cstdint>
#include <string>

#include "graphgen/datasets.hpp"
#include "graphgen/metrics.hpp"
#include "graphgen/models.hpp"

namespace graphgen {

/// Everything a run needs, loadable from one JSON file with full defaulting.
/// Every constant the experiments depend on (kernel sigmas, schedule
/// milestones, dataset counts, hidden sizes) lives here so a run is auditable
/// from its config echo alone.
struct ExperimentConfig {
  DatasetSpec dataset;
  ModelConfig model;
  TrainConfig train;
  KernelConfig kernel;

  bool m_auto = true;          // estimate M from the training split
  bool max_nodes_auto = true;  // max train size + 20% margin
  double split_ratio = 0.8;
  bool m_on_train_only = true;
  int estimate_m_samples = 9000;
  BfsStartPolicy m_start_policy = BfsStartPolicy::UniformRandom;
  int sample_count = 64;
  bool emit_svg = true;

  std::uint64_t seed = 1234;  // master seed; stage seeds derive from it
  std::string out_dir = "out";

  /// Fills dataset/split/train seeds that were left at zero from the master
  /// seed and picks per-dataset defaults (count, directedness).
  void finalize();
};

ExperimentConfig experiment_config_from_json_text(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

/// Baseline defaults for a named dataset (counts and variant wiring).
ExperimentConfig default_experiment_config(const std::string& dataset_name);

}  // namespace graphgen
