#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using graphgen::ExperimentConfig;

namespace {

ExperimentConfig load_config(const std::string& config_path, std::uint64_t seed,
                             const std::string& out_dir) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = graphgen::load_experiment_config(config_path);
  } else {
    throw std::runtime_error("--config is required");
  }
  if (seed != 0) {
    cfg.seed = seed;
    cfg.dataset.seed = 0;
    cfg.train.seed = 0;
    cfg.finalize();
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphRNN-style graph generation experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint, resume;
  std::string generated_path, test_path;
  std::uint64_t seed = 0;
  int count = 0;
  bool force = false;

  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--out", out_dir, "override the output directory");
  app.add_flag("--force", force, "overwrite existing outputs");

  auto* dataset = app.add_subcommand("dataset", "generate + split + measure M");
  auto* train = app.add_subcommand("train", "train the configured model");
  train->add_option("--resume", resume, "checkpoint to resume from");
  auto* sample = app.add_subcommand("sample", "sample graphs from a checkpoint");
  sample->add_option("--checkpoint", checkpoint, "checkpoint path (default: best)");
  sample->add_option("--count", count, "number of graphs to sample");
  auto* eval = app.add_subcommand("eval", "compare two graph-set files");
  eval->add_option("generated", generated_path, "generated graph-set file")
      ->required();
  eval->add_option("test", test_path, "test graph-set file")->required();
  auto* ablate = app.add_subcommand("ablate", "full / no_m / no_bfs matrix");
  auto* baseline = app.add_subcommand("baseline", "fit + sample + score ER and BA");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path, seed, out_dir);
    if (dataset->parsed()) return graphgen::cli::cmd_dataset(cfg, force);
    if (train->parsed()) return graphgen::cli::cmd_train(cfg, force, resume);
    if (sample->parsed())
      return graphgen::cli::cmd_sample(cfg, checkpoint,
                                       count > 0 ? count : cfg.sample_count, force);
    if (eval->parsed())
      return graphgen::cli::cmd_eval(generated_path, test_path, cfg, "", force);
    if (ablate->parsed()) return graphgen::cli::cmd_ablate(cfg, force);
    if (baseline->parsed()) return graphgen::cli::cmd_baseline(cfg, force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
