#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"
#include "graphgen/neural.hpp"
#include "graphgen/rng.hpp"
#include "graphgen/sequence.hpp"

namespace graphgen {

enum class ModelVariant { Rnn, RnnS, Dir, Dag };
enum class OrderingPolicy { Bfs, Random, Topological };

std::string to_string(ModelVariant v);
std::string to_string(OrderingPolicy p);
ModelVariant variant_from_string(const std::string& s);
OrderingPolicy ordering_from_string(const std::string& s);

struct ModelConfig {
  ModelVariant variant = ModelVariant::Rnn;
  std::optional<int> m;  // absent: untruncated rows of width max_nodes - 1
  int max_nodes = 0;
  OrderingPolicy ordering = OrderingPolicy::Bfs;

  int node_hidden = 64;
  int node_layers = 4;
  int node_embed = 32;
  int edge_hidden = 16;
  int edge_layers = 4;
  int edge_embed = 8;
  int edge_head_hidden = 8;
  int mlp_hidden = 64;  // GraphRNN-S head

  /// Throws std::invalid_argument when the combination is inconsistent
  /// (Dag requires a topological ordering and no M; a random ordering has no
  /// defined M; Dir is the only 4-class variant).
  void validate() const;

  bool directed_alphabet() const { return variant == ModelVariant::Dir; }
  bool needs_directed_graphs() const {
    return variant == ModelVariant::Dir || variant == ModelVariant::Dag;
  }
  /// Fixed storage width of a target row.
  int row_width() const { return m ? *m : max_nodes - 1; }
  /// Width of the node-level input vector (4 lanes per entry for Dir).
  int node_input_width() const { return row_width() * (directed_alphabet() ? 4 : 1); }
};

struct TrainConfig {
  long long iterations = 96000;
  int batch_size = 32;
  long long checkpoint_every = 1000;
  long long eval_horizon = 30000;  // pick the sampling checkpoint in this prefix
  std::uint64_t seed = 0;
  AdamConfig adam;
  std::string out_dir;
};

/// One encoded graph ready for teacher forcing. Columns are node steps
/// (t = 0 is the all-ones start row, the last target is the all-zeros stop
/// row). Rows are stored right-aligned: entry for matrix column j of node v
/// sits at width - (v - j); leading positions are zero padding excluded by
/// the mask. For the 4-class alphabet targets hold class indices and inputs
/// hold one-hot lanes.
struct TrainingExample {
  Mat inputs;   // node_input_width x T
  Mat targets;  // row_width x T
  Mat mask;     // row_width x T
  int num_nodes = 0;
};

TrainingExample make_training_example(const Graph& g, const ModelConfig& cfg,
                                      Rng& rng);

/// Collated minibatch plus the edge-scan view: scan_targets/scan_mask hold
/// each row's valid entries left-aligned (scan step s = s-th entry above the
/// diagonal, oldest first) so the edge RNN never consumes padding.
struct Batch {
  int batch = 0;
  int steps = 0;                  // node steps T
  std::vector<Mat> node_x;        // T x (node_input_width x B)
  std::vector<Mat> targets;       // T x (row_width x B), right-aligned
  std::vector<Mat> mask;          // T x (row_width x B)
  std::vector<Mat> scan_targets;  // T x (row_width x B), left-aligned
  std::vector<Mat> scan_mask;     // T x (row_width x B)
  double mask_total = 0.0;
};

Batch collate(const std::vector<TrainingExample>& examples, const ModelConfig& cfg);

/// The four-variant graph generator: a node-level GRU over rows and either
/// an edge-level GRU (Rnn / Dir / Dag) or an independent-Bernoulli MLP head
/// (RnnS).
class GraphRnnModel {
 public:
  GraphRnnModel(const ModelConfig& cfg, Rng& init_rng);

  const ModelConfig& config() const { return cfg_; }

  /// Mean masked negative log-likelihood under teacher forcing.
  double forward_loss(const Batch& batch);

  /// forward_loss plus gradient accumulation into the parameters.
  double forward_backward(const Batch& batch);

  std::vector<Param*> parameters();
  void zero_grads();

  Graph sample_one(Rng& rng);
  std::vector<Graph> sample_graphs(int count, Rng& rng);

  void export_tensors(Checkpoint& ckpt) const;
  void import_tensors(const Checkpoint& ckpt);

 private:
  double run(const Batch& batch, bool backward);

  ModelConfig cfg_;
  Linear node_embed_;
  Gru node_gru_;
  // Edge-level RNN path (Rnn / Dir / Dag).
  Linear edge_init_;
  Linear edge_embed_;
  Gru edge_gru_;
  Linear head1_, head2_;
  // Independent head (RnnS).
  Mlp mlp_;
};

struct TrainResult {
  std::vector<std::pair<long long, double>> loss_log;
  std::vector<std::string> checkpoint_paths;
  std::string final_checkpoint;
  std::string best_checkpoint;  // lowest smoothed loss within eval_horizon
};

/// Minibatch Adam with the step-decay schedule; a fresh ordering is drawn for
/// every graph use. Checkpoints, the loss CSV and a config echo land in
/// tcfg.out_dir. Fully determined by tcfg.seed.
TrainResult train_model(const std::vector<Graph>& train_set, const ModelConfig& mcfg,
                        const TrainConfig& tcfg,
                        const std::string& resume_from = "");

/// Loads a checkpoint into a freshly built model (the model config is read
/// from the checkpoint's config echo).
GraphRnnModel load_model(const std::string& checkpoint_path);

std::vector<Graph> sample_from_checkpoint(const std::string& checkpoint_path,
                                          int count, std::uint64_t seed);

ModelConfig model_config_from_json(const std::string& json_text);
std::string model_config_to_json(const ModelConfig& cfg);

}  // namespace graphgen
