#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphgen/rng.hpp"

namespace graphgen {

/// Batches are stored column-wise: a tensor of shape (features x batch).
using Mat = Eigen::MatrixXd;

/// Named parameter tensor with its gradient accumulator.
struct Param {
  std::string name;
  Mat value;
  Mat grad;

  Param() = default;
  Param(std::string n, int rows, int cols)
      : name(std::move(n)), value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)) {}

  void init_uniform(Rng& rng, double bound);
};

Mat sigmoid(const Mat& x);
/// Softmax over the rows of each column.
Mat softmax_columns(const Mat& x);
Mat relu(const Mat& x);

/// y = W x + b, bias broadcast over columns.
struct Linear {
  Param w, b;

  Linear() = default;
  Linear(const std::string& name, int out, int in, Rng& rng);

  Mat forward(const Mat& x) const;
  /// Accumulates dW, db; returns dx.
  Mat backward(const Mat& x, const Mat& dy);
  void collect(std::vector<Param*>& out);
};

/// One gated recurrent layer:
///   z = sigmoid(Wz x + Uz h + bz)
///   r = sigmoid(Wr x + Ur h + br)
///   htilde = tanh(Wh x + Uh (r . h) + bh)
///   h' = (1 - z) . h + z . htilde
struct GruLayer {
  Param wz, wr, wh, uz, ur, uh, bz, br, bh;

  GruLayer() = default;
  GruLayer(const std::string& name, int hidden, int input, Rng& rng);

  struct Cache {
    Mat x, h_prev, z, r, htilde, rh;
  };

  Mat forward(const Mat& x, const Mat& h_prev, Cache* cache) const;
  /// Given d(h'), accumulates parameter grads and adds the input/hidden
  /// gradients into dx and dh_prev.
  void backward(const Cache& cache, const Mat& dh_out, Mat& dx, Mat& dh_prev);
  void collect(std::vector<Param*>& out);
};

/// A stack of GRU layers advanced one time step at a time; layer l consumes
/// layer l-1's fresh output.
struct Gru {
  int input_size = 0, hidden_size = 0, num_layers = 0;
  std::vector<GruLayer> layers;

  Gru() = default;
  Gru(const std::string& name, int input, int hidden, int layers_count, Rng& rng);

  using StepCache = std::vector<GruLayer::Cache>;

  std::vector<Mat> zero_state(int batch) const;

  /// Advances h in place; returns the top layer's new hidden state.
  Mat step(const Mat& x, std::vector<Mat>& h, StepCache* cache) const;

  /// Reverse of one step. On entry dh_layers[l] carries the gradient w.r.t.
  /// the step's output h'[l] arriving from later steps; dh_top adds the
  /// consumer's gradient at the top layer. On exit dh_layers[l] holds the
  /// gradient w.r.t. h_prev[l]. Returns the gradient w.r.t. x.
  Mat step_backward(const StepCache& cache, const Mat& dh_top,
                    std::vector<Mat>& dh_layers);

  void collect(std::vector<Param*>& out);
};

enum class OutputActivation { Sigmoid, SoftmaxPerEntry };

/// Affine layers with ReLU between them; the output activation is applied by
/// forward() and left off by forward_logits().
struct Mlp {
  std::vector<Linear> layers;
  OutputActivation out_act = OutputActivation::Sigmoid;
  int softmax_classes = 4;  // entry width under SoftmaxPerEntry

  Mlp() = default;
  Mlp(const std::string& name, const std::vector<int>& sizes, OutputActivation act,
      Rng& rng);

  struct Cache {
    std::vector<Mat> inputs;  // input of each layer
  };

  Mat forward_logits(const Mat& x, Cache* cache) const;
  Mat forward(const Mat& x) const;
  /// Backward from d(logits); returns dx.
  Mat backward(const Cache& cache, const Mat& dlogits);
  void collect(std::vector<Param*>& out);
};

/// Mean negative log-likelihood of Bernoulli targets over unmasked entries;
/// probabilities are clamped to [1e-7, 1 - 1e-7].
double bce_loss(const Mat& theta, const Mat& target, const Mat& mask);

/// d(loss)/d(logits) for theta = sigmoid(logits), already divided by the
/// unmasked count. `count` must be the total unmasked entries of the loss
/// the gradient belongs to (callers may normalize across several tiles).
Mat bce_grad_logits(const Mat& theta, const Mat& target, const Mat& mask,
                    double count);

/// Mean negative log-likelihood over unmasked entries; logits hold one
/// 4-class entry per column and mask is 1 x N.
double ce_loss(const Mat& logits, const Mat& one_hot, const Mat& mask);

Mat ce_grad_logits(const Mat& logits, const Mat& one_hot, const Mat& mask,
                   double count);

/// Step-decay learning rate: base * gamma^(number of milestones <= step).
struct AdamConfig {
  double base_lr = 0.003;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;
  double gamma = 0.3;
  std::vector<long long> milestones{6000, 18000};
};

double lr_schedule(const AdamConfig& cfg, long long step);

struct AdamState {
  long long step = 0;
  std::vector<Mat> m, v;

  void init(const std::vector<Param*>& params);
};

/// Scales all gradients so their global L2 norm is at most max_norm.
/// Returns the pre-clip norm.
double clip_global_norm(const std::vector<Param*>& params, double max_norm);

/// One Adam update with bias correction at the scheduled learning rate;
/// increments state.step.
void adam_step(AdamState& state, const AdamConfig& cfg,
               const std::vector<Param*>& params);

/// Versioned container for everything a resumed run needs. Writing and
/// reading round-trips bitwise (tensor payloads are raw little-endian
/// doubles).
struct Checkpoint {
  std::uint32_t version = 1;
  std::string config_json;
  long long step = 0;
  std::vector<std::pair<std::string, Mat>> tensors;
  long long adam_step = 0;
  std::vector<Mat> adam_m, adam_v;
  std::map<std::string, std::string> rng_states;
  std::string trainer_state_json;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace graphgen
