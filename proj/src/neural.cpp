#include "graphgen/neural.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace graphgen {

namespace {
constexpr double kProbEps = 1e-7;
}

void Param::init_uniform(Rng& rng, double bound) {
  for (Eigen::Index j = 0; j < value.cols(); ++j)
    for (Eigen::Index i = 0; i < value.rows(); ++i)
      value(i, j) = rng.uniform_real(-bound, bound);
}

Mat sigmoid(const Mat& x) {
  return 1.0 / (1.0 + (-x.array()).exp());
}

Mat softmax_columns(const Mat& x) {
  Mat shifted = x.rowwise() - x.colwise().maxCoeff();
  Mat e = shifted.array().exp();
  Eigen::RowVectorXd sums = e.colwise().sum();
  return e.array().rowwise() / sums.array();
}

Mat relu(const Mat& x) { return x.cwiseMax(0.0); }

Linear::Linear(const std::string& name, int out, int in, Rng& rng)
    : w(name + ".w", out, in), b(name + ".b", out, 1) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  w.init_uniform(rng, bound);
  b.init_uniform(rng, bound);
}

Mat Linear::forward(const Mat& x) const {
  Mat y = w.value * x;
  y.colwise() += b.value.col(0);
  return y;
}

Mat Linear::backward(const Mat& x, const Mat& dy) {
  w.grad.noalias() += dy * x.transpose();
  b.grad.col(0).noalias() += dy.rowwise().sum();
  return w.value.transpose() * dy;
}

void Linear::collect(std::vector<Param*>& out) {
  out.push_back(&w);
  out.push_back(&b);
}

GruLayer::GruLayer(const std::string& name, int hidden, int input, Rng& rng)
    : wz(name + ".wz", hidden, input),
      wr(name + ".wr", hidden, input),
      wh(name + ".wh", hidden, input),
      uz(name + ".uz", hidden, hidden),
      ur(name + ".ur", hidden, hidden),
      uh(name + ".uh", hidden, hidden),
      bz(name + ".bz", hidden, 1),
      br(name + ".br", hidden, 1),
      bh(name + ".bh", hidden, 1) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Param* p : {&wz, &wr, &wh, &uz, &ur, &uh, &bz, &br, &bh})
    p->init_uniform(rng, bound);
}

Mat GruLayer::forward(const Mat& x, const Mat& h_prev, Cache* cache) const {
  Mat az = wz.value * x + uz.value * h_prev;
  az.colwise() += bz.value.col(0);
  Mat ar = wr.value * x + ur.value * h_prev;
  ar.colwise() += br.value.col(0);
  Mat z = sigmoid(az);
  Mat r = sigmoid(ar);
  Mat rh = r.cwiseProduct(h_prev);
  Mat ah = wh.value * x + uh.value * rh;
  ah.colwise() += bh.value.col(0);
  Mat htilde = ah.array().tanh();
  Mat h_new = (1.0 - z.array()) * h_prev.array() + z.array() * htilde.array();
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->htilde = std::move(htilde);
    cache->rh = std::move(rh);
  }
  return h_new;
}

void GruLayer::backward(const Cache& c, const Mat& dh_out, Mat& dx, Mat& dh_prev) {
  // h' = (1-z).h + z.htilde
  Mat dhtilde = dh_out.cwiseProduct(c.z);
  Mat dz = dh_out.cwiseProduct(c.htilde - c.h_prev);
  Mat dh = dh_out.cwiseProduct(Mat(1.0 - c.z.array()));

  // htilde = tanh(ah)
  Mat dah = dhtilde.array() * (1.0 - c.htilde.array().square());
  wh.grad.noalias() += dah * c.x.transpose();
  uh.grad.noalias() += dah * c.rh.transpose();
  bh.grad.col(0).noalias() += dah.rowwise().sum();
  Mat drh = uh.value.transpose() * dah;
  Mat dr = drh.cwiseProduct(c.h_prev);
  dh.noalias() += drh.cwiseProduct(c.r);

  Mat daz = dz.array() * c.z.array() * (1.0 - c.z.array());
  Mat dar = dr.array() * c.r.array() * (1.0 - c.r.array());

  wz.grad.noalias() += daz * c.x.transpose();
  uz.grad.noalias() += daz * c.h_prev.transpose();
  bz.grad.col(0).noalias() += daz.rowwise().sum();
  wr.grad.noalias() += dar * c.x.transpose();
  ur.grad.noalias() += dar * c.h_prev.transpose();
  br.grad.col(0).noalias() += dar.rowwise().sum();

  dx.noalias() += wh.value.transpose() * dah;
  dx.noalias() += wz.value.transpose() * daz;
  dx.noalias() += wr.value.transpose() * dar;
  dh.noalias() += uz.value.transpose() * daz;
  dh.noalias() += ur.value.transpose() * dar;
  dh_prev.noalias() += dh;
}

void GruLayer::collect(std::vector<Param*>& out) {
  for (Param* p : {&wz, &wr, &wh, &uz, &ur, &uh, &bz, &br, &bh}) out.push_back(p);
}

Gru::Gru(const std::string& name, int input, int hidden, int layers_count, Rng& rng)
    : input_size(input), hidden_size(hidden), num_layers(layers_count) {
  layers.reserve(layers_count);
  for (int l = 0; l < layers_count; ++l)
    layers.emplace_back(name + ".l" + std::to_string(l), hidden,
                        l == 0 ? input : hidden, rng);
}

std::vector<Mat> Gru::zero_state(int batch) const {
  return std::vector<Mat>(num_layers, Mat::Zero(hidden_size, batch));
}

Mat Gru::step(const Mat& x, std::vector<Mat>& h, StepCache* cache) const {
  if (x.rows() != input_size)
    throw std::invalid_argument("Gru::step: input size mismatch");
  if (cache) cache->resize(num_layers);
  const Mat* input = &x;
  Mat carried;
  for (int l = 0; l < num_layers; ++l) {
    carried = layers[l].forward(*input, h[l], cache ? &(*cache)[l] : nullptr);
    h[l] = carried;
    input = &h[l];
  }
  return h[num_layers - 1];
}

Mat Gru::step_backward(const StepCache& cache, const Mat& dh_top,
                       std::vector<Mat>& dh_layers) {
  Mat dx_above;  // gradient w.r.t. the input of the layer above
  for (int l = num_layers - 1; l >= 0; --l) {
    Mat dh_out = dh_layers[l];
    if (l == num_layers - 1) dh_out += dh_top;
    if (l < num_layers - 1) dh_out += dx_above;

    Mat dx = Mat::Zero(cache[l].x.rows(), cache[l].x.cols());
    Mat dh_prev = Mat::Zero(cache[l].h_prev.rows(), cache[l].h_prev.cols());
    layers[l].backward(cache[l], dh_out, dx, dh_prev);
    dh_layers[l] = std::move(dh_prev);
    dx_above = std::move(dx);
  }
  return dx_above;
}

void Gru::collect(std::vector<Param*>& out) {
  for (auto& layer : layers) layer.collect(out);
}

Mlp::Mlp(const std::string& name, const std::vector<int>& sizes, OutputActivation act,
         Rng& rng)
    : out_act(act) {
  if (sizes.size() < 2) throw std::invalid_argument("Mlp: need at least two sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    layers.emplace_back(name + ".fc" + std::to_string(i), sizes[i + 1], sizes[i], rng);
}

Mat Mlp::forward_logits(const Mat& x, Cache* cache) const {
  if (cache) cache->inputs.clear();
  Mat cur = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (cache) cache->inputs.push_back(cur);
    cur = layers[i].forward(cur);
    if (i + 1 < layers.size()) cur = relu(cur);
  }
  return cur;
}

Mat Mlp::forward(const Mat& x) const {
  Mat logits = forward_logits(x, nullptr);
  if (out_act == OutputActivation::Sigmoid) return sigmoid(logits);
  // Softmax per entry: rows come in groups of softmax_classes.
  const int entries = static_cast<int>(logits.rows()) / softmax_classes;
  Mat out(logits.rows(), logits.cols());
  for (int e = 0; e < entries; ++e)
    out.middleRows(e * softmax_classes, softmax_classes) =
        softmax_columns(logits.middleRows(e * softmax_classes, softmax_classes));
  return out;
}

Mat Mlp::backward(const Cache& cache, const Mat& dlogits) {
  Mat dcur = dlogits;
  for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
    if (i + 1 < static_cast<int>(layers.size())) {
      // Undo the ReLU that followed layer i: inputs[i+1] = relu(pre_i).
      dcur = dcur.cwiseProduct(
          (cache.inputs[i + 1].array() > 0.0).cast<double>().matrix());
    }
    dcur = layers[i].backward(cache.inputs[i], dcur);
  }
  return dcur;
}

void Mlp::collect(std::vector<Param*>& out) {
  for (auto& layer : layers) layer.collect(out);
}

double bce_loss(const Mat& theta, const Mat& target, const Mat& mask) {
  if (theta.rows() != target.rows() || theta.cols() != target.cols() ||
      theta.rows() != mask.rows() || theta.cols() != mask.cols())
    throw std::invalid_argument("bce_loss: shape mismatch");
  double nll = 0.0;
  double count = 0.0;
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      if (mask(i, j) == 0.0) continue;
      const double p = std::clamp(theta(i, j), kProbEps, 1.0 - kProbEps);
      nll -= target(i, j) * std::log(p) + (1.0 - target(i, j)) * std::log(1.0 - p);
      count += 1.0;
    }
  return count > 0.0 ? nll / count : 0.0;
}

Mat bce_grad_logits(const Mat& theta, const Mat& target, const Mat& mask,
                    double count) {
  Mat d = (theta - target).cwiseProduct(mask);
  if (count > 0.0) d /= count;
  return d;
}

double ce_loss(const Mat& logits, const Mat& one_hot, const Mat& mask) {
  if (logits.rows() != one_hot.rows() || logits.cols() != one_hot.cols() ||
      mask.cols() != logits.cols())
    throw std::invalid_argument("ce_loss: shape mismatch");
  double nll = 0.0;
  double count = 0.0;
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    if (mask(0, j) == 0.0) continue;
    const double mx = logits.col(j).maxCoeff();
    const double lse = mx + std::log((logits.col(j).array() - mx).exp().sum());
    nll += lse - logits.col(j).dot(one_hot.col(j));
    count += 1.0;
  }
  return count > 0.0 ? nll / count : 0.0;
}

Mat ce_grad_logits(const Mat& logits, const Mat& one_hot, const Mat& mask,
                   double count) {
  Mat probs = softmax_columns(logits);
  Mat d = probs - one_hot;
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    if (mask(0, j) == 0.0) d.col(j).setZero();
  if (count > 0.0) d /= count;
  return d;
}

double lr_schedule(const AdamConfig& cfg, long long step) {
  double lr = cfg.base_lr;
  for (long long m : cfg.milestones)
    if (step >= m) lr *= cfg.gamma;
  return lr;
}

void AdamState::init(const std::vector<Param*>& params) {
  step = 0;
  m.clear();
  v.clear();
  for (const Param* p : params) {
    m.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

double clip_global_norm(const std::vector<Param*>& params, double max_norm) {
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Param* p : params) p->grad *= scale;
  }
  return norm;
}

void adam_step(AdamState& state, const AdamConfig& cfg,
               const std::vector<Param*>& params) {
  if (state.m.size() != params.size())
    throw std::invalid_argument("adam_step: state/param mismatch");
  const double lr = lr_schedule(cfg, state.step);
  const long long t = state.step + 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param& p = *params[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * p.grad;
    state.v[i] = cfg.beta2 * state.v[i].array() +
                 (1.0 - cfg.beta2) * p.grad.array().square();
    const Mat mhat = state.m[i] / bc1;
    const Mat vhat = state.v[i] / bc2;
    p.value.array() -= lr * mhat.array() / (vhat.array().sqrt() + cfg.eps);
  }
  ++state.step;
}

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_i64(std::ostream& out, std::int64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_string(std::ostream& out, const std::string& s) {
  write_i64(out, static_cast<std::int64_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void write_mat(std::ostream& out, const Mat& m) {
  write_i64(out, m.rows());
  write_i64(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::int64_t read_i64(std::istream& in) {
  std::int64_t v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::string read_string(std::istream& in) {
  const std::int64_t len = read_i64(in);
  std::string s(static_cast<std::size_t>(len), '\0');
  in.read(s.data(), len);
  return s;
}
Mat read_mat(std::istream& in) {
  const std::int64_t rows = read_i64(in);
  const std::int64_t cols = read_i64(in);
  Mat m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  return m;
}

constexpr char kMagic[8] = {'G', 'G', 'E', 'N', 'C', 'K', 'P', 'T'};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof kMagic);
  write_u32(out, ckpt.version);
  write_string(out, ckpt.config_json);
  write_i64(out, ckpt.step);
  write_i64(out, static_cast<std::int64_t>(ckpt.tensors.size()));
  for (const auto& [name, tensor] : ckpt.tensors) {
    write_string(out, name);
    write_mat(out, tensor);
  }
  write_i64(out, ckpt.adam_step);
  write_i64(out, static_cast<std::int64_t>(ckpt.adam_m.size()));
  for (const auto& m : ckpt.adam_m) write_mat(out, m);
  for (const auto& v : ckpt.adam_v) write_mat(out, v);
  write_i64(out, static_cast<std::int64_t>(ckpt.rng_states.size()));
  for (const auto& [key, state] : ckpt.rng_states) {
    write_string(out, key);
    write_string(out, state);
  }
  write_string(out, ckpt.trainer_state_json);
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  Checkpoint ckpt;
  ckpt.version = read_u32(in);
  if (ckpt.version != 1)
    throw std::runtime_error("unsupported checkpoint version in " + path);
  ckpt.config_json = read_string(in);
  ckpt.step = read_i64(in);
  const std::int64_t tensor_count = read_i64(in);
  ckpt.tensors.reserve(static_cast<std::size_t>(tensor_count));
  for (std::int64_t i = 0; i < tensor_count; ++i) {
    std::string name = read_string(in);
    ckpt.tensors.emplace_back(std::move(name), read_mat(in));
  }
  ckpt.adam_step = read_i64(in);
  const std::int64_t moment_count = read_i64(in);
  for (std::int64_t i = 0; i < moment_count; ++i) ckpt.adam_m.push_back(read_mat(in));
  for (std::int64_t i = 0; i < moment_count; ++i) ckpt.adam_v.push_back(read_mat(in));
  const std::int64_t rng_count = read_i64(in);
  for (std::int64_t i = 0; i < rng_count; ++i) {
    std::string key = read_string(in);
    ckpt.rng_states[key] = read_string(in);
  }
  ckpt.trainer_state_json = read_string(in);
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return ckpt;
}

}  // namespace graphgen
