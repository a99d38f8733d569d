#include "graphgen/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphgen {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::Rnn: return "rnn";
    case ModelVariant::RnnS: return "rnn_s";
    case ModelVariant::Dir: return "dir";
    case ModelVariant::Dag: return "dag";
  }
  return "?";
}

std::string to_string(OrderingPolicy p) {
  switch (p) {
    case OrderingPolicy::Bfs: return "bfs";
    case OrderingPolicy::Random: return "random";
    case OrderingPolicy::Topological: return "topological";
  }
  return "?";
}

ModelVariant variant_from_string(const std::string& s) {
  if (s == "rnn") return ModelVariant::Rnn;
  if (s == "rnn_s") return ModelVariant::RnnS;
  if (s == "dir") return ModelVariant::Dir;
  if (s == "dag") return ModelVariant::Dag;
  throw std::invalid_argument("unknown model variant: " + s);
}

OrderingPolicy ordering_from_string(const std::string& s) {
  if (s == "bfs") return OrderingPolicy::Bfs;
  if (s == "random") return OrderingPolicy::Random;
  if (s == "topological") return OrderingPolicy::Topological;
  throw std::invalid_argument("unknown ordering policy: " + s);
}

void ModelConfig::validate() const {
  if (max_nodes < 2) throw std::invalid_argument("max_nodes must be at least 2");
  if (m && *m < 1) throw std::invalid_argument("M must be positive when set");
  if (variant == ModelVariant::Dag) {
    if (ordering != OrderingPolicy::Topological)
      throw std::invalid_argument("dag variant requires a topological ordering");
    if (m) throw std::invalid_argument("dag variant cannot truncate rows");
  }
  if (ordering == OrderingPolicy::Random && m)
    throw std::invalid_argument("a random ordering admits no M truncation");
  if (ordering == OrderingPolicy::Topological && variant != ModelVariant::Dag)
    throw std::invalid_argument("topological ordering is reserved for the dag variant");
  if (node_hidden < 1 || node_layers < 1 || edge_hidden < 1 || edge_layers < 1 ||
      node_embed < 1 || edge_embed < 1 || edge_head_hidden < 1 || mlp_hidden < 1)
    throw std::invalid_argument("model dimensions must be positive");
}

TrainingExample make_training_example(const Graph& g, const ModelConfig& cfg,
                                      Rng& rng) {
  cfg.validate();
  if (g.num_nodes() < 1)
    throw std::invalid_argument("make_training_example: empty graph");
  if (g.num_nodes() > cfg.max_nodes)
    throw std::invalid_argument("make_training_example: graph exceeds max_nodes");
  if (g.directed() != cfg.needs_directed_graphs())
    throw std::invalid_argument(
        "make_training_example: graph directedness does not match the variant");

  NodeOrdering pi;
  switch (cfg.ordering) {
    case OrderingPolicy::Bfs:
      pi = bfs_ordering(g, rng.uniform_int(0, g.num_nodes() - 1), rng);
      break;
    case OrderingPolicy::Random:
      pi = random_ordering(g, rng);
      break;
    case OrderingPolicy::Topological:
      pi = topological_ordering(g, rng);
      break;
  }

  GraphSequence seq;
  switch (cfg.variant) {
    case ModelVariant::Dag:
      seq = encode_dag(g, pi);
      break;
    case ModelVariant::Dir:
      seq = encode_directed(g, pi, cfg.m);
      break;
    default:
      seq = encode_sequence(g, pi, cfg.m);
      break;
  }

  const int n = g.num_nodes();
  const int w = cfg.row_width();
  const int win = cfg.node_input_width();
  const bool dir4 = cfg.directed_alphabet();

  TrainingExample ex;
  ex.num_nodes = n;
  ex.inputs = Mat::Zero(win, n);
  ex.targets = Mat::Zero(w, n);
  ex.mask = Mat::Zero(w, n);
  ex.inputs.col(0).setOnes();  // start-of-sequence row

  for (int r = 0; r < n - 1; ++r) {
    const auto& row = seq.rows[r];
    const int len = static_cast<int>(row.size());
    const int offset = w - len;
    for (int k = 0; k < len; ++k) {
      ex.targets(offset + k, r) = static_cast<double>(row[k]);
      ex.mask(offset + k, r) = 1.0;
      if (dir4)
        ex.inputs(4 * (offset + k) + row[k], r + 1) = 1.0;
      else
        ex.inputs(offset + k, r + 1) = static_cast<double>(row[k]);
    }
  }
  // Stop row: all zeros over the width the next row would occupy.
  const int stop_len = std::min(n, w);
  for (int k = 0; k < stop_len; ++k) ex.mask(w - stop_len + k, n - 1) = 1.0;
  return ex;
}

Batch collate(const std::vector<TrainingExample>& examples, const ModelConfig& cfg) {
  if (examples.empty()) throw std::invalid_argument("collate: empty batch");
  const int w = cfg.row_width();
  const int win = cfg.node_input_width();
  const int b = static_cast<int>(examples.size());
  int t_max = 0;
  for (const auto& ex : examples) t_max = std::max(t_max, ex.num_nodes);

  Batch batch;
  batch.batch = b;
  batch.steps = t_max;
  batch.node_x.assign(t_max, Mat::Zero(win, b));
  batch.targets.assign(t_max, Mat::Zero(w, b));
  batch.mask.assign(t_max, Mat::Zero(w, b));
  batch.scan_targets.assign(t_max, Mat::Zero(w, b));
  batch.scan_mask.assign(t_max, Mat::Zero(w, b));

  for (int e = 0; e < b; ++e) {
    const auto& ex = examples[e];
    for (int t = 0; t < ex.num_nodes; ++t) {
      batch.node_x[t].col(e) = ex.inputs.col(t);
      batch.targets[t].col(e) = ex.targets.col(t);
      batch.mask[t].col(e) = ex.mask.col(t);
      int len = 0;
      for (int k = 0; k < w; ++k)
        if (ex.mask(k, t) != 0.0) ++len;
      const int offset = w - len;
      for (int s = 0; s < len; ++s) {
        batch.scan_targets[t](s, e) = ex.targets(offset + s, t);
        batch.scan_mask[t](s, e) = 1.0;
      }
      batch.mask_total += len;
    }
  }
  return batch;
}

GraphRnnModel::GraphRnnModel(const ModelConfig& cfg, Rng& init_rng) : cfg_(cfg) {
  cfg_.validate();
  const int win = cfg_.node_input_width();
  const bool dir4 = cfg_.directed_alphabet();
  const int entry_width = dir4 ? 4 : 1;

  node_embed_ = Linear("node_embed", cfg_.node_embed, win, init_rng);
  node_gru_ = Gru("node_gru", cfg_.node_embed, cfg_.node_hidden, cfg_.node_layers,
                  init_rng);
  if (cfg_.variant == ModelVariant::RnnS) {
    mlp_ = Mlp("mlp_head",
               {cfg_.node_hidden, cfg_.mlp_hidden, cfg_.row_width() * entry_width},
               OutputActivation::Sigmoid, init_rng);
  } else {
    edge_init_ = Linear("edge_init", cfg_.edge_hidden, cfg_.node_hidden, init_rng);
    edge_embed_ = Linear("edge_embed", cfg_.edge_embed, entry_width, init_rng);
    edge_gru_ = Gru("edge_gru", cfg_.edge_embed, cfg_.edge_hidden, cfg_.edge_layers,
                    init_rng);
    head1_ = Linear("edge_head1", cfg_.edge_head_hidden, cfg_.edge_hidden, init_rng);
    head2_ = Linear("edge_head2", entry_width, cfg_.edge_head_hidden, init_rng);
  }
}

std::vector<Param*> GraphRnnModel::parameters() {
  std::vector<Param*> params;
  node_embed_.collect(params);
  node_gru_.collect(params);
  if (cfg_.variant == ModelVariant::RnnS) {
    mlp_.collect(params);
  } else {
    edge_init_.collect(params);
    edge_embed_.collect(params);
    edge_gru_.collect(params);
    head1_.collect(params);
    head2_.collect(params);
  }
  return params;
}

void GraphRnnModel::zero_grads() {
  for (Param* p : parameters()) p->zero_grad();
}

double GraphRnnModel::forward_loss(const Batch& batch) { return run(batch, false); }

double GraphRnnModel::forward_backward(const Batch& batch) { return run(batch, true); }

double GraphRnnModel::run(const Batch& batch, bool backward) {
  const int b = batch.batch;
  const int t_steps = batch.steps;
  const int w = cfg_.row_width();
  const int tb = t_steps * b;
  const bool dir4 = cfg_.directed_alphabet();
  const double count = batch.mask_total;
  if (count <= 0.0) throw std::invalid_argument("batch has no unmasked entries");

  // ---- node-level scan ----
  std::vector<Mat> h = node_gru_.zero_state(b);
  std::vector<Gru::StepCache> ncache(backward ? t_steps : 0);
  std::vector<Mat> nx_post(backward ? t_steps : 0);
  Mat h_all(cfg_.node_hidden, tb);
  for (int t = 0; t < t_steps; ++t) {
    Mat post = relu(node_embed_.forward(batch.node_x[t]));
    if (backward) nx_post[t] = post;
    h_all.middleCols(t * b, b) =
        node_gru_.step(post, h, backward ? &ncache[t] : nullptr);
  }

  double nll = 0.0;
  Mat dh_all;
  if (backward) dh_all = Mat::Zero(cfg_.node_hidden, tb);

  if (cfg_.variant == ModelVariant::RnnS) {
    Mat y(w, tb), mask(w, tb);
    for (int t = 0; t < t_steps; ++t) {
      y.middleCols(t * b, b) = batch.targets[t];
      mask.middleCols(t * b, b) = batch.mask[t];
    }
    Mlp::Cache mcache;
    Mat logits = mlp_.forward_logits(h_all, backward ? &mcache : nullptr);
    Mat theta = sigmoid(logits);
    for (int j = 0; j < tb; ++j)
      for (int i = 0; i < w; ++i) {
        if (mask(i, j) == 0.0) continue;
        const double p = std::clamp(theta(i, j), 1e-7, 1.0 - 1e-7);
        nll -= y(i, j) * std::log(p) + (1.0 - y(i, j)) * std::log(1.0 - p);
      }
    if (backward) {
      Mat dlogits = bce_grad_logits(theta, y, mask, count);
      dh_all = mlp_.backward(mcache, dlogits);
    }
  } else {
    // ---- edge-level scan over left-aligned row entries ----
    Mat sy(w, tb), sm(w, tb);
    for (int t = 0; t < t_steps; ++t) {
      sy.middleCols(t * b, b) = batch.scan_targets[t];
      sm.middleCols(t * b, b) = batch.scan_mask[t];
    }
    const int entry_width = dir4 ? 4 : 1;

    std::vector<Mat> eh(cfg_.edge_layers, Mat::Zero(cfg_.edge_hidden, tb));
    eh[0] = edge_init_.forward(h_all);
    std::vector<Gru::StepCache> ecache(backward ? w : 0);
    std::vector<Mat> ex_in(backward ? w : 0), ex_post(backward ? w : 0),
        etop(backward ? w : 0), h1_post(backward ? w : 0), logits_cache(backward ? w : 0);

    auto entry_input = [&](int s) {
      Mat x(entry_width, tb);
      if (s == 0) {
        // Start symbol: 1 for the binary alphabet, class 0 one-hot for Dir.
        if (dir4) {
          x.setZero();
          x.row(0).setOnes();
        } else {
          x.setOnes();
        }
      } else if (dir4) {
        x.setZero();
        for (int j = 0; j < tb; ++j)
          x(static_cast<int>(sy(s - 1, j)), j) = 1.0;
      } else {
        x = sy.row(s - 1);
      }
      return x;
    };

    for (int s = 0; s < w; ++s) {
      Mat x = entry_input(s);
      Mat post = relu(edge_embed_.forward(x));
      Mat top = edge_gru_.step(post, eh, backward ? &ecache[s] : nullptr);
      Mat p1 = relu(head1_.forward(top));
      Mat logits = head2_.forward(p1);

      if (dir4) {
        for (int j = 0; j < tb; ++j) {
          if (sm(s, j) == 0.0) continue;
          const double mx = logits.col(j).maxCoeff();
          const double lse =
              mx + std::log((logits.col(j).array() - mx).exp().sum());
          nll += lse - logits(static_cast<int>(sy(s, j)), j);
        }
      } else {
        for (int j = 0; j < tb; ++j) {
          if (sm(s, j) == 0.0) continue;
          const double p =
              std::clamp(1.0 / (1.0 + std::exp(-logits(0, j))), 1e-7, 1.0 - 1e-7);
          nll -= sy(s, j) * std::log(p) + (1.0 - sy(s, j)) * std::log(1.0 - p);
        }
      }

      if (backward) {
        ex_in[s] = std::move(x);
        ex_post[s] = std::move(post);
        etop[s] = std::move(top);
        h1_post[s] = std::move(p1);
        logits_cache[s] = std::move(logits);
      }
    }

    if (backward) {
      std::vector<Mat> deh(cfg_.edge_layers, Mat::Zero(cfg_.edge_hidden, tb));
      for (int s = w - 1; s >= 0; --s) {
        Mat dlogits;
        if (dir4) {
          Mat probs = softmax_columns(logits_cache[s]);
          dlogits = Mat::Zero(4, tb);
          for (int j = 0; j < tb; ++j) {
            if (sm(s, j) == 0.0) continue;
            dlogits.col(j) = probs.col(j) / count;
            dlogits(static_cast<int>(sy(s, j)), j) -= 1.0 / count;
          }
        } else {
          dlogits = Mat(1, tb);
          for (int j = 0; j < tb; ++j) {
            const double p = 1.0 / (1.0 + std::exp(-logits_cache[s](0, j)));
            dlogits(0, j) = sm(s, j) == 0.0 ? 0.0 : (p - sy(s, j)) / count;
          }
        }
        Mat dp1 = head2_.backward(h1_post[s], dlogits);
        dp1 = dp1.cwiseProduct((h1_post[s].array() > 0.0).cast<double>().matrix());
        Mat detop = head1_.backward(etop[s], dp1);
        Mat dxe = edge_gru_.step_backward(ecache[s], detop, deh);
        dxe = dxe.cwiseProduct((ex_post[s].array() > 0.0).cast<double>().matrix());
        edge_embed_.backward(ex_in[s], dxe);  // input is data; dx discarded
      }
      dh_all += edge_init_.backward(h_all, deh[0]);
    }
  }

  if (backward) {
    std::vector<Mat> dnh(cfg_.node_layers, Mat::Zero(cfg_.node_hidden, b));
    for (int t = t_steps - 1; t >= 0; --t) {
      Mat dxe = node_gru_.step_backward(ncache[t], dh_all.middleCols(t * b, b), dnh);
      dxe = dxe.cwiseProduct((nx_post[t].array() > 0.0).cast<double>().matrix());
      node_embed_.backward(batch.node_x[t], dxe);
    }
  }

  return nll / count;
}

Graph GraphRnnModel::sample_one(Rng& rng) {
  const int w = cfg_.row_width();
  const bool dir4 = cfg_.directed_alphabet();
  const int entry_width = dir4 ? 4 : 1;
  const int win = cfg_.node_input_width();

  std::vector<Mat> h = node_gru_.zero_state(1);
  Mat prev_input = Mat::Ones(win, 1);
  std::vector<std::vector<std::uint8_t>> rows;

  for (int v = 1; v < cfg_.max_nodes; ++v) {
    Mat htop = node_gru_.step(relu(node_embed_.forward(prev_input)), h, nullptr);
    const int len = std::min(v, w);
    std::vector<std::uint8_t> row(len, 0);
    bool any = false;

    if (cfg_.variant == ModelVariant::RnnS) {
      Mat theta = sigmoid(mlp_.forward_logits(htop, nullptr));
      for (int k = 0; k < len; ++k) {
        const std::uint8_t e =
            rng.bernoulli(theta(w - len + k, 0)) ? std::uint8_t{1} : std::uint8_t{0};
        row[k] = e;
        any = any || e;
      }
    } else {
      std::vector<Mat> eh(cfg_.edge_layers, Mat::Zero(cfg_.edge_hidden, 1));
      eh[0] = edge_init_.forward(htop);
      Mat entry(entry_width, 1);
      if (dir4) {
        entry.setZero();
        entry(0, 0) = 1.0;
      } else {
        entry.setOnes();
      }
      for (int k = 0; k < len; ++k) {
        Mat etop = edge_gru_.step(relu(edge_embed_.forward(entry)), eh, nullptr);
        Mat logits = head2_.forward(relu(head1_.forward(etop)));
        std::uint8_t e;
        if (dir4) {
          Mat probs = softmax_columns(logits);
          std::vector<double> weights(4);
          for (int c = 0; c < 4; ++c) weights[c] = probs(c, 0);
          e = static_cast<std::uint8_t>(rng.categorical(weights));
          entry.setZero();
          entry(e, 0) = 1.0;
        } else {
          const double p = 1.0 / (1.0 + std::exp(-logits(0, 0)));
          e = rng.bernoulli(p) ? std::uint8_t{1} : std::uint8_t{0};
          entry(0, 0) = static_cast<double>(e);
        }
        row[k] = e;
        any = any || e;
      }
    }

    if (!any) break;  // all-zero row: end of sequence

    rows.push_back(row);
    prev_input = Mat::Zero(win, 1);
    for (int k = 0; k < len; ++k) {
      if (dir4)
        prev_input(4 * (w - len + k) + row[k], 0) = 1.0;
      else
        prev_input(w - len + k, 0) = static_cast<double>(row[k]);
    }
  }

  GraphSequence seq;
  seq.rows = std::move(rows);
  seq.num_nodes = static_cast<int>(seq.rows.size()) + 1;
  seq.truncation_m = cfg_.m;
  seq.alphabet = dir4 ? SequenceAlphabet::Directed4 : SequenceAlphabet::Binary;
  if (cfg_.variant == ModelVariant::Dag) return decode_dag(seq);
  return decode_sequence(seq);
}

std::vector<Graph> GraphRnnModel::sample_graphs(int count, Rng& rng) {
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng stream = rng.fork(static_cast<std::uint64_t>(i));
    out.push_back(sample_one(stream));
  }
  return out;
}

void GraphRnnModel::export_tensors(Checkpoint& ckpt) const {
  auto& self = const_cast<GraphRnnModel&>(*this);
  for (Param* p : self.parameters()) ckpt.tensors.emplace_back(p->name, p->value);
}

void GraphRnnModel::import_tensors(const Checkpoint& ckpt) {
  std::map<std::string, const Mat*> by_name;
  for (const auto& [name, tensor] : ckpt.tensors) by_name[name] = &tensor;
  for (Param* p : parameters()) {
    auto it = by_name.find(p->name);
    if (it == by_name.end())
      throw std::runtime_error("checkpoint is missing tensor " + p->name);
    if (it->second->rows() != p->value.rows() || it->second->cols() != p->value.cols())
      throw std::runtime_error("checkpoint tensor shape mismatch for " + p->name);
    p->value = *it->second;
  }
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

namespace {

json model_config_json(const ModelConfig& cfg) {
  json j;
  j["variant"] = to_string(cfg.variant);
  if (cfg.m)
    j["m"] = *cfg.m;
  else
    j["m"] = nullptr;
  j["max_nodes"] = cfg.max_nodes;
  j["ordering"] = to_string(cfg.ordering);
  j["node_hidden"] = cfg.node_hidden;
  j["node_layers"] = cfg.node_layers;
  j["node_embed"] = cfg.node_embed;
  j["edge_hidden"] = cfg.edge_hidden;
  j["edge_layers"] = cfg.edge_layers;
  j["edge_embed"] = cfg.edge_embed;
  j["edge_head_hidden"] = cfg.edge_head_hidden;
  j["mlp_hidden"] = cfg.mlp_hidden;
  return j;
}

ModelConfig model_config_from(const json& j) {
  ModelConfig cfg;
  cfg.variant = variant_from_string(j.at("variant").get<std::string>());
  if (!j.at("m").is_null()) cfg.m = j.at("m").get<int>();
  cfg.max_nodes = j.at("max_nodes").get<int>();
  cfg.ordering = ordering_from_string(j.at("ordering").get<std::string>());
  cfg.node_hidden = j.value("node_hidden", cfg.node_hidden);
  cfg.node_layers = j.value("node_layers", cfg.node_layers);
  cfg.node_embed = j.value("node_embed", cfg.node_embed);
  cfg.edge_hidden = j.value("edge_hidden", cfg.edge_hidden);
  cfg.edge_layers = j.value("edge_layers", cfg.edge_layers);
  cfg.edge_embed = j.value("edge_embed", cfg.edge_embed);
  cfg.edge_head_hidden = j.value("edge_head_hidden", cfg.edge_head_hidden);
  cfg.mlp_hidden = j.value("mlp_hidden", cfg.mlp_hidden);
  return cfg;
}

json train_config_json(const TrainConfig& cfg) {
  json j;
  j["iterations"] = cfg.iterations;
  j["batch_size"] = cfg.batch_size;
  j["checkpoint_every"] = cfg.checkpoint_every;
  j["eval_horizon"] = cfg.eval_horizon;
  j["seed"] = cfg.seed;
  j["base_lr"] = cfg.adam.base_lr;
  j["lr_gamma"] = cfg.adam.gamma;
  j["lr_milestones"] = cfg.adam.milestones;
  j["clip_norm"] = cfg.adam.clip_norm;
  return j;
}

std::uint64_t double_bits(double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  return bits;
}

double bits_double(std::uint64_t bits) {
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

std::string ckpt_name(long long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ckpt_%08lld.bin", step);
  return buf;
}

/// Rewrites a CSV keeping only rows with step <= max_step (resume trimming).
void trim_csv(const std::string& path, long long max_step) {
  std::ifstream in(path);
  if (!in) return;
  std::vector<std::string> kept;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      kept.push_back(line);
      first = false;
      continue;
    }
    if (line.empty()) continue;
    const long long step = std::strtoll(line.c_str(), nullptr, 10);
    if (step <= max_step) kept.push_back(line);
  }
  in.close();
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : kept) out << l << '\n';
}

}  // namespace

std::string model_config_to_json(const ModelConfig& cfg) {
  return model_config_json(cfg).dump(2);
}

ModelConfig model_config_from_json(const std::string& json_text) {
  return model_config_from(json::parse(json_text));
}

TrainResult train_model(const std::vector<Graph>& train_set, const ModelConfig& mcfg,
                        const TrainConfig& tcfg, const std::string& resume_from) {
  mcfg.validate();
  if (train_set.empty()) throw std::invalid_argument("train_model: empty training set");
  if (tcfg.out_dir.empty()) throw std::invalid_argument("train_model: out_dir not set");
  fs::create_directories(tcfg.out_dir);

  json config_echo;
  config_echo["model"] = model_config_json(mcfg);
  config_echo["train"] = train_config_json(tcfg);
  const std::string config_json = config_echo.dump(2);

  Rng init_rng(tcfg.seed, 1);
  GraphRnnModel model(mcfg, init_rng);
  std::vector<Param*> params = model.parameters();
  AdamState opt;
  opt.init(params);

  Rng order_rng(tcfg.seed, 10);
  Rng shuffle_rng(tcfg.seed, 11);
  std::vector<int> epoch_order(train_set.size());
  for (std::size_t i = 0; i < epoch_order.size(); ++i)
    epoch_order[i] = static_cast<int>(i);
  std::size_t cursor = epoch_order.size();  // forces a shuffle on first use
  double ema = std::numeric_limits<double>::quiet_NaN();
  long long start_iter = 0;

  const std::string loss_path = tcfg.out_dir + "/loss.csv";
  const std::string index_path = tcfg.out_dir + "/ckpt_index.csv";

  if (!resume_from.empty()) {
    Checkpoint ckpt = load_checkpoint(resume_from);
    if (ckpt.config_json != config_json)
      throw std::runtime_error("resume config mismatch; refusing to continue");
    model.import_tensors(ckpt);
    params = model.parameters();
    opt.step = ckpt.adam_step;
    opt.m = ckpt.adam_m;
    opt.v = ckpt.adam_v;
    order_rng.load_state(ckpt.rng_states.at("order"));
    shuffle_rng.load_state(ckpt.rng_states.at("shuffle"));
    const json trainer = json::parse(ckpt.trainer_state_json);
    epoch_order = trainer.at("epoch_order").get<std::vector<int>>();
    cursor = trainer.at("cursor").get<std::size_t>();
    ema = bits_double(trainer.at("ema_bits").get<std::uint64_t>());
    start_iter = ckpt.step;
    trim_csv(loss_path, start_iter);
    trim_csv(index_path, start_iter);
  } else {
    std::ofstream loss_out(loss_path, std::ios::trunc);
    loss_out << "step,loss\n";
    std::ofstream index_out(index_path, std::ios::trunc);
    index_out << "step,path,smoothed\n";
    std::ofstream cfg_out(tcfg.out_dir + "/train_manifest.json");
    cfg_out << config_json << '\n';
  }

  TrainResult result;
  std::vector<std::pair<long long, double>> pending_rows;

  auto save_ckpt = [&](long long step) {
    Checkpoint ckpt;
    ckpt.config_json = config_json;
    ckpt.step = step;
    model.export_tensors(ckpt);
    ckpt.adam_step = opt.step;
    ckpt.adam_m = opt.m;
    ckpt.adam_v = opt.v;
    ckpt.rng_states["order"] = order_rng.save_state();
    ckpt.rng_states["shuffle"] = shuffle_rng.save_state();
    json trainer;
    trainer["epoch_order"] = epoch_order;
    trainer["cursor"] = cursor;
    trainer["ema_bits"] = double_bits(ema);
    trainer["smoothed"] = ema;
    ckpt.trainer_state_json = trainer.dump();
    const std::string path = tcfg.out_dir + "/" + ckpt_name(step);
    save_checkpoint(path, ckpt);

    std::ofstream loss_out(loss_path, std::ios::app);
    loss_out.precision(17);
    for (const auto& [s, l] : pending_rows) loss_out << s << ',' << l << '\n';
    pending_rows.clear();
    std::ofstream index_out(index_path, std::ios::app);
    index_out.precision(17);
    index_out << step << ',' << path << ',' << ema << '\n';

    result.checkpoint_paths.push_back(path);
    return path;
  };

  for (long long iter = start_iter; iter < tcfg.iterations; ++iter) {
    std::vector<TrainingExample> examples;
    examples.reserve(tcfg.batch_size);
    for (int k = 0; k < tcfg.batch_size; ++k) {
      if (cursor >= epoch_order.size()) {
        shuffle_rng.shuffle(epoch_order);
        cursor = 0;
      }
      const Graph& g = train_set[epoch_order[cursor++]];
      examples.push_back(make_training_example(g, mcfg, order_rng));
    }
    Batch batch = collate(examples, mcfg);

    model.zero_grads();
    const double loss = model.forward_backward(batch);
    clip_global_norm(params, tcfg.adam.clip_norm);
    adam_step(opt, tcfg.adam, params);

    ema = std::isnan(ema) ? loss : 0.99 * ema + 0.01 * loss;
    result.loss_log.emplace_back(iter + 1, loss);
    pending_rows.emplace_back(iter + 1, loss);

    const long long step = iter + 1;
    if (step % tcfg.checkpoint_every == 0 || step == tcfg.iterations) {
      const std::string path = save_ckpt(step);
      if (step == tcfg.iterations) result.final_checkpoint = path;
    }
  }
  if (result.final_checkpoint.empty() && !result.checkpoint_paths.empty())
    result.final_checkpoint = result.checkpoint_paths.back();

  // Checkpoint selection: lowest smoothed loss within the evaluation horizon.
  {
    std::ifstream index_in(index_path);
    std::string line;
    std::getline(index_in, line);  // header
    double best = std::numeric_limits<double>::infinity();
    while (std::getline(index_in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string step_s, path_s, smoothed_s;
      std::getline(ss, step_s, ',');
      std::getline(ss, path_s, ',');
      std::getline(ss, smoothed_s, ',');
      const long long step = std::strtoll(step_s.c_str(), nullptr, 10);
      const double smoothed = std::strtod(smoothed_s.c_str(), nullptr);
      if (step <= tcfg.eval_horizon && smoothed < best) {
        best = smoothed;
        result.best_checkpoint = path_s;
      }
    }
    if (result.best_checkpoint.empty()) result.best_checkpoint = result.final_checkpoint;
  }
  return result;
}

GraphRnnModel load_model(const std::string& checkpoint_path) {
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  const json config = json::parse(ckpt.config_json);
  ModelConfig mcfg = model_config_from(config.at("model"));
  Rng dummy(0);
  GraphRnnModel model(mcfg, dummy);
  model.import_tensors(ckpt);
  return model;
}

std::vector<Graph> sample_from_checkpoint(const std::string& checkpoint_path,
                                          int count, std::uint64_t seed) {
  GraphRnnModel model = load_model(checkpoint_path);
  Rng rng(seed, 500);
  return model.sample_graphs(count, rng);
}

}  // namespace graphgen
