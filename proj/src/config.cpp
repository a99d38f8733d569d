#include "graphgen/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace graphgen {

using nlohmann::json;

namespace {

int default_count(const std::string& name) {
  if (name == "grid-small") return 500;
  if (name == "community-small") return 500;
  return 200;  // ego-small / ego-directed
}

}  // namespace

void ExperimentConfig::finalize() {
  if (dataset.count == 0) dataset.count = default_count(dataset.name);
  if (dataset.seed == 0) dataset.seed = seed;
  if (train.seed == 0) train.seed = seed + 2;

  if (dataset.name == "ego-directed") {
    if (model.variant != ModelVariant::Dir && model.variant != ModelVariant::Dag)
      model.variant = ModelVariant::Dag;
  }
  if (model.variant == ModelVariant::Dag) {
    model.ordering = OrderingPolicy::Topological;
    model.m.reset();
    m_auto = false;
  }
  if (model.ordering == OrderingPolicy::Random) {
    model.m.reset();
    m_auto = false;
  }
}

namespace {

void parse_dataset(const json& j, DatasetSpec& out) {
  out.name = j.value("name", out.name);
  out.count = j.value("count", out.count);
  out.seed = j.value("seed", out.seed);
  out.citation_path = j.value("citation_path", out.citation_path);
  if (j.contains("community")) {
    const json& c = j.at("community");
    out.community.min_nodes = c.value("min_nodes", out.community.min_nodes);
    out.community.max_nodes = c.value("max_nodes", out.community.max_nodes);
    out.community.p_intra = c.value("p_intra", out.community.p_intra);
    out.community.inter_fraction =
        c.value("inter_fraction", out.community.inter_fraction);
  }
  if (j.contains("ego")) {
    const json& e = j.at("ego");
    out.ego.hops = e.value("hops", out.ego.hops);
    out.ego.min_nodes = e.value("min_nodes", out.ego.min_nodes);
    out.ego.max_nodes = e.value("max_nodes", out.ego.max_nodes);
    out.ego.retry_factor = e.value("retry_factor", out.ego.retry_factor);
  }
  if (j.contains("citation")) {
    const json& c = j.at("citation");
    out.citation.num_papers = c.value("num_papers", out.citation.num_papers);
    out.citation.min_refs = c.value("min_refs", out.citation.min_refs);
    out.citation.max_refs = c.value("max_refs", out.citation.max_refs);
    out.citation.pref_mix = c.value("pref_mix", out.citation.pref_mix);
    out.citation.recent_window = c.value("recent_window", out.citation.recent_window);
  }
}

json dataset_json(const DatasetSpec& d) {
  json j;
  j["name"] = d.name;
  j["count"] = d.count;
  j["seed"] = d.seed;
  j["citation_path"] = d.citation_path;
  j["community"] = {{"min_nodes", d.community.min_nodes},
                    {"max_nodes", d.community.max_nodes},
                    {"p_intra", d.community.p_intra},
                    {"inter_fraction", d.community.inter_fraction}};
  j["ego"] = {{"hops", d.ego.hops},
              {"min_nodes", d.ego.min_nodes},
              {"max_nodes", d.ego.max_nodes},
              {"retry_factor", d.ego.retry_factor}};
  j["citation"] = {{"num_papers", d.citation.num_papers},
                   {"min_refs", d.citation.min_refs},
                   {"max_refs", d.citation.max_refs},
                   {"pref_mix", d.citation.pref_mix},
                   {"recent_window", d.citation.recent_window}};
  return j;
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("dataset")) parse_dataset(j.at("dataset"), cfg.dataset);
  if (cfg.dataset.name.empty())
    throw std::invalid_argument("config: dataset.name is required");

  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.contains("variant"))
      cfg.model.variant = variant_from_string(m.at("variant").get<std::string>());
    if (m.contains("ordering"))
      cfg.model.ordering = ordering_from_string(m.at("ordering").get<std::string>());
    if (m.contains("m") && !m.at("m").is_null()) {
      cfg.model.m = m.at("m").get<int>();
      cfg.m_auto = false;
    }
    if (m.contains("max_nodes")) {
      cfg.model.max_nodes = m.at("max_nodes").get<int>();
      cfg.max_nodes_auto = false;
    }
    cfg.model.node_hidden = m.value("node_hidden", cfg.model.node_hidden);
    cfg.model.node_layers = m.value("node_layers", cfg.model.node_layers);
    cfg.model.node_embed = m.value("node_embed", cfg.model.node_embed);
    cfg.model.edge_hidden = m.value("edge_hidden", cfg.model.edge_hidden);
    cfg.model.edge_layers = m.value("edge_layers", cfg.model.edge_layers);
    cfg.model.edge_embed = m.value("edge_embed", cfg.model.edge_embed);
    cfg.model.edge_head_hidden = m.value("edge_head_hidden", cfg.model.edge_head_hidden);
    cfg.model.mlp_hidden = m.value("mlp_hidden", cfg.model.mlp_hidden);
  }

  if (j.contains("train")) {
    const json& t = j.at("train");
    cfg.train.iterations = t.value("iterations", cfg.train.iterations);
    cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
    cfg.train.checkpoint_every = t.value("checkpoint_every", cfg.train.checkpoint_every);
    cfg.train.eval_horizon = t.value("eval_horizon", cfg.train.eval_horizon);
    cfg.train.seed = t.value("seed", cfg.train.seed);
    cfg.train.adam.base_lr = t.value("base_lr", cfg.train.adam.base_lr);
    cfg.train.adam.gamma = t.value("lr_gamma", cfg.train.adam.gamma);
    if (t.contains("lr_milestones"))
      cfg.train.adam.milestones =
          t.at("lr_milestones").get<std::vector<long long>>();
    cfg.train.adam.clip_norm = t.value("clip_norm", cfg.train.adam.clip_norm);
  }

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    cfg.kernel.sigma_degree = k.value("sigma_degree", cfg.kernel.sigma_degree);
    cfg.kernel.sigma_clustering = k.value("sigma_clustering", cfg.kernel.sigma_clustering);
    cfg.kernel.sigma_orbit = k.value("sigma_orbit", cfg.kernel.sigma_orbit);
    cfg.kernel.sigma_betweenness =
        k.value("sigma_betweenness", cfg.kernel.sigma_betweenness);
    cfg.kernel.sigma_closeness = k.value("sigma_closeness", cfg.kernel.sigma_closeness);
    cfg.kernel.value_bins = k.value("value_bins", cfg.kernel.value_bins);
  }

  cfg.split_ratio = j.value("split_ratio", cfg.split_ratio);
  cfg.m_on_train_only = j.value("m_on_train_only", cfg.m_on_train_only);
  cfg.estimate_m_samples = j.value("estimate_m_samples", cfg.estimate_m_samples);
  if (j.value("m_start_policy", std::string("uniform")) == "all_nodes")
    cfg.m_start_policy = BfsStartPolicy::AllNodes;
  cfg.sample_count = j.value("sample_count", cfg.sample_count);
  cfg.emit_svg = j.value("emit_svg", cfg.emit_svg);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);

  cfg.finalize();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return experiment_config_from_json_text(text);
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["dataset"] = dataset_json(cfg.dataset);
  j["model"] = json::parse(model_config_to_json(cfg.model));
  j["train"] = {{"iterations", cfg.train.iterations},
                {"batch_size", cfg.train.batch_size},
                {"checkpoint_every", cfg.train.checkpoint_every},
                {"eval_horizon", cfg.train.eval_horizon},
                {"seed", cfg.train.seed},
                {"base_lr", cfg.train.adam.base_lr},
                {"lr_gamma", cfg.train.adam.gamma},
                {"lr_milestones", cfg.train.adam.milestones},
                {"clip_norm", cfg.train.adam.clip_norm}};
  j["kernel"] = {{"sigma_degree", cfg.kernel.sigma_degree},
                 {"sigma_clustering", cfg.kernel.sigma_clustering},
                 {"sigma_orbit", cfg.kernel.sigma_orbit},
                 {"sigma_betweenness", cfg.kernel.sigma_betweenness},
                 {"sigma_closeness", cfg.kernel.sigma_closeness},
                 {"value_bins", cfg.kernel.value_bins}};
  j["split_ratio"] = cfg.split_ratio;
  j["m_on_train_only"] = cfg.m_on_train_only;
  j["estimate_m_samples"] = cfg.estimate_m_samples;
  j["m_start_policy"] =
      cfg.m_start_policy == BfsStartPolicy::AllNodes ? "all_nodes" : "uniform";
  j["sample_count"] = cfg.sample_count;
  j["emit_svg"] = cfg.emit_svg;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["m_auto"] = cfg.m_auto;
  j["max_nodes_auto"] = cfg.max_nodes_auto;
  return j.dump(2);
}

ExperimentConfig default_experiment_config(const std::string& dataset_name) {
  ExperimentConfig cfg;
  cfg.dataset.name = dataset_name;
  cfg.finalize();
  return cfg;
}

}  // namespace graphgen
