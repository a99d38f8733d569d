#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "graphgen/baselines.hpp"
#include "graphgen/graph_io.hpp"
#include "graphgen/metrics.hpp"

namespace graphgen::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("GRAPHGEN_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

void ensure_fresh(const std::string& path, bool force) {
  if (!force && fs::exists(path))
    throw std::runtime_error(path + " already exists (pass --force to overwrite)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string two_decimals(double x) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << x;
  return out.str();
}

}  // namespace

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[graphgen] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[graphgen:debug] " << msg << '\n';
}

PreparedDataset prepare_dataset(const ExperimentConfig& cfg) {
  PreparedDataset out;
  const std::vector<Graph> graphs = generate_dataset(cfg.dataset);

  Rng split_rng(cfg.seed, 3);
  SplitDataset sp = split(graphs, cfg.split_ratio, split_rng);
  out.train = std::move(sp.train);
  out.test = std::move(sp.test);

  out.min_nodes = graphs.front().num_nodes();
  out.max_nodes = 0;
  for (const auto& g : graphs) {
    out.min_nodes = std::min(out.min_nodes, g.num_nodes());
    out.max_nodes = std::max(out.max_nodes, g.num_nodes());
  }

  Rng m_rng(cfg.seed, 4);
  const std::vector<Graph>& m_source = cfg.m_on_train_only ? out.train : graphs;
  out.estimated_m =
      estimate_m(m_source, cfg.estimate_m_samples, m_rng, cfg.m_start_policy);
  out.reduction_pct =
      100.0 * (1.0 - static_cast<double>(out.estimated_m) / out.max_nodes);
  return out;
}

ModelConfig resolve_model_config(const ExperimentConfig& cfg,
                                 const PreparedDataset& data) {
  ModelConfig model = cfg.model;
  if (cfg.max_nodes_auto) {
    int max_train = 2;
    for (const auto& g : data.train) max_train = std::max(max_train, g.num_nodes());
    model.max_nodes = static_cast<int>(std::ceil(max_train * 1.2));
  }
  if (cfg.m_auto && model.variant != ModelVariant::Dag &&
      model.ordering != OrderingPolicy::Random)
    model.m = data.estimated_m;
  model.validate();
  return model;
}

ModelConfig ablation_model_config(ModelConfig base, const std::string& which) {
  if (which == "full") return base;
  if (which == "no_m") {
    base.m.reset();
    return base;
  }
  if (which == "no_bfs") {
    base.m.reset();
    base.ordering = OrderingPolicy::Random;
    return base;
  }
  throw std::invalid_argument("unknown ablation: " + which);
}

void write_loss_svg(const std::vector<std::pair<long long, double>>& log,
                    const std::string& path) {
  const int width = 720, height = 360, margin = 45;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!log.empty()) {
    double max_loss = 0.0, min_loss = log.front().second;
    long long max_step = 1;
    for (const auto& [s, l] : log) {
      max_loss = std::max(max_loss, l);
      min_loss = std::min(min_loss, l);
      max_step = std::max(max_step, s);
    }
    if (max_loss <= min_loss) max_loss = min_loss + 1.0;
    auto px = [&](long long s) {
      return margin + (width - 2.0 * margin) * s / static_cast<double>(max_step);
    };
    auto py = [&](double l) {
      return height - margin -
             (height - 2.0 * margin) * (l - min_loss) / (max_loss - min_loss);
    };
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (const auto& [s, l] : log) svg << px(s) << ',' << py(l) << ' ';
    svg << "\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n";
    svg << "<text x=\"12\" y=\"" << height / 2
        << "\" font-size=\"12\" transform=\"rotate(-90 12 " << height / 2
        << ")\" text-anchor=\"middle\">loss</text>\n";
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

int cmd_dataset(const ExperimentConfig& cfg, bool force) {
  const std::string dir = cfg.out_dir + "/dataset";
  fs::create_directories(dir);
  ensure_fresh(dir + "/train.jsonl", force);

  const PreparedDataset data = prepare_dataset(cfg);
  write_graphs(dir + "/train.jsonl", data.train, cfg.dataset.name + "-train");
  write_graphs(dir + "/test.jsonl", data.test, cfg.dataset.name + "-test");

  json report;
  report["dataset"] = cfg.dataset.name;
  report["min_nodes"] = data.min_nodes;
  report["max_nodes"] = data.max_nodes;
  report["m"] = data.estimated_m;
  report["reduction_pct"] = data.reduction_pct;
  report["samples"] = cfg.estimate_m_samples;
  report["m_on_train_only"] = cfg.m_on_train_only;
  write_text(dir + "/m_report.json", report.dump(2) + "\n");

  std::ostringstream csv;
  csv << "dataset,min_nodes,max_nodes,m,reduction_pct\n";
  csv << cfg.dataset.name << ',' << data.min_nodes << ',' << data.max_nodes << ','
      << data.estimated_m << ',' << two_decimals(data.reduction_pct) << '\n';
  write_text(dir + "/m_report.csv", csv.str());

  write_text(dir + "/dataset_config.json", experiment_config_to_json(cfg) + "\n");

  log_info("dataset " + cfg.dataset.name + ": train " +
           std::to_string(data.train.size()) + ", test " +
           std::to_string(data.test.size()) + ", nodes [" +
           std::to_string(data.min_nodes) + ", " + std::to_string(data.max_nodes) +
           "], M " + std::to_string(data.estimated_m) + " (reduction " +
           two_decimals(data.reduction_pct) + "%)");
  return 0;
}

namespace {

std::vector<Graph> load_split(const ExperimentConfig& cfg, const std::string& which) {
  const std::string path = cfg.out_dir + "/dataset/" + which + ".jsonl";
  if (!fs::exists(path))
    throw std::runtime_error(path + " not found (run `graphgen dataset` first)");
  return read_graphs(path);
}

int stored_m(const ExperimentConfig& cfg) {
  const std::string path = cfg.out_dir + "/dataset/m_report.json";
  if (!fs::exists(path))
    throw std::runtime_error(path + " not found (run `graphgen dataset` first)");
  std::ifstream in(path);
  json j;
  in >> j;
  return j.at("m").get<int>();
}

}  // namespace

int cmd_train(const ExperimentConfig& cfg, bool force, const std::string& resume) {
  const std::vector<Graph> train_set = load_split(cfg, "train");

  ModelConfig model = cfg.model;
  if (cfg.max_nodes_auto) {
    int max_train = 2;
    for (const auto& g : train_set) max_train = std::max(max_train, g.num_nodes());
    model.max_nodes = static_cast<int>(std::ceil(max_train * 1.2));
  }
  if (cfg.m_auto && model.variant != ModelVariant::Dag &&
      model.ordering != OrderingPolicy::Random)
    model.m = stored_m(cfg);
  model.validate();

  TrainConfig tcfg = cfg.train;
  tcfg.out_dir = cfg.out_dir + "/train";
  if (resume.empty()) {
    ensure_fresh(tcfg.out_dir + "/loss.csv", force);
    if (force) fs::remove_all(tcfg.out_dir);
  }
  fs::create_directories(tcfg.out_dir);

  log_info("training " + to_string(model.variant) + " for " +
           std::to_string(tcfg.iterations) + " iterations");
  const TrainResult result = train_model(train_set, model, tcfg, resume);

  write_text(tcfg.out_dir + "/best_checkpoint.txt", result.best_checkpoint + "\n");
  if (cfg.emit_svg) write_loss_svg(result.loss_log, tcfg.out_dir + "/loss.svg");
  log_info("training done; best checkpoint " + result.best_checkpoint);
  return 0;
}

int cmd_sample(const ExperimentConfig& cfg, const std::string& checkpoint, int count,
               bool force) {
  std::string ckpt = checkpoint;
  if (ckpt.empty()) {
    const std::string marker = cfg.out_dir + "/train/best_checkpoint.txt";
    if (!fs::exists(marker))
      throw std::runtime_error("no --checkpoint given and " + marker + " not found");
    std::ifstream in(marker);
    std::getline(in, ckpt);
  }
  const std::string dir = cfg.out_dir + "/samples";
  fs::create_directories(dir);
  const std::string path = dir + "/samples.jsonl";
  ensure_fresh(path, force);

  const std::vector<Graph> samples =
      sample_from_checkpoint(ckpt, count, cfg.seed + 5);
  write_graphs(path, samples, cfg.dataset.name + "-sample");
  log_info("wrote " + std::to_string(samples.size()) + " samples to " + path);
  return 0;
}

namespace {

void write_report_files(const MmdReport& report, const KernelConfig& kernel,
                        const std::string& dir, const std::string& stem) {
  write_text(dir + "/" + stem + ".csv", report_to_csv(report));

  json j;
  j["scores"]["degree_mmd"] = report.degree;
  j["scores"]["clustering_mmd"] = report.clustering;
  if (report.orbit) j["scores"]["orbit_mmd"] = *report.orbit;
  j["scores"]["betweenness_mmd"] = report.betweenness;
  j["scores"]["closeness_mmd"] = report.closeness;
  j["scores"]["density_diff"] = report.density_diff;
  j["scores"]["transitivity_diff"] = report.transitivity_diff;
  j["scores"]["components_per_graph"] = report.components_per_graph;
  j["kernel"] = {{"kind", "gaussian-emd"},
                 {"sigma_degree", kernel.sigma_degree},
                 {"sigma_clustering", kernel.sigma_clustering},
                 {"sigma_orbit", kernel.sigma_orbit},
                 {"sigma_betweenness", kernel.sigma_betweenness},
                 {"sigma_closeness", kernel.sigma_closeness},
                 {"value_bins", kernel.value_bins}};
  write_text(dir + "/" + stem + ".json", j.dump(2) + "\n");

  std::ostringstream txt;
  txt << "degree MMD        " << report.degree << "\n";
  txt << "clustering MMD    " << report.clustering << "\n";
  if (report.orbit)
    txt << "orbit MMD         " << *report.orbit << "\n";
  else
    txt << "orbit MMD         (omitted: directed graphs)\n";
  txt << "betweenness MMD   " << report.betweenness << "\n";
  txt << "closeness MMD     " << report.closeness << "\n";
  txt << "density diff      " << report.density_diff << "\n";
  txt << "transitivity diff " << report.transitivity_diff << "\n";
  txt << "components/graph  " << report.components_per_graph << "\n";
  write_text(dir + "/" + stem + ".txt", txt.str());
}

}  // namespace

int cmd_eval(const std::string& generated_path, const std::string& test_path,
             const ExperimentConfig& cfg, const std::string& out_dir, bool force) {
  if (!fs::exists(generated_path))
    throw std::runtime_error("no such file: " + generated_path);
  if (!fs::exists(test_path)) throw std::runtime_error("no such file: " + test_path);

  const std::vector<Graph> generated = read_graphs(generated_path);
  const std::vector<Graph> test = read_graphs(test_path);

  const std::string dir = out_dir.empty() ? cfg.out_dir + "/eval" : out_dir;
  fs::create_directories(dir);
  ensure_fresh(dir + "/report.csv", force);

  const MmdReport report = evaluate(generated, test, cfg.kernel);
  write_report_files(report, cfg.kernel, dir, "report");
  log_info("eval report written to " + dir);
  std::cout << report_to_csv(report);
  return 0;
}

int cmd_baseline(const ExperimentConfig& cfg, bool force) {
  const std::vector<Graph> train_set = load_split(cfg, "train");
  const std::vector<Graph> test_set = load_split(cfg, "test");

  const std::string dir = cfg.out_dir + "/baseline";
  fs::create_directories(dir);
  ensure_fresh(dir + "/er_params.json", force);

  const ErParams er = er_fit(train_set);
  const BaParams ba = ba_fit(train_set);

  json er_j;
  er_j["p"] = er.p;
  er_j["node_counts"] = er.node_counts;
  write_text(dir + "/er_params.json", er_j.dump(2) + "\n");
  json ba_j;
  ba_j["m"] = ba.m;
  ba_j["node_counts"] = ba.node_counts;
  write_text(dir + "/ba_params.json", ba_j.dump(2) + "\n");

  Rng er_rng(cfg.seed, 20);
  Rng ba_rng(cfg.seed, 21);
  const std::vector<Graph> er_samples = er_sample(er, cfg.sample_count, er_rng);
  const std::vector<Graph> ba_samples = ba_sample(ba, cfg.sample_count, ba_rng);
  write_graphs(dir + "/er_samples.jsonl", er_samples, cfg.dataset.name + "-er");
  write_graphs(dir + "/ba_samples.jsonl", ba_samples, cfg.dataset.name + "-ba");

  write_report_files(evaluate(er_samples, test_set, cfg.kernel), cfg.kernel, dir,
                     "er_report");
  write_report_files(evaluate(ba_samples, test_set, cfg.kernel), cfg.kernel, dir,
                     "ba_report");
  log_info("baseline reports written to " + dir);
  return 0;
}

int cmd_ablate(const ExperimentConfig& cfg, bool force) {
  const std::vector<std::string> datasets = {"community-small", "ego-small",
                                             "grid-small"};
  const std::vector<std::string> settings = {"full", "no_m", "no_bfs"};

  const std::string dir = cfg.out_dir + "/ablate";
  fs::create_directories(dir);
  ensure_fresh(dir + "/table.csv", force);

  std::ostringstream table;
  table << "dataset,setting,seed,degree_mmd,clustering_mmd,orbit_mmd\n";

  for (const auto& name : datasets) {
    ExperimentConfig cell_cfg = cfg;
    cell_cfg.dataset.name = name;
    cell_cfg.dataset.count = 0;
    cell_cfg.dataset.seed = 0;
    cell_cfg.model.variant = ModelVariant::Rnn;
    cell_cfg.finalize();

    const PreparedDataset data = prepare_dataset(cell_cfg);
    const ModelConfig base = resolve_model_config(cell_cfg, data);

    for (const auto& which : settings) {
      const ModelConfig model = ablation_model_config(base, which);
      TrainConfig tcfg = cell_cfg.train;
      tcfg.out_dir = dir + "/" + name + "_" + which;
      fs::create_directories(tcfg.out_dir);

      log_info("ablation cell " + name + "/" + which + " (seed " +
               std::to_string(tcfg.seed) + ")");
      const TrainResult run = train_model(data.train, model, tcfg);
      const std::vector<Graph> samples =
          sample_from_checkpoint(run.best_checkpoint, cfg.sample_count, cfg.seed + 5);
      write_graphs(tcfg.out_dir + "/samples.jsonl", samples, name + "-" + which);
      const MmdReport report = evaluate(samples, data.test, cfg.kernel);
      write_report_files(report, cfg.kernel, tcfg.out_dir, "report");

      table << name << ',' << which << ',' << tcfg.seed << ',' << report.degree << ','
            << report.clustering << ','
            << (report.orbit ? *report.orbit : -1.0) << '\n';
    }
  }
  write_text(dir + "/table.csv", table.str());
  log_info("ablation table written to " + dir + "/table.csv");
  return 0;
}

}  // namespace graphgen::cli
