#include "hierlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hierlab/analysis.hpp"
#include "hierlab/generate.hpp"
#include "hierlab/stats.hpp"

namespace hierlab {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    maybe(d, "kind", c.dataset.kind);
    maybe(d, "name", c.dataset.name);
    maybe(d, "path", c.dataset.path);
    maybe(d, "iterations", c.dataset.iterations);
    maybe(d, "module_size", c.dataset.module_size);
    maybe(d, "n", c.dataset.n);
    maybe(d, "m", c.dataset.m);
    maybe(d, "gen_seed", c.dataset.gen_seed);
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    maybe(s, "type", c.split.type);
    maybe(s, "per_class", c.split.per_class);
    maybe(s, "val", c.split.val);
    maybe(s, "test", c.split.test);
    maybe(s, "band", c.split.band);
  }
  if (j.contains("embedding")) {
    const auto& e = j.at("embedding");
    maybe(e, "dim", c.embedding.dim);
    maybe(e, "epochs", c.embedding.epochs);
    maybe(e, "lr", c.embedding.lr);
    maybe(e, "neg_samples", c.embedding.neg_samples);
    maybe(e, "curvature", c.embedding.curvature);
    maybe(e, "seed", c.embedding.seed);
  }
  if (j.contains("curvature")) {
    const auto& k = j.at("curvature");
    maybe(k, "alpha", c.curvature.alpha);
    maybe(k, "p", c.curvature.p);
    maybe(k, "kappa_literal", c.curvature.kappa_literal);
    std::string ground = "hop";
    maybe(k, "ground", ground);
    c.curvature.ground =
        ground == "embedding" ? GroundMetric::Embedding : GroundMetric::Hop;
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    maybe(m, "hidden", c.model.hidden);
    maybe(m, "lr", c.model.lr);
    maybe(m, "momentum", c.model.momentum);
    maybe(m, "weight_decay", c.model.weight_decay);
    maybe(m, "epochs", c.model.epochs);
    maybe(m, "patience", c.model.patience);
    maybe(m, "alpha_margin", c.model.alpha_margin);
    maybe(m, "margin_sign", c.model.margin_sign);
    maybe(m, "ablate", c.model.ablate);
    maybe(m, "curv_lr_scale", c.model.curv_lr_scale);
    maybe(m, "ham_lr_scale", c.model.ham_lr_scale);
  }
  maybe(j, "seeds", c.seeds);
  maybe(j, "out_dir", c.out_dir);
  maybe(j, "data_root", c.data_root);
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["dataset"] = {{"kind", dataset.kind},       {"name", dataset.name},
                  {"path", dataset.path},       {"iterations", dataset.iterations},
                  {"module_size", dataset.module_size}, {"n", dataset.n},
                  {"m", dataset.m},             {"gen_seed", dataset.gen_seed}};
  j["split"] = {{"type", split.type},
                {"per_class", split.per_class},
                {"val", split.val},
                {"test", split.test},
                {"band", split.band}};
  j["embedding"] = {{"dim", embedding.dim},   {"epochs", embedding.epochs},
                    {"lr", embedding.lr},     {"neg_samples", embedding.neg_samples},
                    {"curvature", embedding.curvature}, {"seed", embedding.seed}};
  j["curvature"] = {{"alpha", curvature.alpha},
                    {"p", curvature.p},
                    {"kappa_literal", curvature.kappa_literal},
                    {"ground", curvature.ground == GroundMetric::Embedding
                                   ? "embedding"
                                   : "hop"}};
  j["model"] = {{"hidden", model.hidden},
                {"lr", model.lr},
                {"momentum", model.momentum},
                {"weight_decay", model.weight_decay},
                {"epochs", model.epochs},
                {"patience", model.patience},
                {"alpha_margin", model.alpha_margin},
                {"margin_sign", model.margin_sign},
                {"ablate", model.ablate},
                {"curv_lr_scale", model.curv_lr_scale},
                {"ham_lr_scale", model.ham_lr_scale}};
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["data_root"] = data_root;
  return j;
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.config = j.at("config");
  for (const auto& s : j.at("per_seed")) {
    SeedReport sr;
    sr.seed = s.at("seed").get<std::uint64_t>();
    sr.weighted_f1 = s.at("weighted_f1").get<double>();
    sr.micro_f1 = s.at("micro_f1").get<double>();
    sr.accuracy = s.at("accuracy").get<double>();
    sr.best_epoch = s.at("best_epoch").get<int>();
    sr.topup_fraction = s.at("topup_fraction").get<double>();
    sr.wall_seconds = s.at("wall_seconds").get<double>();
    sr.losses = s.at("losses").get<std::vector<double>>();
    sr.error = s.at("error").get<std::string>();
    r.per_seed.push_back(std::move(sr));
  }
  const auto& a = j.at("aggregate");
  r.weighted_f1_mean = a.at("weighted_f1_mean").get<double>();
  r.weighted_f1_std = a.at("weighted_f1_std").get<double>();
  r.micro_f1_mean = a.at("micro_f1_mean").get<double>();
  r.micro_f1_std = a.at("micro_f1_std").get<double>();
  r.accuracy_mean = a.at("accuracy_mean").get<double>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.all_succeeded = j.at("all_succeeded").get<bool>();
  return r;
}

json RunReport::to_json() const {
  json j;
  j["config"] = config;
  j["per_seed"] = json::array();
  for (const auto& s : per_seed) {
    j["per_seed"].push_back({{"seed", s.seed},
                             {"weighted_f1", s.weighted_f1},
                             {"micro_f1", s.micro_f1},
                             {"accuracy", s.accuracy},
                             {"best_epoch", s.best_epoch},
                             {"topup_fraction", s.topup_fraction},
                             {"wall_seconds", s.wall_seconds},
                             {"losses", s.losses},
                             {"error", s.error}});
  }
  j["aggregate"] = {{"weighted_f1_mean", weighted_f1_mean},
                    {"weighted_f1_std", weighted_f1_std},
                    {"micro_f1_mean", micro_f1_mean},
                    {"micro_f1_std", micro_f1_std},
                    {"accuracy_mean", accuracy_mean}};
  j["wall_seconds"] = wall_seconds;
  j["all_succeeded"] = all_succeeded;
  return j;
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
  const auto& d = cfg.dataset;
  if (d.kind == "benchmark") return load_benchmark(d.name, cfg.data_root);
  if (d.kind == "csv") return load_csv_dataset(d.path);
  if (d.kind == "hnm") {
    auto hnm = hnm_generate(d.module_size, d.iterations);
    Dataset ds;
    ds.graph = std::move(hnm.graph);
    ds.generation = std::move(hnm.annotation.generation);
    return ds;
  }
  if (d.kind == "hnm3") {
    auto hnm = hnm_three_community(d.iterations, d.module_size);
    Dataset ds;
    ds.graph = std::move(hnm.graph);
    ds.generation = std::move(hnm.annotation.generation);
    return ds;
  }
  if (d.kind == "ba") {
    Dataset ds;
    ds.graph = ba_generate(d.n, d.m, d.gen_seed);
    return ds;
  }
  throw std::invalid_argument("dataset kind: " + d.kind);
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  auto t_start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg.to_json();
  if (cfg.seeds.empty()) throw std::invalid_argument("run: no seeds");

  Dataset ds = load_experiment_dataset(cfg);
  const Graph& g = ds.graph;

  Ablation ablate = parse_ablation(cfg.model.ablate);
  bool ham_active = (ablate == Ablation::None || ablate == Ablation::Hmpnn) &&
                    cfg.model.alpha_margin != 0.0;
  bool need_curvature = ablate == Ablation::None || ablate == Ablation::Ham;
  bool quantile_band = cfg.split.type == "hierarchy" &&
                       BandSpec::parse(cfg.split.band).kind ==
                           BandSpec::Kind::NormQuantile;
  bool need_embedding =
      ham_active || quantile_band ||
      (need_curvature && cfg.curvature.ground == GroundMetric::Embedding);

  // The embedding depends only on the graph; shared across seeds.
  std::optional<PoincareEmbedding> embedding;
  if (need_embedding) embedding.emplace(embed_train(g, cfg.embedding));

  std::vector<double> wf1s, mf1s, accs;
  for (std::uint64_t seed : cfg.seeds) {
    SeedReport sr;
    sr.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    try {
      BalancedSplitOptions sopts;
      sopts.per_class = cfg.split.per_class;
      sopts.val_count = cfg.split.val;
      sopts.test_count = cfg.split.test;

      SplitMask mask;
      if (cfg.split.type == "hierarchy") {
        auto band = BandSpec::parse(cfg.split.band);
        auto hs = make_hierarchy_split(
            g, band, ds.generation.empty() ? nullptr : &ds.generation,
            embedding ? &*embedding : nullptr, sopts, seed);
        mask = std::move(hs.mask);
        sr.topup_fraction = hs.topup_fraction;
      } else if (cfg.split.type == "balanced") {
        mask = make_balanced_split(g, sopts, seed);
      } else {
        throw std::invalid_argument("split type: " + cfg.split.type);
      }

      // Curvature sees only this seed's training labels.
      std::optional<EdgeCurvatureTable> table;
      if (need_curvature)
        table.emplace(curvature_table(g, cfg.curvature, mask,
                                      embedding ? &*embedding : nullptr));

      TrainOptions topts;
      topts.hidden = cfg.model.hidden;
      topts.lr = cfg.model.lr;
      topts.momentum = cfg.model.momentum;
      topts.weight_decay = cfg.model.weight_decay;
      topts.epochs = cfg.model.epochs;
      topts.patience = cfg.model.patience;
      topts.alpha_margin = cfg.model.alpha_margin;
      topts.margin_sign = cfg.model.margin_sign == "literal"
                              ? MarginSign::Literal
                              : MarginSign::Ldam;
      topts.ablate = ablate;
      topts.curv_lr_scale = cfg.model.curv_lr_scale;
      topts.ham_lr_scale = cfg.model.ham_lr_scale;
      topts.seed = seed;

      auto result = train(g, embedding ? &*embedding : nullptr,
                          table ? &*table : nullptr, mask, topts);
      sr.weighted_f1 = result.test_weighted_f1;
      sr.micro_f1 = result.test_micro_f1;
      sr.accuracy = result.test_accuracy;
      sr.best_epoch = result.best_epoch;
      for (const auto& e : result.epochs) sr.losses.push_back(e.loss);
      wf1s.push_back(sr.weighted_f1);
      mf1s.push_back(sr.micro_f1);
      accs.push_back(sr.accuracy);
    } catch (const std::exception& ex) {
      sr.error = ex.what();
      report.all_succeeded = false;
    }
    sr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.per_seed.push_back(std::move(sr));
  }

  if (!wf1s.empty()) {
    report.weighted_f1_mean = stats::mean(wf1s);
    report.weighted_f1_std = stats::stddev(wf1s);
    report.micro_f1_mean = stats::mean(mf1s);
    report.micro_f1_std = stats::stddev(mf1s);
    report.accuracy_mean = stats::mean(accs);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!cfg.out_dir.empty()) {
    std::filesystem::path dir(cfg.out_dir);
    atomic_write(dir / "report.json", report.to_json().dump(2) + "\n");
    std::ostringstream csv;
    csv << "seed,weighted_f1,micro_f1,accuracy,best_epoch,error\n";
    for (const auto& s : report.per_seed)
      csv << s.seed << "," << s.weighted_f1 << "," << s.micro_f1 << ","
          << s.accuracy << "," << s.best_epoch << "," << s.error << "\n";
    atomic_write(dir / "metrics.csv", csv.str());
  }
  return report;
}

void analyze(const Graph& g, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  auto ck = clustering_by_degree(g);
  {
    std::ostringstream out;
    out << "degree,mean_clustering\n";
    for (auto& [k, c] : ck) out << k << "," << c << "\n";
    atomic_write(out_dir / "clustering_by_degree.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "degree,mean_neighbor_degree\n";
    for (auto& [k, v] : neighbor_correlation(g, NeighborQuantity::Connectivity))
      out << k << "," << v << "\n";
    atomic_write(out_dir / "knn_correlation.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "betweenness_bin,mean_neighbor_betweenness\n";
    for (auto& [b, v] : neighbor_correlation(g, NeighborQuantity::Betweenness))
      out << b << "," << v << "\n";
    atomic_write(out_dir / "bnn_correlation.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "degree,count\n";
    for (auto& [k, c] : degree_histogram(g)) out << k << "," << c << "\n";
    atomic_write(out_dir / "degree_histogram.csv", out.str());
  }

  json summary;
  summary["nodes"] = g.num_nodes();
  summary["edges"] = g.num_edges();
  {
    std::vector<double> ks, cs;
    for (auto& [k, c] : ck)
      if (k >= 2 && c > 0.0) {
        ks.push_back(k);
        cs.push_back(c);
      }
    if (ks.size() >= 2)
      summary["clustering_slope"] = stats::loglog_slope(ks, cs);
  }
  {
    std::vector<double> ks, vs;
    for (auto& [k, v] : neighbor_correlation(g, NeighborQuantity::Connectivity)) {
      ks.push_back(k);
      vs.push_back(v);
    }
    if (ks.size() >= 2) summary["knn_spearman"] = stats::spearman(ks, vs);
  }
  if (g.has_labels() && g.fully_labeled())
    summary["edge_homophily"] = edge_homophily(g);
  atomic_write(out_dir / "summary.json", summary.dump(2) + "\n");
}

void write_disk_svg(const std::filesystem::path& path,
                    const PoincareEmbedding& emb,
                    const std::vector<std::int32_t>& labels) {
  if (emb.dim != 2)
    throw std::invalid_argument("plot-disk: embedding must be 2-D");
  static const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                   "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
                                   "#ccb974", "#64b5cd"};
  const int size = 640;
  const double half = size / 2.0;
  const double radius = half - 10.0;
  double root_c = std::sqrt(emb.curvature);

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size
      << "' height='" << size << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<circle cx='" << half << "' cy='" << half << "' r='" << radius
      << "' fill='none' stroke='#444' stroke-width='1'/>\n";
  for (NodeId v = 0; v < emb.num_nodes(); ++v) {
    double x = emb.points[static_cast<size_t>(v) * 2] * root_c;
    double y = emb.points[static_cast<size_t>(v) * 2 + 1] * root_c;
    const char* color = "#333333";
    if (v < static_cast<NodeId>(labels.size()) && labels[v] >= 0)
      color = kPalette[labels[v] % 10];
    svg << "<circle cx='" << half + x * radius << "' cy='" << half - y * radius
        << "' r='2.2' fill='" << color << "' fill-opacity='0.8'/>\n";
  }
  svg << "</svg>\n";
  atomic_write(path, svg.str());
}

}  // namespace hierlab
