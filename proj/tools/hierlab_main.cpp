// Command-line front end: dataset generation, hyperbolic embedding,
// curvature tables, model training, full experiments and topological
// analysis.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hierlab/analysis.hpp"
#include "hierlab/generate.hpp"
#include "hierlab/harness.hpp"

using namespace hierlab;

namespace {

Dataset load_dataset_dir(const std::string& dir) { return load_csv_dataset(dir); }

int cmd_generate(const std::string& model, int iterations, NodeId n, int m,
                 std::uint64_t seed, const std::string& out) {
  if (model == "hnm") {
    auto hnm = hnm_generate(4, iterations);
    write_csv_dataset(out, hnm.graph, &hnm.annotation.generation);
  } else if (model == "hnm3") {
    auto hnm = hnm_three_community(iterations);
    write_csv_dataset(out, hnm.graph, &hnm.annotation.generation);
  } else if (model == "ba") {
    write_csv_dataset(out, ba_generate(n, m, seed));
  } else {
    std::cerr << "unknown model " << model << "\n";
    return 1;
  }
  std::cout << "wrote dataset to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchy-aware node classification toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  std::string gen_model = "hnm";
  int gen_iterations = 5;
  NodeId gen_n = 2000;
  int gen_m = 2;
  std::uint64_t gen_seed = 7;
  std::string gen_out = "dataset";
  gen->add_option("--model", gen_model, "hnm|hnm3|ba")->required();
  gen->add_option("--iterations", gen_iterations, "fractal iterations (hnm)");
  gen->add_option("--n", gen_n, "node count (ba)");
  gen->add_option("--m", gen_m, "edges per new node (ba)");
  gen->add_option("--seed", gen_seed, "rng seed (ba)");
  gen->add_option("--out", gen_out, "output directory")->required();

  // make-fixture
  auto* fix = app.add_subcommand(
      "make-fixture", "write a bundled citation benchmark stand-in");
  std::string fix_name = "cora";
  std::string fix_out = "data/cora";
  bool fix_raw = false;
  fix->add_option("--name", fix_name, "cora|citeseer")->required();
  fix->add_option("--out", fix_out, "output directory")->required();
  fix->add_flag("--raw", fix_raw, "write .content/.cites instead of CSV");

  // embed
  auto* emb = app.add_subcommand("embed", "train a hyperbolic embedding");
  std::string emb_dataset, emb_out = "embedding.csv";
  EmbedOptions emb_opts;
  emb->add_option("--dataset", emb_dataset, "dataset directory")->required();
  emb->add_option("--dim", emb_opts.dim);
  emb->add_option("--epochs", emb_opts.epochs);
  emb->add_option("--lr", emb_opts.lr);
  emb->add_option("--neg", emb_opts.neg_samples);
  emb->add_option("--curvature", emb_opts.curvature);
  emb->add_option("--seed", emb_opts.seed);
  emb->add_option("--out", emb_out);

  // plot-disk
  auto* plot = app.add_subcommand("plot-disk", "SVG scatter of a 2-D embedding");
  std::string plot_embedding, plot_labels, plot_out = "disk.svg";
  plot->add_option("--embedding", plot_embedding)->required();
  plot->add_option("--labels", plot_labels, "labels.csv (optional)");
  plot->add_option("--out", plot_out);

  // curvature
  auto* curv = app.add_subcommand("curvature", "per-edge class-aware curvature");
  std::string curv_dataset, curv_out = "curvature.csv";
  CurvatureOptions curv_opts;
  int curv_per_class = 0;  // 0: use every label as training-visible
  std::uint64_t curv_seed = 1;
  curv->add_option("--dataset", curv_dataset)->required();
  curv->add_option("--alpha", curv_opts.alpha);
  curv->add_option("--p", curv_opts.p);
  curv->add_flag("--kappa-literal", curv_opts.kappa_literal,
                 "report W/d instead of 1 - W/d");
  curv->add_option("--per-class", curv_per_class,
                   "visible labels per class (0 = all labeled nodes)");
  curv->add_option("--seed", curv_seed, "split seed when --per-class is set");
  curv->add_option("--out", curv_out);

  // train
  auto* tr = app.add_subcommand("train", "train the classifier");
  std::string tr_dataset, tr_embedding, tr_curvature, tr_out = "report.json";
  std::string tr_ablate = "none", tr_margin_sign = "ldam", tr_split = "balanced";
  std::string tr_band = "top";
  TrainOptions tr_opts;
  int tr_per_class = 20, tr_val = -1, tr_test = -1;
  tr->add_option("--dataset", tr_dataset)->required();
  tr->add_option("--embedding", tr_embedding, "embedding.csv from `embed`");
  tr->add_option("--curvature", tr_curvature, "curvature.csv from `curvature`");
  tr->add_option("--alpha-margin", tr_opts.alpha_margin);
  tr->add_option("--margin-sign", tr_margin_sign, "ldam|literal");
  tr->add_option("--hidden", tr_opts.hidden);
  tr->add_option("--lr", tr_opts.lr);
  tr->add_option("--epochs", tr_opts.epochs);
  tr->add_option("--patience", tr_opts.patience);
  tr->add_option("--seed", tr_opts.seed);
  tr->add_option("--ablate", tr_ablate, "none|ham|hmpnn|both");
  tr->add_option("--split", tr_split, "balanced|hierarchy");
  tr->add_option("--band", tr_band, "top|middle|bottom|q1..q5");
  tr->add_option("--per-class", tr_per_class);
  tr->add_option("--val", tr_val);
  tr->add_option("--test", tr_test);
  tr->add_option("--out", tr_out);

  // run
  auto* run = app.add_subcommand("run", "full multi-seed experiment");
  std::string run_config;
  run->add_option("--config", run_config, "experiment config JSON")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "topological analysis CSVs");
  std::string ana_dataset, ana_out = "analysis";
  ana->add_option("--dataset", ana_dataset)->required();
  ana->add_option("--out", ana_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(gen_model, gen_iterations, gen_n, gen_m, gen_seed,
                          gen_out);

    if (fix->parsed()) {
      Dataset ds = make_citation_fixture(fix_name);
      if (fix_raw)
        write_citation_raw(fix_out, fix_name, ds);
      else
        write_csv_dataset(fix_out, ds.graph);
      std::cout << "wrote " << fix_name << " stand-in to " << fix_out << "\n";
      return 0;
    }

    if (emb->parsed()) {
      Dataset ds = load_dataset_dir(emb_dataset);
      auto embedding = embed_train(ds.graph, emb_opts);
      write_embedding_csv(emb_out, embedding);
      std::cout << "wrote " << emb_out << "\n";
      return 0;
    }

    if (plot->parsed()) {
      auto embedding = read_embedding_csv(plot_embedding);
      std::vector<std::int32_t> labels;
      if (!plot_labels.empty()) {
        std::ifstream in(plot_labels);
        std::string line;
        labels.assign(embedding.num_nodes(), -1);
        while (std::getline(in, line)) {
          auto comma = line.find(',');
          if (comma == std::string::npos) continue;
          try {
            int v = std::stoi(line.substr(0, comma));
            labels[v] = std::stoi(line.substr(comma + 1));
          } catch (...) {
            continue;  // header row
          }
        }
      }
      write_disk_svg(plot_out, embedding, labels);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }

    if (curv->parsed()) {
      Dataset ds = load_dataset_dir(curv_dataset);
      SplitMask mask;
      if (curv_per_class > 0) {
        BalancedSplitOptions opts;
        opts.per_class = curv_per_class;
        opts.val_count = 0;
        mask = make_balanced_split(ds.graph, opts, curv_seed);
      } else {
        for (NodeId v = 0; v < ds.graph.num_nodes(); ++v)
          if (ds.graph.label(v) >= 0) mask.train.push_back(v);
      }
      auto table = curvature_table(ds.graph, curv_opts, mask);
      write_curvature_csv(curv_out, ds.graph, table);
      std::cout << "wrote " << curv_out << "\n";
      return 0;
    }

    if (tr->parsed()) {
      Dataset ds = load_dataset_dir(tr_dataset);
      tr_opts.ablate = parse_ablation(tr_ablate);
      tr_opts.margin_sign = tr_margin_sign == "literal" ? MarginSign::Literal
                                                        : MarginSign::Ldam;

      std::optional<PoincareEmbedding> embedding;
      if (!tr_embedding.empty()) {
        embedding = read_embedding_csv(tr_embedding);
        embedding->refresh_norms();
      }
      std::optional<EdgeCurvatureTable> table;
      if (!tr_curvature.empty())
        table = read_curvature_csv(tr_curvature, ds.graph);

      BalancedSplitOptions sopts;
      sopts.per_class = tr_per_class;
      sopts.val_count = tr_val;
      sopts.test_count = tr_test;
      SplitMask mask;
      double topup = 0.0;
      if (tr_split == "hierarchy") {
        auto hs = make_hierarchy_split(
            ds.graph, BandSpec::parse(tr_band),
            ds.generation.empty() ? nullptr : &ds.generation,
            embedding ? &*embedding : nullptr, sopts, tr_opts.seed);
        mask = std::move(hs.mask);
        topup = hs.topup_fraction;
      } else {
        mask = make_balanced_split(ds.graph, sopts, tr_opts.seed);
      }

      auto result = train(ds.graph, embedding ? &*embedding : nullptr,
                          table ? &*table : nullptr, mask, tr_opts);
      nlohmann::json j = {{"test_weighted_f1", result.test_weighted_f1},
                          {"test_micro_f1", result.test_micro_f1},
                          {"test_accuracy", result.test_accuracy},
                          {"val_weighted_f1", result.val_weighted_f1},
                          {"best_epoch", result.best_epoch},
                          {"epochs_run", result.epochs.size()},
                          {"topup_fraction", topup},
                          {"ablate", tr_ablate},
                          {"seed", tr_opts.seed}};
      atomic_write(tr_out, j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (run->parsed()) {
      std::ifstream in(run_config);
      if (!in) {
        std::cerr << "cannot open " << run_config << "\n";
        return 1;
      }
      nlohmann::json j = nlohmann::json::parse(in);
      auto cfg = ExperimentConfig::from_json(j);
      auto report = run_experiment(cfg);
      std::cout << "weighted_f1 " << report.weighted_f1_mean << " +/- "
                << report.weighted_f1_std << "  micro_f1 "
                << report.micro_f1_mean << " +/- " << report.micro_f1_std
                << "\n";
      for (const auto& s : report.per_seed)
        if (!s.error.empty())
          std::cerr << "seed " << s.seed << " failed: " << s.error << "\n";
      return report.all_succeeded ? 0 : 1;
    }

    if (ana->parsed()) {
      Dataset ds = load_dataset_dir(ana_dataset);
      analyze(ds.graph, ana_out);
      std::cout << "wrote analysis to " << ana_out << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
