#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hierlab/curvature.hpp"
#include "hierlab/fixtures.hpp"
#include "hierlab/model.hpp"
#include "hierlab/split.hpp"

#include "json.hpp"

namespace hierlab {

/// Declarative description of one experiment: dataset, split protocol, the
/// three stage configurations and the seeds to aggregate over.
struct ExperimentConfig {
  struct DatasetSpec {
    std::string kind = "benchmark";  // benchmark|csv|hnm|hnm3|ba
    std::string name = "cora";       // benchmark name
    std::string path;                // csv directory
    int iterations = 5;              // hnm/hnm3
    int module_size = 4;
    NodeId n = 2000;                 // ba
    int m = 2;
    std::uint64_t gen_seed = 7;
  } dataset;

  struct SplitSpec {
    std::string type = "balanced";  // balanced|hierarchy
    int per_class = 20;
    int val = -1;
    int test = -1;
    std::string band = "top";  // hierarchy splits only
  } split;

  EmbedOptions embedding;
  CurvatureOptions curvature;

  struct ModelSpec {
    int hidden = 64;
    double lr = 0.2;
    double momentum = 0.9;
    double weight_decay = 5e-4;
    int epochs = 500;
    int patience = 100;
    double alpha_margin = 1.0;
    std::string margin_sign = "ldam";
    std::string ablate = "none";
    double curv_lr_scale = 0.1;
    double ham_lr_scale = 1.0;
  } model;

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string out_dir;
  std::string data_root = "data";

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SeedReport {
  std::uint64_t seed = 0;
  double weighted_f1 = 0.0;
  double micro_f1 = 0.0;
  double accuracy = 0.0;
  int best_epoch = -1;
  double topup_fraction = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> losses;
  std::string error;  // empty on success
};

struct RunReport {
  nlohmann::json config;
  std::vector<SeedReport> per_seed;
  double weighted_f1_mean = 0.0, weighted_f1_std = 0.0;
  double micro_f1_mean = 0.0, micro_f1_std = 0.0;
  double accuracy_mean = 0.0;
  double wall_seconds = 0.0;
  bool all_succeeded = true;

  static RunReport from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  bool operator==(const RunReport& other) const {
    return to_json() == other.to_json();
  }
};

Dataset load_experiment_dataset(const ExperimentConfig& cfg);

/// Full pipeline per seed (split -> embed -> curvature -> train); a failing
/// seed is recorded and the remaining seeds still run. Reports are written
/// atomically when out_dir is set.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Topological analysis CSVs: clustering by degree, neighbor correlations,
/// degree histogram, homophily (labels permitting) and a summary JSON.
void analyze(const Graph& g, const std::filesystem::path& out_dir);

/// 2-D Poincare-disk scatter (SVG).
void write_disk_svg(const std::filesystem::path& path,
                    const PoincareEmbedding& emb,
                    const std::vector<std::int32_t>& labels);

}  // namespace hierlab
