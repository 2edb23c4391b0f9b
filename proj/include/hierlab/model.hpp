#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "hierlab/curvature.hpp"
#include "hierlab/graph.hpp"
#include "hierlab/hyperbolic.hpp"

namespace hierlab {

inline constexpr int kMlpHidden = 16;

/// All learnable tensors: two graph-convolution layers, the margin perceptron
/// (scalar hierarchy norm -> per-class logit shift) and the curvature
/// perceptron (scalar curvature -> aggregation score).
struct ModelParams {
  int in_dim = 0, hidden = 0, classes = 0;

  std::vector<double> w1, b1;  // in_dim x hidden, hidden
  std::vector<double> w2, b2;  // hidden x classes, classes

  std::vector<double> ham_w1, ham_b1;  // kMlpHidden, kMlpHidden
  std::vector<double> ham_w2, ham_b2;  // kMlpHidden x classes, classes

  std::vector<double> curv_w1, curv_b1;  // kMlpHidden, kMlpHidden
  std::vector<double> curv_w2, curv_b2;  // kMlpHidden, 1

  static ModelParams zeros(int in_dim, int hidden, int classes);
  static ModelParams glorot(int in_dim, int hidden, int classes,
                            std::uint64_t seed);

  /// Visits every learnable scalar (fixed order); used by the optimizer and
  /// the finite-difference checks.
  void for_each(const std::function<void(double&)>& fn);
  std::size_t size() const;
};

/// Margin application convention: `Ldam` subtracts the margin from the true
/// class logit; `Literal` adds the whole margin vector to the logits.
enum class MarginSign { Ldam, Literal };

/// Softmax-normalized aggregation weights per directed edge, self-loop
/// included. Slot layout: for node i, slot offsets()[i] is the self-loop and
/// the following degree(i) slots follow the CSR neighbor order.
struct TauWeights {
  std::vector<std::int64_t> offsets;  // n + 1
  std::vector<double> tau;
  std::vector<double> score;        // curv_net outputs (pre-softmax)
  std::vector<double> mlp_hidden;   // tanh activations, kMlpHidden per slot
  std::vector<double> kappa_slot;   // curvature input per slot
  bool uniform = false;
};

/// Maps per-edge curvature through the curvature perceptron and softmax
/// normalizes over N(i) u {i} per node; kappa(i,i) = 0. With `uniform` the
/// perceptron is bypassed and every slot of a node gets 1/(deg+1).
TauWeights hmpnn_weights(const Graph& g, const EdgeCurvatureTable& table,
                         const ModelParams& params, bool uniform = false);

/// Per-labeled-node margin vectors: class-frequency prefactor times the
/// softmax of the margin perceptron applied to the node's hierarchy norm.
struct HamMargins {
  std::vector<NodeId> nodes;       // train nodes, sorted
  std::vector<double> input;       // |nodes| hierarchy norms
  std::vector<double> margin;      // |nodes| x classes
  std::vector<double> softmax;     // |nodes| x classes (cached for backward)
  std::vector<double> mlp_hidden;  // |nodes| x kMlpHidden
};

HamMargins ham_margin(const std::vector<double>& norms,
                      const std::vector<std::int32_t>& labels,
                      const SplitMask& mask, const ModelParams& params);

/// Activations retained for the backward pass.
struct ForwardTrace {
  std::vector<double> p;       // n x hidden: X W1
  std::vector<double> pre1;    // n x hidden: tau-aggregated + b1
  std::vector<double> h;       // n x hidden: ReLU(pre1)
  std::vector<double> q;       // n x classes: H W2
  std::vector<double> logits;  // n x classes: tau-aggregated + b2
};

ForwardTrace forward(const Graph& g, const SparseFeatures& x,
                     const ModelParams& params, const TauWeights& tau);

/// Mean margin-adjusted cross-entropy over the train nodes; stores the
/// adjusted softmax probabilities for backward.
struct LossTrace {
  double value = 0.0;
  std::vector<double> probs;  // |train| x classes
};

LossTrace loss(const ForwardTrace& fwd, const HamMargins& margins,
               const std::vector<std::int32_t>& labels, const SplitMask& mask,
               double alpha_margin, MarginSign sign, std::int32_t classes);

/// Exact reverse-mode gradients of `loss` w.r.t. every parameter (including
/// the margin and curvature perceptrons through tau).
ModelParams backward(const Graph& g, const SparseFeatures& x,
                     const ModelParams& params, const TauWeights& tau,
                     const ForwardTrace& fwd, const HamMargins& margins,
                     const LossTrace& lt, const std::vector<std::int32_t>& labels,
                     const SplitMask& mask, double alpha_margin, MarginSign sign);

/// Convenience wrapper: tau + forward + margins + loss for fixed inputs.
/// Used by the finite-difference oracle.
double full_loss(const Graph& g, const SparseFeatures& x, ModelParams& params,
                 const EdgeCurvatureTable& table, const std::vector<double>& norms,
                 const std::vector<std::int32_t>& labels, const SplitMask& mask,
                 double alpha_margin, MarginSign sign, bool uniform_tau);

enum class Ablation { None, Ham, Hmpnn, Both };

Ablation parse_ablation(const std::string& text);
std::string ablation_name(Ablation a);

struct TrainOptions {
  int hidden = 64;
  double lr = 0.2;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  int epochs = 500;
  int patience = 100;  // early stopping on validation weighted-F1
  double alpha_margin = 1.0;
  MarginSign margin_sign = MarginSign::Ldam;
  Ablation ablate = Ablation::None;
  std::uint64_t seed = 1;
  bool row_normalize_features = true;
  // The scalar perceptrons ride on the backbone's optimizer; these scales
  // let them move slower than the convolution weights.
  double curv_lr_scale = 0.1;
  double ham_lr_scale = 1.0;
  int grad_check_every = 0;  // >0: finite-difference check cadence (tests)
  double grad_check_tol = 1e-4;
};

struct EpochLog {
  double loss = 0.0;
  double val_weighted_f1 = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> epochs;
  int best_epoch = -1;
  double test_weighted_f1 = 0.0;
  double test_micro_f1 = 0.0;
  double test_accuracy = 0.0;
  double val_weighted_f1 = 0.0;
  std::vector<std::int32_t> predictions;
  bool grad_checks_passed = true;
  double max_grad_check_rel_err = 0.0;
};

/// Full training loop: margins and aggregation weights are recomputed every
/// epoch from the current perceptrons, the GCN is updated with momentum SGD,
/// and the best validation checkpoint is restored before test evaluation.
/// `embedding` may be null only if HAM is ablated; `table` only if HMPNN is.
TrainResult train(const Graph& g, const PoincareEmbedding* embedding,
                  const EdgeCurvatureTable* table, const SplitMask& mask,
                  const TrainOptions& opts);

}  // namespace hierlab
