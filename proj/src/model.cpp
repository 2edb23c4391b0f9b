#include "hierlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hierlab/metrics.hpp"

namespace hierlab {

namespace {

void fill_glorot(std::vector<double>& w, int fan_in, int fan_out,
                 std::mt19937_64& rng) {
  double s = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-s, s);
  for (auto& x : w) x = dist(rng);
}

}  // namespace

ModelParams ModelParams::zeros(int in_dim, int hidden, int classes) {
  ModelParams p;
  p.in_dim = in_dim;
  p.hidden = hidden;
  p.classes = classes;
  p.w1.assign(static_cast<size_t>(in_dim) * hidden, 0.0);
  p.b1.assign(hidden, 0.0);
  p.w2.assign(static_cast<size_t>(hidden) * classes, 0.0);
  p.b2.assign(classes, 0.0);
  p.ham_w1.assign(kMlpHidden, 0.0);
  p.ham_b1.assign(kMlpHidden, 0.0);
  p.ham_w2.assign(static_cast<size_t>(kMlpHidden) * classes, 0.0);
  p.ham_b2.assign(classes, 0.0);
  p.curv_w1.assign(kMlpHidden, 0.0);
  p.curv_b1.assign(kMlpHidden, 0.0);
  p.curv_w2.assign(kMlpHidden, 0.0);
  p.curv_b2.assign(1, 0.0);
  return p;
}

ModelParams ModelParams::glorot(int in_dim, int hidden, int classes,
                                std::uint64_t seed) {
  ModelParams p = zeros(in_dim, hidden, classes);
  std::mt19937_64 rng(seed);
  fill_glorot(p.w1, in_dim, hidden, rng);
  fill_glorot(p.w2, hidden, classes, rng);
  fill_glorot(p.ham_w1, 1, kMlpHidden, rng);
  fill_glorot(p.ham_w2, kMlpHidden, classes, rng);
  fill_glorot(p.curv_w1, 1, kMlpHidden, rng);
  fill_glorot(p.curv_w2, kMlpHidden, 1, rng);
  // Keep the initial aggregation weights near uniform and the initial margins
  // near flat; both perceptrons then move away from the plain-GCN wiring only
  // as the data demands.
  for (auto* vec : {&p.ham_w1, &p.ham_w2, &p.curv_w1, &p.curv_w2})
    for (auto& w : *vec) w *= 0.1;
  return p;
}

void ModelParams::for_each(const std::function<void(double&)>& fn) {
  for (auto* vec : {&w1, &b1, &w2, &b2, &ham_w1, &ham_b1, &ham_w2, &ham_b2,
                    &curv_w1, &curv_b1, &curv_w2, &curv_b2})
    for (auto& x : *vec) fn(x);
}

std::size_t ModelParams::size() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + ham_w1.size() +
         ham_b1.size() + ham_w2.size() + ham_b2.size() + curv_w1.size() +
         curv_b1.size() + curv_w2.size() + curv_b2.size();
}

TauWeights hmpnn_weights(const Graph& g, const EdgeCurvatureTable& table,
                         const ModelParams& params, bool uniform) {
  NodeId n = g.num_nodes();
  TauWeights t;
  t.uniform = uniform;
  t.offsets.resize(n + 1);
  for (NodeId i = 0; i <= n; ++i) t.offsets[i] = g.adj_offsets()[i] + i;
  size_t slots = static_cast<size_t>(t.offsets[n]);
  t.tau.resize(slots);

  if (uniform) {
    for (NodeId i = 0; i < n; ++i) {
      double w = 1.0 / static_cast<double>(g.degree(i) + 1);
      for (std::int64_t s = t.offsets[i]; s < t.offsets[i + 1]; ++s) t.tau[s] = w;
    }
    return t;
  }

  if (table.kappa.size() != static_cast<size_t>(g.num_edges()))
    throw std::invalid_argument("hmpnn_weights: curvature table mismatch");
  auto kappa_slots = table.per_slot(g);

  t.score.resize(slots);
  t.mlp_hidden.resize(slots * kMlpHidden);
  t.kappa_slot.resize(slots);
  for (NodeId i = 0; i < n; ++i) {
    std::int64_t base = t.offsets[i];
    std::int64_t deg = g.degree(i);
    // Slot 0 is the self-loop (kappa 0), then CSR neighbor order.
    for (std::int64_t s = 0; s <= deg; ++s) {
      double k = s == 0 ? 0.0 : kappa_slots[g.adj_offsets()[i] + s - 1];
      t.kappa_slot[base + s] = k;
      double* hid = t.mlp_hidden.data() + (base + s) * kMlpHidden;
      double out = params.curv_b2[0];
      for (int j = 0; j < kMlpHidden; ++j) {
        hid[j] = std::tanh(params.curv_w1[j] * k + params.curv_b1[j]);
        out += params.curv_w2[j] * hid[j];
      }
      t.score[base + s] = out;
    }
    double mx = t.score[base];
    for (std::int64_t s = 1; s <= deg; ++s) mx = std::max(mx, t.score[base + s]);
    double z = 0.0;
    for (std::int64_t s = 0; s <= deg; ++s) {
      t.tau[base + s] = std::exp(t.score[base + s] - mx);
      z += t.tau[base + s];
    }
    for (std::int64_t s = 0; s <= deg; ++s) t.tau[base + s] /= z;
  }
  return t;
}

HamMargins ham_margin(const std::vector<double>& norms,
                      const std::vector<std::int32_t>& labels,
                      const SplitMask& mask, const ModelParams& params) {
  int C = params.classes;
  HamMargins m;
  m.nodes = mask.train;
  m.input.resize(m.nodes.size());
  m.margin.resize(m.nodes.size() * C);
  m.softmax.resize(m.nodes.size() * C);
  m.mlp_hidden.resize(m.nodes.size() * kMlpHidden);

  std::vector<std::int64_t> class_count(C, 0);
  for (NodeId v : m.nodes) {
    if (labels[v] < 0) throw std::invalid_argument("ham_margin: unlabeled train node");
    ++class_count[labels[v]];
  }
  double total = static_cast<double>(m.nodes.size());

  std::vector<double> logits(C);
  for (size_t idx = 0; idx < m.nodes.size(); ++idx) {
    NodeId v = m.nodes[idx];
    if (v >= static_cast<NodeId>(norms.size()))
      throw std::invalid_argument("ham_margin: missing norm for labeled node");
    double x = norms[v];
    m.input[idx] = x;
    double* hid = m.mlp_hidden.data() + idx * kMlpHidden;
    for (int j = 0; j < kMlpHidden; ++j)
      hid[j] = std::tanh(params.ham_w1[j] * x + params.ham_b1[j]);
    for (int c = 0; c < C; ++c) {
      double out = params.ham_b2[c];
      for (int j = 0; j < kMlpHidden; ++j)
        out += params.ham_w2[static_cast<size_t>(j) * C + c] * hid[j];
      logits[c] = out;
    }
    double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (int c = 0; c < C; ++c) z += std::exp(logits[c] - mx);
    double freq = static_cast<double>(class_count[labels[v]]) / total;
    for (int c = 0; c < C; ++c) {
      double sm = std::exp(logits[c] - mx) / z;
      m.softmax[idx * C + c] = sm;
      m.margin[idx * C + c] = freq * sm;
    }
  }
  return m;
}

namespace {

// A1[i] = sum_{s in slots(i)} tau_s * src[slot_node(s)], slot 0 = self.
void aggregate(const Graph& g, const TauWeights& tau,
               const std::vector<double>& src, int width,
               std::vector<double>& dst) {
  NodeId n = g.num_nodes();
  dst.assign(static_cast<size_t>(n) * width, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    double* out = dst.data() + static_cast<size_t>(i) * width;
    std::int64_t base = tau.offsets[i];
    auto nb = g.neighbors(i);
    {
      double w = tau.tau[base];
      const double* in = src.data() + static_cast<size_t>(i) * width;
      for (int k = 0; k < width; ++k) out[k] += w * in[k];
    }
    for (size_t s = 0; s < nb.size(); ++s) {
      double w = tau.tau[base + 1 + s];
      const double* in = src.data() + static_cast<size_t>(nb[s]) * width;
      for (int k = 0; k < width; ++k) out[k] += w * in[k];
    }
  }
}

// Transpose pass: dsrc[j] += sum_i tau_ij ddst[i]; also dtau per slot.
void aggregate_backward(const Graph& g, const TauWeights& tau,
                        const std::vector<double>& src, int width,
                        const std::vector<double>& ddst,
                        std::vector<double>& dsrc, std::vector<double>* dtau) {
  NodeId n = g.num_nodes();
  if (dsrc.size() != src.size()) dsrc.assign(src.size(), 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const double* gout = ddst.data() + static_cast<size_t>(i) * width;
    std::int64_t base = tau.offsets[i];
    auto nb = g.neighbors(i);
    auto handle = [&](std::int64_t slot, NodeId j) {
      double w = tau.tau[slot];
      double* gin = dsrc.data() + static_cast<size_t>(j) * width;
      const double* in = src.data() + static_cast<size_t>(j) * width;
      double dot = 0.0;
      for (int k = 0; k < width; ++k) {
        gin[k] += w * gout[k];
        dot += in[k] * gout[k];
      }
      if (dtau) (*dtau)[slot] += dot;
    };
    handle(base, i);
    for (size_t s = 0; s < nb.size(); ++s) handle(base + 1 + s, nb[s]);
  }
}

void sparse_matmul(const SparseFeatures& x, const std::vector<double>& w,
                   int width, std::vector<double>& out) {
  out.assign(static_cast<size_t>(x.rows) * width, 0.0);
  for (std::int64_t i = 0; i < x.rows; ++i) {
    double* row = out.data() + static_cast<size_t>(i) * width;
    for (std::int64_t k = x.offsets[i]; k < x.offsets[i + 1]; ++k) {
      double v = x.val[k];
      const double* wrow = w.data() + static_cast<size_t>(x.col[k]) * width;
      for (int c = 0; c < width; ++c) row[c] += v * wrow[c];
    }
  }
}

}  // namespace

ForwardTrace forward(const Graph& g, const SparseFeatures& x,
                     const ModelParams& params, const TauWeights& tau) {
  if (x.cols != params.in_dim) throw std::invalid_argument("forward: dim mismatch");
  NodeId n = g.num_nodes();
  int H = params.hidden, C = params.classes;
  ForwardTrace tr;

  sparse_matmul(x, params.w1, H, tr.p);
  aggregate(g, tau, tr.p, H, tr.pre1);
  tr.h.resize(tr.pre1.size());
  for (NodeId i = 0; i < n; ++i)
    for (int k = 0; k < H; ++k) {
      size_t at = static_cast<size_t>(i) * H + k;
      tr.pre1[at] += params.b1[k];
      tr.h[at] = tr.pre1[at] > 0.0 ? tr.pre1[at] : 0.0;
    }

  tr.q.assign(static_cast<size_t>(n) * C, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const double* hrow = tr.h.data() + static_cast<size_t>(i) * H;
    double* qrow = tr.q.data() + static_cast<size_t>(i) * C;
    for (int k = 0; k < H; ++k) {
      double hv = hrow[k];
      if (hv == 0.0) continue;
      const double* wrow = params.w2.data() + static_cast<size_t>(k) * C;
      for (int c = 0; c < C; ++c) qrow[c] += hv * wrow[c];
    }
  }
  aggregate(g, tau, tr.q, C, tr.logits);
  for (NodeId i = 0; i < n; ++i)
    for (int c = 0; c < C; ++c) tr.logits[static_cast<size_t>(i) * C + c] += params.b2[c];
  return tr;
}

LossTrace loss(const ForwardTrace& fwd, const HamMargins& margins,
               const std::vector<std::int32_t>& labels, const SplitMask& mask,
               double alpha_margin, MarginSign sign, std::int32_t classes) {
  if (mask.train.empty()) throw std::invalid_argument("loss: empty train mask");
  int C = classes;
  LossTrace lt;
  lt.probs.resize(mask.train.size() * C);
  std::vector<double> z(C);
  double total = 0.0;
  for (size_t idx = 0; idx < mask.train.size(); ++idx) {
    NodeId v = mask.train[idx];
    std::int32_t y = labels[v];
    for (int c = 0; c < C; ++c) z[c] = fwd.logits[static_cast<size_t>(v) * C + c];
    if (alpha_margin != 0.0 && !margins.margin.empty()) {
      const double* m = margins.margin.data() + idx * C;
      if (sign == MarginSign::Ldam)
        z[y] -= alpha_margin * m[y];
      else
        for (int c = 0; c < C; ++c) z[c] += alpha_margin * m[c];
    }
    double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (int c = 0; c < C; ++c) sum += std::exp(z[c] - mx);
    double lse = mx + std::log(sum);
    total += lse - z[y];
    for (int c = 0; c < C; ++c) lt.probs[idx * C + c] = std::exp(z[c] - lse);
  }
  lt.value = total / static_cast<double>(mask.train.size());
  return lt;
}

ModelParams backward(const Graph& g, const SparseFeatures& x,
                     const ModelParams& params, const TauWeights& tau,
                     const ForwardTrace& fwd, const HamMargins& margins,
                     const LossTrace& lt, const std::vector<std::int32_t>& labels,
                     const SplitMask& mask, double alpha_margin, MarginSign sign) {
  NodeId n = g.num_nodes();
  int H = params.hidden, C = params.classes;
  ModelParams grad = ModelParams::zeros(params.in_dim, H, C);
  double inv_t = 1.0 / static_cast<double>(mask.train.size());

  // d loss / d adjusted-logits, then split into logits and margin paths.
  std::vector<double> dlogits(static_cast<size_t>(n) * C, 0.0);
  std::vector<double> dmargin(margins.margin.size(), 0.0);
  for (size_t idx = 0; idx < mask.train.size(); ++idx) {
    NodeId v = mask.train[idx];
    std::int32_t y = labels[v];
    for (int c = 0; c < C; ++c) {
      double dz = (lt.probs[idx * C + c] - (c == y ? 1.0 : 0.0)) * inv_t;
      dlogits[static_cast<size_t>(v) * C + c] += dz;
      if (alpha_margin != 0.0 && !margins.margin.empty()) {
        if (sign == MarginSign::Ldam) {
          if (c == y) dmargin[idx * C + y] -= alpha_margin * dz;
        } else {
          dmargin[idx * C + c] += alpha_margin * dz;
        }
      }
    }
  }

  // Margin perceptron path. margin = freq * softmax(gvec), gvec = MLP(norm).
  if (alpha_margin != 0.0 && !margins.margin.empty()) {
    std::vector<std::int64_t> class_count(C, 0);
    for (NodeId v : margins.nodes) ++class_count[labels[v]];
    double total = static_cast<double>(margins.nodes.size());
    std::vector<double> dg(C);
    for (size_t idx = 0; idx < margins.nodes.size(); ++idx) {
      NodeId v = margins.nodes[idx];
      double freq = static_cast<double>(class_count[labels[v]]) / total;
      const double* sm = margins.softmax.data() + idx * C;
      double inner = 0.0;
      for (int c = 0; c < C; ++c) inner += dmargin[idx * C + c] * freq * sm[c];
      for (int c = 0; c < C; ++c)
        dg[c] = freq * sm[c] * dmargin[idx * C + c] - sm[c] * inner;

      const double* hid = margins.mlp_hidden.data() + idx * kMlpHidden;
      for (int c = 0; c < C; ++c) {
        grad.ham_b2[c] += dg[c];
        for (int j = 0; j < kMlpHidden; ++j)
          grad.ham_w2[static_cast<size_t>(j) * C + c] += dg[c] * hid[j];
      }
      for (int j = 0; j < kMlpHidden; ++j) {
        double dh_j = 0.0;
        for (int c = 0; c < C; ++c)
          dh_j += dg[c] * params.ham_w2[static_cast<size_t>(j) * C + c];
        double dpre = dh_j * (1.0 - hid[j] * hid[j]);
        grad.ham_b1[j] += dpre;
        grad.ham_w1[j] += dpre * margins.input[idx];
      }
    }
  }

  // b2 and second aggregation.
  for (NodeId i = 0; i < n; ++i)
    for (int c = 0; c < C; ++c) grad.b2[c] += dlogits[static_cast<size_t>(i) * C + c];
  std::vector<double> dq(static_cast<size_t>(n) * C, 0.0);
  std::vector<double> dtau(tau.tau.size(), 0.0);
  aggregate_backward(g, tau, fwd.q, C, dlogits, dq, tau.uniform ? nullptr : &dtau);

  // W2 and dH.
  std::vector<double> dh(static_cast<size_t>(n) * H, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const double* hrow = fwd.h.data() + static_cast<size_t>(i) * H;
    const double* dqrow = dq.data() + static_cast<size_t>(i) * C;
    double* dhrow = dh.data() + static_cast<size_t>(i) * H;
    for (int k = 0; k < H; ++k) {
      const double* wrow = params.w2.data() + static_cast<size_t>(k) * C;
      double acc = 0.0;
      for (int c = 0; c < C; ++c) {
        grad.w2[static_cast<size_t>(k) * C + c] += hrow[k] * dqrow[c];
        acc += wrow[c] * dqrow[c];
      }
      dhrow[k] = acc;
    }
  }

  // ReLU, b1, first aggregation.
  std::vector<double> dpre1(static_cast<size_t>(n) * H);
  for (size_t at = 0; at < dpre1.size(); ++at)
    dpre1[at] = fwd.pre1[at] > 0.0 ? dh[at] : 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (int k = 0; k < H; ++k) grad.b1[k] += dpre1[static_cast<size_t>(i) * H + k];
  std::vector<double> dp(static_cast<size_t>(n) * H, 0.0);
  aggregate_backward(g, tau, fwd.p, H, dpre1, dp, tau.uniform ? nullptr : &dtau);

  // W1 via sparse features.
  for (std::int64_t i = 0; i < x.rows; ++i) {
    const double* dprow = dp.data() + static_cast<size_t>(i) * H;
    for (std::int64_t k = x.offsets[i]; k < x.offsets[i + 1]; ++k) {
      double v = x.val[k];
      double* wrow = grad.w1.data() + static_cast<size_t>(x.col[k]) * H;
      for (int c = 0; c < H; ++c) wrow[c] += v * dprow[c];
    }
  }

  // Curvature perceptron through the softmax rows.
  if (!tau.uniform) {
    for (NodeId i = 0; i < n; ++i) {
      std::int64_t base = tau.offsets[i];
      std::int64_t cnt = tau.offsets[i + 1] - base;
      double inner = 0.0;
      for (std::int64_t s = 0; s < cnt; ++s)
        inner += dtau[base + s] * tau.tau[base + s];
      for (std::int64_t s = 0; s < cnt; ++s) {
        double ds = tau.tau[base + s] * (dtau[base + s] - inner);
        if (ds == 0.0) continue;
        const double* hid = tau.mlp_hidden.data() + (base + s) * kMlpHidden;
        double k_in = tau.kappa_slot[base + s];
        grad.curv_b2[0] += ds;
        for (int j = 0; j < kMlpHidden; ++j) {
          grad.curv_w2[j] += ds * hid[j];
          double dpre = ds * params.curv_w2[j] * (1.0 - hid[j] * hid[j]);
          grad.curv_b1[j] += dpre;
          grad.curv_w1[j] += dpre * k_in;
        }
      }
    }
  }
  return grad;
}

double full_loss(const Graph& g, const SparseFeatures& x, ModelParams& params,
                 const EdgeCurvatureTable& table, const std::vector<double>& norms,
                 const std::vector<std::int32_t>& labels, const SplitMask& mask,
                 double alpha_margin, MarginSign sign, bool uniform_tau) {
  auto tau = hmpnn_weights(g, table, params, uniform_tau);
  auto fwd = forward(g, x, params, tau);
  HamMargins margins;
  if (alpha_margin != 0.0) margins = ham_margin(norms, labels, mask, params);
  return loss(fwd, margins, labels, mask, alpha_margin, sign, params.classes).value;
}

Ablation parse_ablation(const std::string& text) {
  if (text == "none") return Ablation::None;
  if (text == "ham") return Ablation::Ham;
  if (text == "hmpnn") return Ablation::Hmpnn;
  if (text == "both") return Ablation::Both;
  throw std::invalid_argument("ablate: expected none|ham|hmpnn|both");
}

std::string ablation_name(Ablation a) {
  switch (a) {
    case Ablation::None: return "none";
    case Ablation::Ham: return "ham";
    case Ablation::Hmpnn: return "hmpnn";
    default: return "both";
  }
}

namespace {

std::vector<std::int32_t> argmax_rows(const std::vector<double>& logits, NodeId n,
                                      int C) {
  std::vector<std::int32_t> pred(n);
  for (NodeId i = 0; i < n; ++i) {
    const double* row = logits.data() + static_cast<size_t>(i) * C;
    pred[i] = static_cast<std::int32_t>(
        std::max_element(row, row + C) - row);
  }
  return pred;
}

// Central finite differences over every parameter against the analytic
// gradient; returns the max relative error. Coordinates whose perturbation
// flips a ReLU activation are skipped: the loss has a kink there and the
// central difference is not a derivative estimate.
double fd_check(const Graph& g, const SparseFeatures& x, ModelParams& params,
                const EdgeCurvatureTable& table, const std::vector<double>& norms,
                const std::vector<std::int32_t>& labels, const SplitMask& mask,
                double alpha_margin, MarginSign sign, bool uniform_tau,
                ModelParams analytic) {
  const double eps = 1e-5;
  std::vector<double*> slots;
  params.for_each([&](double& v) { slots.push_back(&v); });
  std::vector<double*> grads;
  analytic.for_each([&](double& v) { grads.push_back(&v); });

  auto eval = [&](std::vector<char>& relu_pattern) {
    auto tau = hmpnn_weights(g, table, params, uniform_tau);
    auto fwd = forward(g, x, params, tau);
    relu_pattern.resize(fwd.pre1.size());
    for (size_t k = 0; k < fwd.pre1.size(); ++k)
      relu_pattern[k] = fwd.pre1[k] > 0.0;
    HamMargins margins;
    if (alpha_margin != 0.0) margins = ham_margin(norms, labels, mask, params);
    return loss(fwd, margins, labels, mask, alpha_margin, sign, params.classes)
        .value;
  };

  double worst = 0.0;
  std::vector<char> pat_up, pat_down;
  for (size_t i = 0; i < slots.size(); ++i) {
    double saved = *slots[i];
    *slots[i] = saved + eps;
    double up = eval(pat_up);
    *slots[i] = saved - eps;
    double down = eval(pat_down);
    *slots[i] = saved;
    if (pat_up != pat_down) continue;
    double fd = (up - down) / (2.0 * eps);
    double denom = std::max({std::abs(fd), std::abs(*grads[i]), 1e-6});
    worst = std::max(worst, std::abs(fd - *grads[i]) / denom);
  }
  return worst;
}

}  // namespace

TrainResult train(const Graph& g, const PoincareEmbedding* embedding,
                  const EdgeCurvatureTable* table, const SplitMask& mask,
                  const TrainOptions& opts) {
  bool use_ham = opts.ablate != Ablation::Ham && opts.ablate != Ablation::Both &&
                 opts.alpha_margin != 0.0;
  bool use_hmpnn =
      opts.ablate != Ablation::Hmpnn && opts.ablate != Ablation::Both;
  if (use_ham && (!embedding || embedding->num_nodes() != g.num_nodes()))
    throw std::invalid_argument("train: margin path needs a matching embedding");
  if (use_hmpnn &&
      (!table || table->kappa.size() != static_cast<size_t>(g.num_edges())))
    throw std::invalid_argument("train: hmpnn path needs a matching table");
  if (mask.train.empty()) throw std::invalid_argument("train: empty train mask");

  SparseFeatures x = g.has_features() ? g.features()
                                      : SparseFeatures::identity(g.num_nodes());
  if (opts.row_normalize_features) x.row_normalize();

  int C = g.num_classes();
  ModelParams params =
      ModelParams::glorot(static_cast<int>(x.cols), opts.hidden, C, opts.seed);
  ModelParams velocity = ModelParams::zeros(params.in_dim, params.hidden, C);
  EdgeCurvatureTable empty_table;
  if (!use_hmpnn) empty_table.kappa.assign(g.num_edges(), 0.0);
  const EdgeCurvatureTable& tbl = use_hmpnn ? *table : empty_table;
  std::vector<double> norms =
      use_ham ? embedding->norms : std::vector<double>(g.num_nodes(), 0.0);
  double alpha = use_ham ? opts.alpha_margin : 0.0;
  const auto& labels = g.labels();

  TrainResult result;
  result.params = params;
  double best_val = -1.0;
  int since_best = 0;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    auto tau = hmpnn_weights(g, tbl, params, !use_hmpnn);
    auto fwd = forward(g, x, params, tau);
    HamMargins margins;
    if (alpha != 0.0) margins = ham_margin(norms, labels, mask, params);
    auto lt = loss(fwd, margins, labels, mask, alpha, opts.margin_sign, C);
    auto grad = backward(g, x, params, tau, fwd, margins, lt, labels, mask,
                         alpha, opts.margin_sign);

    if (opts.grad_check_every > 0 && epoch % opts.grad_check_every == 0) {
      double err = fd_check(g, x, params, tbl, norms, labels, mask, alpha,
                            opts.margin_sign, !use_hmpnn, grad);
      result.max_grad_check_rel_err =
          std::max(result.max_grad_check_rel_err, err);
      if (err > opts.grad_check_tol) result.grad_checks_passed = false;
    }

    // Validation metrics on the pre-update forward pass.
    EpochLog log;
    log.loss = lt.value;
    auto pred = argmax_rows(fwd.logits, g.num_nodes(), C);
    if (!mask.val.empty())
      log.val_weighted_f1 = weighted_f1(pred, labels, mask.val, C);
    result.epochs.push_back(log);

    if (log.val_weighted_f1 > best_val + 1e-12 || mask.val.empty()) {
      best_val = log.val_weighted_f1;
      result.params = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= opts.patience) {
      break;
    }

    // Momentum SGD with L2 weight decay; the scalar perceptrons may use a
    // scaled-down rate.
    {
      auto update = [&](std::vector<double>& p, std::vector<double>& gr,
                        std::vector<double>& vel, double scale) {
        for (size_t i = 0; i < p.size(); ++i) {
          double step = gr[i] + opts.weight_decay * p[i];
          vel[i] = opts.momentum * vel[i] - opts.lr * scale * step;
          p[i] += vel[i];
        }
      };
      update(params.w1, grad.w1, velocity.w1, 1.0);
      update(params.b1, grad.b1, velocity.b1, 1.0);
      update(params.w2, grad.w2, velocity.w2, 1.0);
      update(params.b2, grad.b2, velocity.b2, 1.0);
      update(params.ham_w1, grad.ham_w1, velocity.ham_w1, opts.ham_lr_scale);
      update(params.ham_b1, grad.ham_b1, velocity.ham_b1, opts.ham_lr_scale);
      update(params.ham_w2, grad.ham_w2, velocity.ham_w2, opts.ham_lr_scale);
      update(params.ham_b2, grad.ham_b2, velocity.ham_b2, opts.ham_lr_scale);
      update(params.curv_w1, grad.curv_w1, velocity.curv_w1, opts.curv_lr_scale);
      update(params.curv_b1, grad.curv_b1, velocity.curv_b1, opts.curv_lr_scale);
      update(params.curv_w2, grad.curv_w2, velocity.curv_w2, opts.curv_lr_scale);
      update(params.curv_b2, grad.curv_b2, velocity.curv_b2, opts.curv_lr_scale);
    }
  }

  // Test metrics from the best checkpoint.
  auto tau = hmpnn_weights(g, tbl, result.params, !use_hmpnn);
  auto fwd = forward(g, x, result.params, tau);
  result.predictions = argmax_rows(fwd.logits, g.num_nodes(), C);
  result.val_weighted_f1 = best_val;
  if (!mask.test.empty()) {
    result.test_weighted_f1 = weighted_f1(result.predictions, labels, mask.test, C);
    result.test_micro_f1 = micro_f1(result.predictions, labels, mask.test, C);
    result.test_accuracy = accuracy(result.predictions, labels, mask.test);
  }
  return result;
}

}  // namespace hierlab
