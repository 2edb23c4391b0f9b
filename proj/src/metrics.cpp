#include "hierlab/metrics.hpp"

#include <stdexcept>

namespace hierlab {

std::vector<std::vector<std::int64_t>> confusion_matrix(
    const std::vector<std::int32_t>& pred, const std::vector<std::int32_t>& truth,
    const std::vector<NodeId>& mask, std::int32_t num_classes) {
  if (mask.empty()) throw std::invalid_argument("metrics: empty mask");
  std::vector<std::vector<std::int64_t>> conf(
      num_classes, std::vector<std::int64_t>(num_classes, 0));
  for (NodeId v : mask) {
    std::int32_t t = truth[v], p = pred[v];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
      throw std::invalid_argument("metrics: class id out of range");
    ++conf[t][p];
  }
  return conf;
}

double weighted_f1(const std::vector<std::int32_t>& pred,
                   const std::vector<std::int32_t>& truth,
                   const std::vector<NodeId>& mask, std::int32_t num_classes) {
  auto conf = confusion_matrix(pred, truth, mask, num_classes);
  double f1_sum = 0.0;
  std::int64_t support_total = 0;
  for (std::int32_t c = 0; c < num_classes; ++c) {
    std::int64_t tp = conf[c][c], fp = 0, fn = 0, support = 0;
    for (std::int32_t k = 0; k < num_classes; ++k) {
      if (k != c) {
        fp += conf[k][c];
        fn += conf[c][k];
      }
      support += conf[c][k];
    }
    double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
    double f1 = precision + recall == 0.0
                    ? 0.0
                    : 2.0 * precision * recall / (precision + recall);
    f1_sum += f1 * static_cast<double>(support);
    support_total += support;
  }
  return f1_sum / static_cast<double>(support_total);
}

double micro_f1(const std::vector<std::int32_t>& pred,
                const std::vector<std::int32_t>& truth,
                const std::vector<NodeId>& mask, std::int32_t num_classes) {
  auto conf = confusion_matrix(pred, truth, mask, num_classes);
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::int32_t t = 0; t < num_classes; ++t)
    for (std::int32_t p = 0; p < num_classes; ++p) {
      if (t == p)
        tp += conf[t][p];
      else {
        fn += conf[t][p];
        fp += conf[t][p];
      }
    }
  double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
  double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
  return precision + recall == 0.0 ? 0.0
                                   : 2.0 * precision * recall / (precision + recall);
}

double accuracy(const std::vector<std::int32_t>& pred,
                const std::vector<std::int32_t>& truth,
                const std::vector<NodeId>& mask) {
  if (mask.empty()) throw std::invalid_argument("metrics: empty mask");
  std::int64_t hit = 0;
  for (NodeId v : mask)
    if (pred[v] == truth[v]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(mask.size());
}

}  // namespace hierlab
