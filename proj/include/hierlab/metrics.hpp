#pragma once

#include "hierlab/graph.hpp"

namespace hierlab {

/// conf[t][p] = count of mask nodes with truth t predicted p.
std::vector<std::vector<std::int64_t>> confusion_matrix(
    const std::vector<std::int32_t>& pred, const std::vector<std::int32_t>& truth,
    const std::vector<NodeId>& mask, std::int32_t num_classes);

/// Per-class F1 averaged with class-support weights.
double weighted_f1(const std::vector<std::int32_t>& pred,
                   const std::vector<std::int32_t>& truth,
                   const std::vector<NodeId>& mask, std::int32_t num_classes);

/// F1 from globally pooled counts; equals accuracy for single-label
/// multi-class predictions.
double micro_f1(const std::vector<std::int32_t>& pred,
                const std::vector<std::int32_t>& truth,
                const std::vector<NodeId>& mask, std::int32_t num_classes);

double accuracy(const std::vector<std::int32_t>& pred,
                const std::vector<std::int32_t>& truth,
                const std::vector<NodeId>& mask);

}  // namespace hierlab
