#include "hierlab/split.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hierlab/generate.hpp"

namespace hierlab {

namespace {

// Fills val/test from the nodes not yet taken, honoring the count options.
void fill_val_test(const Graph& g, const std::vector<char>& taken,
                   const BalancedSplitOptions& opts, std::mt19937_64& rng,
                   SplitMask& mask) {
  std::vector<NodeId> rest;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (!taken[v] && g.label(v) >= 0) rest.push_back(v);
  std::shuffle(rest.begin(), rest.end(), rng);

  size_t val_count = opts.val_count >= 0
                         ? static_cast<size_t>(opts.val_count)
                         : static_cast<size_t>(g.num_nodes() / 10);
  if (val_count > rest.size())
    throw std::invalid_argument("split: not enough nodes for validation set");
  mask.val.assign(rest.begin(), rest.begin() + val_count);

  size_t test_count = opts.test_count >= 0
                          ? static_cast<size_t>(opts.test_count)
                          : rest.size() - val_count;
  if (val_count + test_count > rest.size())
    throw std::invalid_argument("split: not enough nodes for test set");
  mask.test.assign(rest.begin() + val_count, rest.begin() + val_count + test_count);

  std::sort(mask.train.begin(), mask.train.end());
  std::sort(mask.val.begin(), mask.val.end());
  std::sort(mask.test.begin(), mask.test.end());
  mask.validate(g.num_nodes());
}

std::vector<std::vector<NodeId>> nodes_by_class(const Graph& g) {
  if (!g.has_labels()) throw std::invalid_argument("split: graph has no labels");
  std::vector<std::vector<NodeId>> by_class(g.num_classes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.label(v) >= 0) by_class[g.label(v)].push_back(v);
  return by_class;
}

}  // namespace

SplitMask make_balanced_split(const Graph& g, const BalancedSplitOptions& opts,
                              std::uint64_t seed) {
  if (opts.per_class < 1) throw std::invalid_argument("split: per_class < 1");
  std::mt19937_64 rng(seed);
  auto by_class = nodes_by_class(g);

  SplitMask mask;
  std::vector<char> taken(g.num_nodes(), 0);
  for (auto& pool : by_class) {
    if (static_cast<int>(pool.size()) < opts.per_class + 1)
      throw std::invalid_argument("split: class too small for per_class quota");
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < opts.per_class; ++i) {
      mask.train.push_back(pool[i]);
      taken[pool[i]] = 1;
    }
  }
  fill_val_test(g, taken, opts, rng, mask);
  return mask;
}

BandSpec BandSpec::parse(const std::string& text) {
  BandSpec b;
  if (text == "top") {
    b.kind = Kind::Generation;
    b.level = 0;
  } else if (text == "middle") {
    b.kind = Kind::Generation;
    b.level = 1;
  } else if (text == "bottom") {
    b.kind = Kind::Generation;
    b.level = 2;
  } else if (text.size() == 2 && text[0] == 'q' && text[1] >= '1' && text[1] <= '5') {
    b.kind = Kind::NormQuantile;
    b.level = text[1] - '0';
  } else {
    throw std::invalid_argument("band: expected top|middle|bottom|q1..q5");
  }
  return b;
}

std::string BandSpec::to_string() const {
  if (kind == Kind::Generation)
    return level == 0 ? "top" : level == 1 ? "middle" : "bottom";
  return "q" + std::to_string(level);
}

HierarchySplitResult make_hierarchy_split(const Graph& g, const BandSpec& band,
                                          const std::vector<int>* generations,
                                          const PoincareEmbedding* embedding,
                                          const BalancedSplitOptions& opts,
                                          std::uint64_t seed) {
  if (opts.per_class < 1) throw std::invalid_argument("split: per_class < 1");
  std::mt19937_64 rng(seed);

  // Band membership per node.
  std::vector<char> in_band(g.num_nodes(), 0);
  if (band.kind == BandSpec::Kind::Generation) {
    if (!generations || static_cast<NodeId>(generations->size()) != g.num_nodes())
      throw std::invalid_argument("split: generation band needs annotations");
    int iterations = *std::max_element(generations->begin(), generations->end());
    auto want = band.level == 0   ? HierarchyLevel::Top
                : band.level == 1 ? HierarchyLevel::Middle
                                  : HierarchyLevel::Bottom;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      in_band[v] = hnm_level((*generations)[v], iterations) == want;
  } else {
    if (!embedding || embedding->num_nodes() != g.num_nodes())
      throw std::invalid_argument("split: quantile band needs an embedding");
    std::vector<NodeId> order(g.num_nodes());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return embedding->norms[a] < embedding->norms[b];
    });
    size_t lo = (band.level - 1) * order.size() / 5;
    size_t hi = band.level * order.size() / 5;
    for (size_t i = lo; i < hi; ++i) in_band[order[i]] = 1;
  }

  auto by_class = nodes_by_class(g);
  SplitMask mask;
  std::vector<char> taken(g.num_nodes(), 0);
  std::int64_t from_band = 0, total_train = 0;
  for (auto& pool : by_class) {
    std::vector<NodeId> banded, outside;
    for (NodeId v : pool) (in_band[v] ? banded : outside).push_back(v);
    if (banded.empty() && opts.per_class > 0 && outside.empty())
      throw std::invalid_argument("split: empty class pool");
    std::shuffle(banded.begin(), banded.end(), rng);
    std::shuffle(outside.begin(), outside.end(), rng);
    if (static_cast<int>(banded.size() + outside.size()) < opts.per_class + 1)
      throw std::invalid_argument("split: class too small for per_class quota");
    for (int i = 0; i < opts.per_class; ++i) {
      NodeId v;
      if (i < static_cast<int>(banded.size())) {
        v = banded[i];
        ++from_band;
      } else {
        v = outside[i - banded.size()];
      }
      mask.train.push_back(v);
      taken[v] = 1;
      ++total_train;
    }
  }
  if (total_train == 0) throw std::invalid_argument("split: empty band");

  HierarchySplitResult out;
  out.topup_fraction =
      1.0 - static_cast<double>(from_band) / static_cast<double>(total_train);
  out.mask = std::move(mask);
  fill_val_test(g, taken, opts, rng, out.mask);
  return out;
}

}  // namespace hierlab
