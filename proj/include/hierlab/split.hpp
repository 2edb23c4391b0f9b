#pragma once

#include <cstdint>
#include <string>

#include "hierlab/graph.hpp"
#include "hierlab/hyperbolic.hpp"

namespace hierlab {

struct BalancedSplitOptions {
  int per_class = 20;
  int val_count = -1;   // -1: floor(0.1 * n)
  int test_count = -1;  // -1: everything that remains
};

/// Seeded class-balanced split: exactly per_class train nodes per class, then
/// val and test drawn from the rest. Throws if a class is too small.
SplitMask make_balanced_split(const Graph& g, const BalancedSplitOptions& opts,
                              std::uint64_t seed);

/// Where hierarchy-band members come from: generation tags of a synthetic
/// hierarchy ("top"/"middle"/"bottom") or Poincare-norm quintiles ("q1".."q5",
/// q1 = smallest norms, i.e. most central nodes).
struct BandSpec {
  enum class Kind { Generation, NormQuantile };
  Kind kind = Kind::NormQuantile;
  int level = 0;  // 0=top,1=middle,2=bottom  or quintile 1..5

  static BandSpec parse(const std::string& text);
  std::string to_string() const;
};

struct HierarchySplitResult {
  SplitMask mask;
  double topup_fraction = 0.0;  // share of train nodes drawn outside the band
};

/// Train nodes drawn per class from the requested band, topped up uniformly
/// from outside the band to reach the per-class quota. Val/test follow the
/// balanced-split convention.
HierarchySplitResult make_hierarchy_split(const Graph& g, const BandSpec& band,
                                          const std::vector<int>* generations,
                                          const PoincareEmbedding* embedding,
                                          const BalancedSplitOptions& opts,
                                          std::uint64_t seed);

}  // namespace hierlab
