#include "hierlab/fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace hierlab {

namespace {

struct FixtureSpec {
  NodeId n;
  std::int64_t edges;
  std::int32_t classes;
  std::vector<NodeId> class_sizes;
  double homophily;
  std::int64_t vocab;
  double word_noise;     // chance a word is drawn from the whole vocabulary
  double confused_frac;  // nodes writing in another class's vocabulary region
  double word_overlap;   // topic spread relative to the class window width
  double triadic;        // share of same-class extra edges that close triangles
  double backbone_frac;  // share of nodes wired into the class backbone trees
  int fragment_size;     // nodes per backbone tree (classes split into many)
  std::uint64_t seed;
};

FixtureSpec spec_for(const std::string& name) {
  if (name == "cora")
    return {2708, 5429, 7, {351, 217, 418, 818, 426, 298, 180},
            0.83, 1433, 0.65, 0.18, 1.15, 0.55, 1.00, 30, 0x5eedc0aaULL};
  if (name == "citeseer")
    return {3327, 4732, 6, {596, 668, 701, 264, 508, 590},
            0.72, 3703, 0.45, 0.16, 0.85, 0.55, 0.72, 35, 0x5eedc17eULL};
  throw std::invalid_argument("fixture: unknown benchmark " + name);
}

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

Dataset make_citation_fixture(const std::string& name) {
  FixtureSpec spec = spec_for(name);
  if (std::accumulate(spec.class_sizes.begin(), spec.class_sizes.end(), NodeId{0}) !=
      spec.n)
    throw std::logic_error("fixture: class sizes do not sum to n");
  std::mt19937_64 rng(spec.seed);

  // Class assignment over shuffled node ids.
  std::vector<std::int32_t> labels(spec.n);
  {
    std::vector<NodeId> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    size_t at = 0;
    for (std::int32_t c = 0; c < spec.classes; ++c)
      for (NodeId i = 0; i < spec.class_sizes[c]; ++i) labels[order[at++]] = c;
  }
  std::vector<std::vector<NodeId>> members(spec.classes);
  for (NodeId v = 0; v < spec.n; ++v) members[labels[v]].push_back(v);

  std::int64_t same_quota = std::llround(spec.homophily * spec.edges);
  std::int64_t cross_quota = spec.edges - same_quota;

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(spec.edges);
  std::unordered_set<std::uint64_t> seen;
  std::vector<NodeId> global_bag;
  std::vector<std::vector<NodeId>> class_bag(spec.classes);
  std::vector<std::vector<NodeId>> adj(spec.n);
  std::uniform_real_distribution<double> unit(0, 1);

  auto add_edge = [&](NodeId u, NodeId v) {
    edges.emplace_back(u, v);
    seen.insert(pair_key(u, v));
    adj[u].push_back(v);
    adj[v].push_back(u);
    for (NodeId w : {u, v}) {
      global_bag.push_back(w);
      class_bag[labels[w]].push_back(w);
    }
  };

  // Intra-class backbone: one attachment tree per class. Even classes grow
  // hub-and-spoke (preferential targets), odd classes grow deep chains, so
  // classes end up living at visibly different hierarchy depths.
  std::int64_t same_used = 0;
  for (std::int32_t c = 0; c < spec.classes; ++c) {
    auto pool = members[c];
    std::shuffle(pool.begin(), pool.end(), rng);
    // Nodes past the backbone share start out isolated, as in the sparser
    // real citation graphs; later phases may or may not reach them.
    pool.resize(std::max<size_t>(
        2, static_cast<size_t>(spec.backbone_frac * pool.size())));
    bool chainy = c % 2 == 1;
    // Classes fragment into many separate trees, like real citation topics.
    for (size_t lo = 0; lo < pool.size();) {
      size_t span = spec.fragment_size / 2 +
                    static_cast<size_t>(rng() % spec.fragment_size);
      size_t hi = std::min(pool.size(), lo + std::max<size_t>(2, span));
      if (pool.size() - hi == 1) hi = pool.size();
      std::vector<NodeId> wired{pool[lo]};
      for (size_t i = lo + 1; i < hi; ++i) {
        NodeId target;
        if (chainy && unit(rng) < 0.60) {
          target = pool[i - 1];  // extend the chain
        } else if (unit(rng) < (chainy ? 0.50 : 0.15)) {
          std::uniform_int_distribution<size_t> pick(0, wired.size() - 1);
          target = wired[pick(rng)];
        } else {
          // Degree-proportional among this fragment's wired nodes.
          std::uniform_int_distribution<size_t> pick(0, wired.size() - 1);
          NodeId cand = wired[pick(rng)];
          if (!adj[cand].empty()) {
            std::uniform_int_distribution<size_t> hop(0, adj[cand].size() - 1);
            NodeId via = adj[cand][hop(rng)];
            if (labels[via] == c) cand = via;
          }
          target = cand;
        }
        if (target == pool[i] || seen.count(pair_key(pool[i], target))) {
          --i;  // extremely rare; retry
          continue;
        }
        add_edge(pool[i], target);
        wired.push_back(pool[i]);
        ++same_used;
      }
      lo = hi;
    }
  }
  if (same_used > same_quota)
    throw std::logic_error("fixture: homophily target below spanning backbone");

  // Remaining same-class edges: mostly triadic closures (dense local
  // clusters), the rest preferential pairs inside a size-weighted class.
  std::discrete_distribution<std::int32_t> class_pick(
      spec.class_sizes.begin(), spec.class_sizes.end());
  long stale = 0;
  while (same_used < same_quota) {
    std::int32_t c = class_pick(rng);
    auto& bag = class_bag[c];
    std::uniform_int_distribution<size_t> pick(0, bag.size() - 1);
    NodeId u = bag[pick(rng)];
    NodeId v = -1;
    if (unit(rng) < spec.triadic && ++stale < 100 * spec.edges) {
      // Friend-of-a-friend within the class.
      const auto& nu = adj[u];
      NodeId w = nu[static_cast<size_t>(rng() % nu.size())];
      const auto& nw = adj[w];
      NodeId x = nw[static_cast<size_t>(rng() % nw.size())];
      if (x != u && labels[x] == c) v = x;
    } else {
      v = bag[pick(rng)];
    }
    if (v < 0 || u == v || seen.count(pair_key(u, v))) continue;
    add_edge(u, v);
    ++same_used;
  }

  // Cross-class edges, degree-preferential on both sides; hubs end up doing
  // most of the bridging.
  std::int64_t cross_used = 0;
  while (cross_used < cross_quota) {
    std::uniform_int_distribution<size_t> pick(0, global_bag.size() - 1);
    NodeId u = global_bag[pick(rng)];
    NodeId v = global_bag[pick(rng)];
    if (labels[u] == labels[v] || seen.count(pair_key(u, v))) continue;
    add_edge(u, v);
    ++cross_used;
  }

  // Sparse bag-of-words features: each class writes around its own region of
  // the vocabulary with overlapping spread, so adjacent classes are genuinely
  // confusable; a noise share of words comes from the whole vocabulary.
  double window = static_cast<double>(spec.vocab) / spec.classes;
  std::vector<std::int32_t> topic_of(spec.n);
  for (NodeId v = 0; v < spec.n; ++v) {
    topic_of[v] = labels[v];
    if (unit(rng) < spec.confused_frac) {
      std::uniform_int_distribution<std::int32_t> other(0, spec.classes - 1);
      topic_of[v] = other(rng);
    }
  }
  SparseFeatures feats;
  feats.rows = spec.n;
  feats.cols = spec.vocab;
  feats.offsets.assign(spec.n + 1, 0);
  std::uniform_int_distribution<int> word_count(8, 28);
  std::uniform_int_distribution<std::int64_t> any_word(0, spec.vocab - 1);
  std::normal_distribution<double> spread(0.0, spec.word_overlap * window / 2.0);
  std::vector<std::int64_t> words;
  for (NodeId v = 0; v < spec.n; ++v) {
    int w = word_count(rng);
    double center = (topic_of[v] + 0.5) * window;
    words.clear();
    while (static_cast<int>(words.size()) < w) {
      std::int64_t word;
      if (unit(rng) < spec.word_noise) {
        word = any_word(rng);
      } else {
        double raw = center + spread(rng);
        word = static_cast<std::int64_t>(std::llround(raw));
        word %= spec.vocab;
        if (word < 0) word += spec.vocab;
      }
      if (std::find(words.begin(), words.end(), word) == words.end())
        words.push_back(word);
    }
    std::sort(words.begin(), words.end());
    for (auto word : words) {
      feats.col.push_back(static_cast<std::int32_t>(word));
      feats.val.push_back(1.0);
    }
    feats.offsets[v + 1] = static_cast<std::int64_t>(feats.col.size());
  }

  Dataset ds;
  ds.graph = Graph(spec.n, std::move(edges), std::move(labels), std::move(feats),
                   spec.classes);
  if (ds.graph.num_edges() != spec.edges)
    throw std::logic_error("fixture: lost edges to deduplication");
  for (std::int32_t c = 0; c < spec.classes; ++c)
    ds.label_names.push_back("topic_" + std::to_string(c));
  return ds;
}

void write_citation_raw(const std::filesystem::path& dir, const std::string& name,
                        const Dataset& ds) {
  const Graph& g = ds.graph;
  if (!g.has_features() || !g.has_labels())
    throw std::invalid_argument("write_citation_raw: needs features and labels");
  std::filesystem::create_directories(dir);

  std::ostringstream content;
  const auto& f = g.features();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    content << "paper" << v;
    std::int64_t k = f.offsets[v];
    for (std::int64_t j = 0; j < f.cols; ++j) {
      int bit = 0;
      if (k < f.offsets[v + 1] && f.col[k] == j) {
        bit = f.val[k] != 0.0 ? 1 : 0;
        ++k;
      }
      content << '\t' << bit;
    }
    const std::string& label = ds.label_names.empty()
                                   ? std::to_string(g.label(v))
                                   : ds.label_names[g.label(v)];
    content << '\t' << label << '\n';
  }
  atomic_write(dir / (name + ".content"), content.str());

  std::ostringstream cites;
  for (const auto& [u, v] : g.edges())
    cites << "paper" << u << '\t' << "paper" << v << '\n';
  atomic_write(dir / (name + ".cites"), cites.str());
}

Dataset load_benchmark(const std::string& name,
                       const std::filesystem::path& data_root) {
  namespace fs = std::filesystem;
  fs::path raw = data_root / name / (name + ".content");
  fs::path raw_cites = data_root / name / (name + ".cites");
  if (fs::exists(raw) && fs::exists(raw_cites))
    return load_citation(raw, raw_cites);
  if (fs::exists(data_root / name / "edges.csv"))
    return load_csv_dataset(data_root / name);
  return make_citation_fixture(name);
}

}  // namespace hierlab
