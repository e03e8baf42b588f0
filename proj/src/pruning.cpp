#include "dtvc/pruning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dtvc/data_io.hpp"

namespace dtvc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

using PenaltyFor = std::function<Penalty(std::size_t m)>;

PruneResult cross_validated(const DecisionTree& t, const Sample& s, std::size_t folds, std::uint64_t seed,
                            std::size_t max_leaves, const PenaltyFor& penalty_for) {
  const auto start = std::chrono::steady_clock::now();
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (s.size() < folds) throw std::invalid_argument("fewer points than folds");

  const auto full_seq = weakest_link_sequence(t, s, penalty_for(s.size()));
  std::vector<double> grid{0.0};
  for (std::size_t i = 0; i + 1 < full_seq.size(); ++i) {
    grid.push_back(std::sqrt(full_seq[i].alpha * full_seq[i + 1].alpha));
  }
  grid.push_back(kInf);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto perm = seeded_permutation(s.size(), seed);
  std::vector<double> accuracy_sum(grid.size(), 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < perm.size(); ++i) (i % folds == f ? test_idx : train_idx).push_back(perm[i]);
    const Sample train = s.subset(train_idx);
    const Sample test = s.subset(test_idx);
    const DecisionTree grown = fit(train, max_leaves);
    const auto seq = weakest_link_sequence(grown, train, penalty_for(train.size()));
    for (std::size_t g = 0; g < grid.size(); ++g) accuracy_sum[g] += accuracy(tree_for_alpha(grown, seq, grid[g]), test);
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (accuracy_sum[g] >= accuracy_sum[best]) best = g;  // ties go to the larger alpha
  }

  PruneResult out{tree_for_alpha(t, full_seq, grid[best]), std::nullopt, grid[best], t.leaf_count(), 0, 0.0, {}};
  out.leaves_after = out.tree.leaf_count();
  out.wall_time = seconds_since(start);
  return out;
}

}  // namespace

PruneResult prune_with_bound(const DecisionTree& t, const Sample& s, const BoundConfig& cfg, PartitionTable& table) {
  const auto start = std::chrono::steady_clock::now();
  DecisionTree tree = t;
  tree.annotate(s);
  const std::size_t m = s.size();
  const std::size_t classes = std::max<std::size_t>(2, s.classes());
  const std::size_t features = s.features();

  std::size_t errors = tree.training_errors();
  double current = epsilon(m, errors, tree.structure(), classes, features, cfg, table);
  std::vector<double> trace{current};
  while (!tree.is_leaf()) {
    std::size_t best = kNoChild;
    std::size_t best_errors = 0;
    double b = kInf;
    for (std::size_t id : tree.internal_nodes()) {
      const std::size_t k = errors - tree.subtree_errors(id) + tree.errors_as_leaf(id);
      const double e = epsilon(m, k, tree.structure_with_leaf_at(id), classes, features, cfg, table);
      if (e <= b) {
        b = e;
        best = id;
        best_errors = k;
      }
    }
    if (!(b <= current)) break;
    tree = tree.with_leaf_at(best);
    errors = best_errors;
    current = b;
    trace.push_back(current);
  }

  PruneResult out{tree, current, std::nullopt, t.leaf_count(), tree.leaf_count(), 0.0, std::move(trace)};
  out.wall_time = seconds_since(start);
  return out;
}

std::vector<WeakestLinkStep> weakest_link_sequence(const DecisionTree& t, const Sample& s, const Penalty& pen) {
  std::vector<WeakestLinkStep> seq;
  DecisionTree tree = t;
  tree.annotate(s);
  const double m = static_cast<double>(std::max<std::size_t>(s.size(), 1));
  const double pen_leaf = pen(1);
  double alpha = 0.0;
  while (!tree.is_leaf()) {
    const auto internal = tree.internal_nodes();
    std::vector<double> g(internal.size());
    for (std::size_t i = 0; i < internal.size(); ++i) {
      const std::size_t id = internal[i];
      const double gain = static_cast<double>(tree.errors_as_leaf(id) - tree.subtree_errors(id)) / m;
      const double denominator = pen(tree.subtree_leaf_count(id)) - pen_leaf;
      g[i] = denominator > 0.0 ? gain / denominator : kInf;
    }
    const double g_min = *std::min_element(g.begin(), g.end());
    // collapse every minimiser, deepest preorder ids first so earlier ids stay valid
    for (std::size_t i = internal.size(); i-- > 0;) {
      if (g[i] == g_min) tree = tree.with_leaf_at(internal[i]);
    }
    alpha = std::max(alpha, g_min);
    seq.push_back({alpha, tree});
  }
  return seq;
}

std::vector<WeakestLinkStep> weakest_link_sequence(const DecisionTree& t, const Sample& s) {
  return weakest_link_sequence(t, s, [](std::size_t leaves) { return static_cast<double>(leaves); });
}

const DecisionTree& tree_for_alpha(const DecisionTree& full, const std::vector<WeakestLinkStep>& seq, double alpha) {
  const DecisionTree* chosen = &full;
  for (const auto& step : seq) {
    if (step.alpha > alpha) break;
    chosen = &step.tree;
  }
  return *chosen;
}

double mcart_penalty(std::size_t leaves, std::size_t m, std::size_t features) {
  const double l = static_cast<double>(leaves);
  const double d = l * std::log(l * static_cast<double>(features));
  const double md = static_cast<double>(m);
  if (!(d > 0.0) || d >= md) return 0.0;
  return d / md * std::log(md / d);
}

PruneResult prune_cart(const DecisionTree& t, const Sample& s, std::size_t folds, std::uint64_t seed,
                       std::size_t max_leaves) {
  return cross_validated(t, s, folds, seed, max_leaves, [](std::size_t) -> Penalty {
    return [](std::size_t leaves) { return static_cast<double>(leaves); };
  });
}

PruneResult prune_mcart(const DecisionTree& t, const Sample& s, std::size_t features, std::size_t folds,
                        std::uint64_t seed, std::size_t max_leaves) {
  return cross_validated(t, s, folds, seed, max_leaves, [features](std::size_t m) -> Penalty {
    return [m, features](std::size_t leaves) { return mcart_penalty(leaves, m, features); };
  });
}

}  // namespace dtvc
