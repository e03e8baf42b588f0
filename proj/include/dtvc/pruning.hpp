#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dtvc/learner.hpp"
#include "dtvc/risk_bound.hpp"
#include "dtvc/sample.hpp"

namespace dtvc {

struct PruneResult {
  DecisionTree tree;
  std::optional<double> bound_value;  // bound pruner only
  std::optional<double> chosen_alpha;  // CART variants only
  std::size_t leaves_before = 0;
  std::size_t leaves_after = 0;
  double wall_time = 0.0;
  // epsilon of the input and of every accepted tree, bound pruner only
  std::vector<double> bound_trace;
};

/// Greedy pruning against the risk bound: repeatedly replace by a majority
/// leaf the internal node (preorder, later ties win) whose removal gives the
/// smallest epsilon, as long as that does not exceed the current epsilon.
/// Class count in the growth bound is max(2, s.classes()).
PruneResult prune_with_bound(const DecisionTree& t, const Sample& s, const BoundConfig& cfg, PartitionTable& table);

struct WeakestLinkStep {
  double alpha;
  DecisionTree tree;
};

/// Complexity charged to a tree with `leaves` leaves.
using Penalty = std::function<double(std::size_t leaves)>;

/// Cost-complexity sequence. Each step collapses every internal node
/// minimising g = (R(leaf) - R(subtree)) / (pen(leaves of subtree) - pen(1)),
/// with R the error count over s.size(). A node with a nonpositive
/// denominator has g = +inf. Alphas are nondecreasing; the last tree is a
/// single leaf; a leaf input gives an empty sequence.
std::vector<WeakestLinkStep> weakest_link_sequence(const DecisionTree& t, const Sample& s, const Penalty& pen);
/// Standard penalty pen(L) = L.
std::vector<WeakestLinkStep> weakest_link_sequence(const DecisionTree& t, const Sample& s);

/// Tree of the sequence that minimises cost-complexity at `alpha`.
const DecisionTree& tree_for_alpha(const DecisionTree& full, const std::vector<WeakestLinkStep>& seq, double alpha);

/// (d/m) ln(m/d) with d = L ln(L * features); 0 once d >= m (and for d = 0).
double mcart_penalty(std::size_t leaves, std::size_t m, std::size_t features);

/// Cost-complexity pruning with alpha picked by `folds`-fold cross-validation.
/// Fold trees are regrown with fit(., max_leaves). Throws
/// std::invalid_argument if folds < 2 or s has fewer points than folds.
PruneResult prune_cart(const DecisionTree& t, const Sample& s, std::size_t folds = 10, std::uint64_t seed = 0,
                       std::size_t max_leaves = 40);

/// As prune_cart, with mcart_penalty in place of the leaf count.
PruneResult prune_mcart(const DecisionTree& t, const Sample& s, std::size_t features, std::size_t folds = 10,
                        std::uint64_t seed = 0, std::size_t max_leaves = 40);

}  // namespace dtvc
