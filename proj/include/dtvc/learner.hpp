#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtvc/sample.hpp"
#include "dtvc/tree_structure.hpp"

namespace dtvc {

inline constexpr std::size_t kNoChild = std::numeric_limits<std::size_t>::max();

struct TreeNode {
  // split rule, meaningful for internal nodes: x[feature] <= threshold goes left
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = kNoChild;
  std::size_t right = kNoChild;
  std::size_t label = 0;
  // training points reaching this node and their class counts
  std::vector<std::size_t> points;
  std::vector<std::size_t> histogram;

  bool is_leaf() const { return left == kNoChild; }
};

/// A concrete binary decision tree over real-valued features. Nodes are kept
/// in preorder with the root at index 0.
///
/// Text form extends the structure notation: a leaf is "L=<label>" and an
/// internal node is "(<feature>:<threshold> <left> <right>)", e.g.
/// "(0:1.5 L=1 L=2)".
class DecisionTree {
 public:
  /// Single leaf with the given label.
  DecisionTree(std::size_t features, std::size_t classes, std::size_t label = 0);

  /// Throws std::invalid_argument on malformed text. Feature and class
  /// counts are inferred as one past the largest index seen, or taken from
  /// the arguments when those are larger.
  static DecisionTree parse(std::string_view text, std::size_t features = 0, std::size_t classes = 0);
  std::string to_string() const;

  std::size_t features() const { return features_; }
  std::size_t classes() const { return classes_; }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }

  bool is_leaf() const { return nodes_.front().is_leaf(); }
  std::size_t leaf_count() const;
  std::size_t height() const;
  TreeStructure structure() const;

  /// Internal node ids in preorder.
  std::vector<std::size_t> internal_nodes() const;
  std::size_t subtree_leaf_count(std::size_t id) const;

  /// Structure of this tree with node `id` replaced by a leaf.
  TreeStructure structure_with_leaf_at(std::size_t id) const;

  /// Copy with node `id` replaced by a leaf labelled with the majority class
  /// of its training histogram (ties go to the smallest class index).
  DecisionTree with_leaf_at(std::size_t id) const;

  /// Label of the leaf reached by x. Throws std::invalid_argument if x does
  /// not have features() entries.
  std::size_t predict(std::span<const double> x) const;

  /// Routes every point of `s` and rebuilds per-node point sets and class
  /// histograms. Leaf labels are left as they are.
  void annotate(const Sample& s);

  /// Errors on the annotated training points.
  std::size_t training_errors() const;
  /// Errors within the subtree rooted at `id`, and errors if it were a
  /// majority leaf instead.
  std::size_t subtree_errors(std::size_t id) const;
  std::size_t errors_as_leaf(std::size_t id) const;

  friend bool operator==(const DecisionTree& a, const DecisionTree& b) { return a.to_string() == b.to_string(); }

 private:
  friend DecisionTree fit(const Sample& s, std::size_t max_leaves);

  std::size_t features_;
  std::size_t classes_;
  std::vector<TreeNode> nodes_;
};

/// Majority class of a histogram, ties to the smallest index.
std::size_t majority_class(std::span<const std::size_t> histogram);

/// Best-first greedy growth with the Gini criterion: repeatedly split the leaf
/// whose best threshold gives the largest weighted impurity decrease, until
/// the training set is fit, `max_leaves` is reached or no split helps.
/// Throws std::invalid_argument for an empty sample or max_leaves = 0.
DecisionTree fit(const Sample& s, std::size_t max_leaves);

std::size_t predict(const DecisionTree& t, std::span<const double> x);

std::size_t count_errors(const DecisionTree& t, const Sample& s);

double accuracy(const DecisionTree& t, const Sample& s);

}  // namespace dtvc
