#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dtvc {

/// Unlabeled binary tree shape: the hypothesis class of all decision trees
/// sharing this structure. Immutable and cheap to copy (shared nodes).
///
/// Text form: a leaf is "L" and an internal node is "(" left right ")", so a
/// stump is "(LL)".
class TreeStructure {
 public:
  /// A single leaf.
  TreeStructure();

  static TreeStructure leaf() { return TreeStructure(); }
  static TreeStructure node(TreeStructure left, TreeStructure right);

  /// Parses the text form. Throws std::invalid_argument on malformed input.
  static TreeStructure parse(std::string_view text);

  bool is_leaf() const { return rep_->is_leaf; }
  const TreeStructure& left() const;
  const TreeStructure& right() const;

  std::size_t leaf_count() const { return rep_->leaves; }
  std::size_t node_count() const { return rep_->leaves - 1; }
  std::size_t height() const { return rep_->height; }

  /// Text form of this exact (possibly non-canonical) orientation.
  const std::string& to_string() const { return rep_->text; }

  /// Ordered (orientation-sensitive) equality.
  friend bool operator==(const TreeStructure& a, const TreeStructure& b);

 private:
  struct Rep {
    bool is_leaf = true;
    std::size_t leaves = 1;
    std::size_t height = 0;
    std::string text = "L";
    std::shared_ptr<const TreeStructure> left;
    std::shared_ptr<const TreeStructure> right;
  };
  explicit TreeStructure(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

/// Total order used for canonicalisation: leaf count first, then left
/// children, then right children (recursively).
std::strong_ordering compare_structures(const TreeStructure& a, const TreeStructure& b);

/// Representative of the mirror-equivalence class: at every node the smaller
/// child (per compare_structures) is placed on the left. Idempotent.
TreeStructure canonical_form(const TreeStructure& t);

bool is_canonical(const TreeStructure& t);

/// True iff a and b are equal up to swapping children at any nodes.
bool structurally_equal(const TreeStructure& a, const TreeStructure& b);

/// All canonical shapes with exactly `leaves` leaves, ordered by ascending
/// height and then compare_structures. Throws std::invalid_argument for 0.
std::vector<TreeStructure> enumerate(std::size_t leaves);

/// Canonical shapes of height at most `max_height`, ordered by leaf count
/// and then as enumerate() does.
std::vector<TreeStructure> enumerate_by_height(std::size_t max_height);

/// Complete binary tree of the given depth (depth 0 is a leaf).
TreeStructure complete_tree(std::size_t depth);

/// Left-leaning chain with the given number of internal nodes.
TreeStructure chain_tree(std::size_t internal_nodes);

}  // namespace dtvc
