#include "dtvc/tree_structure.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dtvc {

TreeStructure::TreeStructure() {
  static const auto leaf_rep = std::make_shared<const Rep>();
  rep_ = leaf_rep;
}

TreeStructure TreeStructure::node(TreeStructure left, TreeStructure right) {
  auto rep = std::make_shared<Rep>();
  rep->is_leaf = false;
  rep->leaves = left.leaf_count() + right.leaf_count();
  rep->height = 1 + std::max(left.height(), right.height());
  rep->text = "(" + left.to_string() + right.to_string() + ")";
  rep->left = std::make_shared<const TreeStructure>(std::move(left));
  rep->right = std::make_shared<const TreeStructure>(std::move(right));
  return TreeStructure(std::move(rep));
}

const TreeStructure& TreeStructure::left() const {
  if (is_leaf()) throw std::logic_error("TreeStructure::left called on a leaf");
  return *rep_->left;
}

const TreeStructure& TreeStructure::right() const {
  if (is_leaf()) throw std::logic_error("TreeStructure::right called on a leaf");
  return *rep_->right;
}

bool operator==(const TreeStructure& a, const TreeStructure& b) {
  return a.rep_ == b.rep_ || a.rep_->text == b.rep_->text;
}

namespace {

TreeStructure parse_at(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) throw std::invalid_argument("tree structure: unexpected end of input");
  if (text[pos] == 'L') {
    ++pos;
    return TreeStructure::leaf();
  }
  if (text[pos] != '(') {
    throw std::invalid_argument("tree structure: unexpected character '" + std::string(1, text[pos]) +
                                "' at offset " + std::to_string(pos));
  }
  ++pos;
  TreeStructure left = parse_at(text, pos);
  TreeStructure right = parse_at(text, pos);
  if (pos >= text.size() || text[pos] != ')') {
    throw std::invalid_argument("tree structure: expected ')' at offset " + std::to_string(pos));
  }
  ++pos;
  return TreeStructure::node(std::move(left), std::move(right));
}

}  // namespace

TreeStructure TreeStructure::parse(std::string_view text) {
  std::size_t pos = 0;
  TreeStructure out = parse_at(text, pos);
  if (pos != text.size()) {
    throw std::invalid_argument("tree structure: trailing characters at offset " + std::to_string(pos));
  }
  return out;
}

std::strong_ordering compare_structures(const TreeStructure& a, const TreeStructure& b) {
  if (auto cmp = a.leaf_count() <=> b.leaf_count(); cmp != 0) return cmp;
  if (a.is_leaf()) return std::strong_ordering::equal;  // both single leaves
  if (auto cmp = compare_structures(a.left(), b.left()); cmp != 0) return cmp;
  return compare_structures(a.right(), b.right());
}

TreeStructure canonical_form(const TreeStructure& t) {
  if (t.is_leaf()) return t;
  TreeStructure l = canonical_form(t.left());
  TreeStructure r = canonical_form(t.right());
  if (compare_structures(r, l) < 0) std::swap(l, r);
  return TreeStructure::node(std::move(l), std::move(r));
}

bool is_canonical(const TreeStructure& t) {
  if (t.is_leaf()) return true;
  return compare_structures(t.left(), t.right()) <= 0 && is_canonical(t.left()) && is_canonical(t.right());
}

bool structurally_equal(const TreeStructure& a, const TreeStructure& b) {
  if (a.leaf_count() != b.leaf_count()) return false;
  return canonical_form(a) == canonical_form(b);
}

namespace {

// All canonical shapes per leaf count, each list sorted by compare_structures.
const std::vector<TreeStructure>& shapes_with_leaves(std::size_t leaves,
                                                     std::map<std::size_t, std::vector<TreeStructure>>& memo) {
  if (auto it = memo.find(leaves); it != memo.end()) return it->second;
  std::vector<TreeStructure> out;
  if (leaves == 1) {
    out.push_back(TreeStructure::leaf());
  } else {
    for (std::size_t left_leaves = 1; 2 * left_leaves <= leaves; ++left_leaves) {
      const auto lefts = shapes_with_leaves(left_leaves, memo);
      const auto rights = shapes_with_leaves(leaves - left_leaves, memo);
      const bool same_size = 2 * left_leaves == leaves;
      for (std::size_t i = 0; i < lefts.size(); ++i) {
        for (std::size_t j = same_size ? i : 0; j < rights.size(); ++j) {
          out.push_back(TreeStructure::node(lefts[i], rights[j]));
        }
      }
    }
    std::sort(out.begin(), out.end(),
              [](const TreeStructure& a, const TreeStructure& b) { return compare_structures(a, b) < 0; });
  }
  return memo.emplace(leaves, std::move(out)).first->second;
}

bool height_then_structure(const TreeStructure& a, const TreeStructure& b) {
  if (a.height() != b.height()) return a.height() < b.height();
  return compare_structures(a, b) < 0;
}

}  // namespace

std::vector<TreeStructure> enumerate(std::size_t leaves) {
  if (leaves == 0) throw std::invalid_argument("enumerate: leaf count must be >= 1");
  std::map<std::size_t, std::vector<TreeStructure>> memo;
  std::vector<TreeStructure> out = shapes_with_leaves(leaves, memo);
  std::stable_sort(out.begin(), out.end(), height_then_structure);
  return out;
}

std::vector<TreeStructure> enumerate_by_height(std::size_t max_height) {
  // Shapes of height <= h are a leaf or a node over two shapes of height <= h-1.
  std::vector<TreeStructure> level{TreeStructure::leaf()};
  for (std::size_t h = 1; h <= max_height; ++h) {
    std::vector<TreeStructure> next{TreeStructure::leaf()};
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i; j < level.size(); ++j) {
        next.push_back(canonical_form(TreeStructure::node(level[i], level[j])));
      }
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(), [](const TreeStructure& a, const TreeStructure& b) {
    if (a.leaf_count() != b.leaf_count()) return a.leaf_count() < b.leaf_count();
    return height_then_structure(a, b);
  });
  return level;
}

TreeStructure complete_tree(std::size_t depth) {
  if (depth == 0) return TreeStructure::leaf();
  TreeStructure child = complete_tree(depth - 1);
  return TreeStructure::node(child, child);
}

TreeStructure chain_tree(std::size_t internal_nodes) {
  TreeStructure t;
  for (std::size_t i = 0; i < internal_nodes; ++i) t = TreeStructure::node(t, TreeStructure::leaf());
  return t;
}

}  // namespace dtvc
