#include "dtvc/learner.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace dtvc {

namespace {

__extension__ using i128 = __int128;

std::size_t sum(std::span<const std::size_t> h) { return std::accumulate(h.begin(), h.end(), std::size_t{0}); }

i128 sum_squares(std::span<const std::size_t> h) {
  i128 s = 0;
  for (std::size_t c : h) s += static_cast<i128>(c) * static_cast<i128>(c);
  return s;
}

struct Split {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best Gini split of the points at one node. The gain is in count units,
// n * impurity(parent) - nl * impurity(left) - nr * impurity(right), so gains
// at different nodes are directly comparable.
Split best_split(const Sample& s, const TreeNode& node) {
  Split best;
  const std::size_t n = node.points.size();
  if (n < 2) return best;
  if (*std::max_element(node.histogram.begin(), node.histogram.end()) == n) return best;
  const i128 parent_sq = sum_squares(node.histogram);
  std::vector<std::size_t> order(node.points);
  std::vector<std::size_t> left(node.histogram.size());
  std::vector<std::size_t> right(node.histogram.size());
  for (std::size_t f = 0; f < s.features(); ++f) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.value(a, f) < s.value(b, f); });
    std::fill(left.begin(), left.end(), 0);
    right = node.histogram;
    for (std::size_t p = 1; p < n; ++p) {
      const std::size_t y = s.label(order[p - 1]);
      ++left[y];
      --right[y];
      const double lo = s.value(order[p - 1], f);
      const double hi = s.value(order[p], f);
      if (!(lo < hi)) continue;
      const i128 nl = static_cast<i128>(p);
      const i128 nr = static_cast<i128>(n - p);
      const i128 nn = static_cast<i128>(n);
      // gain * n * nl * nr, exact
      const i128 num = nn * nr * sum_squares(left) + nn * nl * sum_squares(right) - nl * nr * parent_sq;
      if (num <= 0) continue;
      const double gain = static_cast<double>(num) / (static_cast<double>(n) * static_cast<double>(p) *
                                                      static_cast<double>(n - p));
      if (best.valid && !(gain > best.gain)) continue;
      double theta = lo + (hi - lo) / 2.0;
      if (!(theta < hi)) theta = lo;
      best = {true, f, theta, gain};
    }
  }
  return best;
}

void append_subtree(const std::vector<TreeNode>& src, std::size_t id, std::size_t collapse, std::vector<TreeNode>& out) {
  const std::size_t at = out.size();
  out.push_back(src[id]);
  if (id == collapse) {
    TreeNode& leaf = out[at];
    leaf.left = leaf.right = kNoChild;
    leaf.feature = 0;
    leaf.threshold = 0.0;
    leaf.label = majority_class(leaf.histogram);
    return;
  }
  if (src[id].is_leaf()) return;
  out[at].left = out.size();
  append_subtree(src, src[id].left, collapse, out);
  out[at].right = out.size();
  append_subtree(src, src[id].right, collapse, out);
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  std::vector<TreeNode> run(std::size_t& max_feature, std::size_t& max_label) {
    std::vector<TreeNode> nodes;
    node(nodes);
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    max_feature = max_feature_;
    max_label = max_label_;
    return nodes;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("tree parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::size_t integer() {
    skip_space();
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected an index");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }

  double real() {
    skip_space();
    double v = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected a threshold");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }

  void node(std::vector<TreeNode>& out) {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t at = out.size();
    out.emplace_back();
    if (text_[pos_] == 'L') {
      ++pos_;
      expect('=');
      out[at].label = integer();
      max_label_ = std::max(max_label_, out[at].label);
      return;
    }
    expect('(');
    out[at].feature = integer();
    max_feature_ = std::max(max_feature_, out[at].feature);
    expect(':');
    out[at].threshold = real();
    out[at].left = out.size();
    node(out);
    out[at].right = out.size();
    node(out);
    expect(')');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t max_feature_ = 0;
  std::size_t max_label_ = 0;
};

}  // namespace

std::size_t majority_class(std::span<const std::size_t> histogram) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < histogram.size(); ++c) {
    if (histogram[c] > histogram[best]) best = c;
  }
  return best;
}

DecisionTree::DecisionTree(std::size_t features, std::size_t classes, std::size_t label)
    : features_(features), classes_(classes) {
  if (classes_ == 0 || label >= classes_) throw std::invalid_argument("DecisionTree: label out of range");
  TreeNode root;
  root.label = label;
  root.histogram.assign(classes_, 0);
  nodes_.push_back(std::move(root));
}

DecisionTree DecisionTree::parse(std::string_view text, std::size_t features, std::size_t classes) {
  std::size_t max_feature = 0;
  std::size_t max_label = 0;
  auto nodes = TreeParser(text).run(max_feature, max_label);
  bool has_split = false;
  for (const auto& n : nodes) has_split = has_split || !n.is_leaf();
  DecisionTree t(std::max(features, has_split ? max_feature + 1 : std::size_t{1}), std::max(classes, max_label + 1));
  for (auto& n : nodes) n.histogram.assign(t.classes_, 0);
  t.nodes_ = std::move(nodes);
  return t;
}

std::string DecisionTree::to_string() const {
  std::string out;
  auto emit = [&](auto&& self, std::size_t id) -> void {
    const TreeNode& n = nodes_[id];
    if (n.is_leaf()) {
      out += "L=" + std::to_string(n.label);
      return;
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n.threshold);
    (void)ec;
    out += '(' + std::to_string(n.feature) + ':' + std::string(buf, end) + ' ';
    self(self, n.left);
    out += ' ';
    self(self, n.right);
    out += ')';
  };
  emit(emit, 0);
  return out;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::height() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t h = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {  // preorder: parents first
    h = std::max(h, depth[id]);
    if (!nodes_[id].is_leaf()) depth[nodes_[id].left] = depth[nodes_[id].right] = depth[id] + 1;
  }
  return h;
}

TreeStructure DecisionTree::structure() const { return structure_with_leaf_at(kNoChild); }

TreeStructure DecisionTree::structure_with_leaf_at(std::size_t id) const {
  auto build = [&](auto&& self, std::size_t at) -> TreeStructure {
    const TreeNode& n = nodes_[at];
    if (at == id || n.is_leaf()) return TreeStructure::leaf();
    return TreeStructure::node(self(self, n.left), self(self, n.right));
  };
  return build(build, 0);
}

std::vector<std::size_t> DecisionTree::internal_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!nodes_[id].is_leaf()) out.push_back(id);
  }
  return out;
}

std::size_t DecisionTree::subtree_leaf_count(std::size_t id) const {
  const TreeNode& n = nodes_.at(id);
  if (n.is_leaf()) return 1;
  return subtree_leaf_count(n.left) + subtree_leaf_count(n.right);
}

DecisionTree DecisionTree::with_leaf_at(std::size_t id) const {
  if (id >= nodes_.size()) throw std::out_of_range("DecisionTree::with_leaf_at: no such node");
  DecisionTree out(*this);
  out.nodes_.clear();
  append_subtree(nodes_, 0, id, out.nodes_);
  return out;
}

std::size_t DecisionTree::predict(std::span<const double> x) const {
  if (x.size() != features_) {
    throw std::invalid_argument("predict: expected " + std::to_string(features_) + " features, got " +
                                std::to_string(x.size()));
  }
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) id = x[nodes_[id].feature] <= nodes_[id].threshold ? nodes_[id].left : nodes_[id].right;
  return nodes_[id].label;
}

void DecisionTree::annotate(const Sample& s) {
  if (s.features() != features_) throw std::invalid_argument("annotate: feature count mismatch");
  classes_ = std::max(classes_, s.classes());
  for (auto& n : nodes_) {
    n.points.clear();
    n.histogram.assign(classes_, 0);
  }
  for (std::size_t p = 0; p < s.size(); ++p) {
    std::size_t id = 0;
    for (;;) {
      TreeNode& n = nodes_[id];
      n.points.push_back(p);
      ++n.histogram[s.label(p)];
      if (n.is_leaf()) break;
      id = s.value(p, n.feature) <= n.threshold ? n.left : n.right;
    }
  }
}

std::size_t DecisionTree::training_errors() const { return subtree_errors(0); }

std::size_t DecisionTree::subtree_errors(std::size_t id) const {
  const TreeNode& n = nodes_.at(id);
  if (n.is_leaf()) return sum(n.histogram) - (n.label < n.histogram.size() ? n.histogram[n.label] : 0);
  return subtree_errors(n.left) + subtree_errors(n.right);
}

std::size_t DecisionTree::errors_as_leaf(std::size_t id) const {
  const TreeNode& n = nodes_.at(id);
  if (n.histogram.empty()) return 0;
  return sum(n.histogram) - n.histogram[majority_class(n.histogram)];
}

DecisionTree fit(const Sample& s, std::size_t max_leaves) {
  if (s.empty()) throw std::invalid_argument("fit: empty sample");
  if (max_leaves == 0) throw std::invalid_argument("fit: max_leaves must be at least 1");

  DecisionTree t(s.features(), s.classes());
  std::vector<TreeNode>& nodes = t.nodes_;
  nodes[0].points.resize(s.size());
  std::iota(nodes[0].points.begin(), nodes[0].points.end(), std::size_t{0});
  for (std::size_t p = 0; p < s.size(); ++p) ++nodes[0].histogram[s.label(p)];
  nodes[0].label = majority_class(nodes[0].histogram);

  // ids here are creation order; leaf ties go to the earliest created
  std::vector<Split> splits{best_split(s, nodes[0])};
  std::size_t leaves = 1;
  while (leaves < max_leaves) {
    std::size_t chosen = kNoChild;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (!nodes[id].is_leaf() || !splits[id].valid) continue;
      if (chosen == kNoChild || splits[id].gain > splits[chosen].gain) chosen = id;
    }
    if (chosen == kNoChild) break;
    const Split sp = splits[chosen];
    TreeNode left;
    TreeNode right;
    left.histogram.assign(s.classes(), 0);
    right.histogram.assign(s.classes(), 0);
    for (std::size_t p : nodes[chosen].points) {
      TreeNode& side = s.value(p, sp.feature) <= sp.threshold ? left : right;
      side.points.push_back(p);
      ++side.histogram[s.label(p)];
    }
    left.label = majority_class(left.histogram);
    right.label = majority_class(right.histogram);
    nodes[chosen].feature = sp.feature;
    nodes[chosen].threshold = sp.threshold;
    nodes[chosen].left = nodes.size();
    nodes[chosen].right = nodes.size() + 1;
    splits[chosen].valid = false;
    splits.push_back(best_split(s, left));
    splits.push_back(best_split(s, right));
    nodes.push_back(std::move(left));
    nodes.push_back(std::move(right));
    ++leaves;
  }

  // renumber into preorder
  std::vector<TreeNode> ordered;
  ordered.reserve(nodes.size());
  append_subtree(nodes, 0, kNoChild, ordered);
  nodes = std::move(ordered);
  return t;
}

std::size_t predict(const DecisionTree& t, std::span<const double> x) { return t.predict(x); }

std::size_t count_errors(const DecisionTree& t, const Sample& s) {
  std::size_t errors = 0;
  for (std::size_t p = 0; p < s.size(); ++p) errors += t.predict(s.row(p)) != s.label(p);
  return errors;
}

double accuracy(const DecisionTree& t, const Sample& s) {
  if (s.empty()) return 0.0;
  return 1.0 - static_cast<double>(count_errors(t, s)) / static_cast<double>(s.size());
}

}  // namespace dtvc
