#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "dtvc/data_io.hpp"
#include "dtvc/pruning.hpp"

using namespace dtvc;

namespace {

Sample random_sample(std::size_t m, std::size_t l, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::vector<double> values(m * l);
  std::vector<std::size_t> labels(m);
  for (auto& v : values) v = value(rng);
  for (std::size_t p = 0; p < m; ++p) {
    // mostly a function of feature 0, with label noise
    labels[p] = (rng() % 5 == 0) ? rng() % n : static_cast<std::size_t>(values[p * l] * static_cast<double>(n));
  }
  return Sample(l, std::move(values), std::move(labels), n);
}

// Straightforward PruneTreeWithBound: errors by prediction, structure by
// reparsing, no cached histograms.
double reference_prune(DecisionTree tree, const Sample& s, const BoundConfig& cfg, PartitionTable& table,
                       std::string& final_tree) {
  auto eps = [&](const DecisionTree& t) {
    const TreeStructure shape = DecisionTree::parse(t.to_string()).structure();
    return epsilon(s.size(), count_errors(t, s), shape, std::max<std::size_t>(2, s.classes()), s.features(), cfg,
                   table);
  };
  tree.annotate(s);
  double bound = eps(tree);
  while (!tree.is_leaf()) {
    double b = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
      if (tree.node(id).is_leaf()) continue;
      const double e = eps(tree.with_leaf_at(id));
      if (e <= b) {
        b = e;
        best = id;
      }
    }
    if (b > bound) break;
    tree = tree.with_leaf_at(best);
    bound = b;
  }
  final_tree = tree.to_string();
  return bound;
}

Sample iris() {
  DatasetSpec spec;
  spec.path = DTVC_DATA_DIR "/iris.csv";
  return load(spec);
}

}  // namespace

TEST_CASE("prune_with_bound: leaf input") {
  const Sample s(1, {0, 1, 2, 3}, {0, 1, 1, 1}, 2);
  PartitionTable table;
  const BoundConfig cfg;
  PartitionTable fast(BoundMode::fast);
  const DecisionTree leaf(1, 2, 1);
  const PruneResult r = prune_with_bound(leaf, s, cfg, fast);
  CHECK(r.tree == leaf);
  REQUIRE(r.bound_value);
  CHECK(*r.bound_value == epsilon(4, 1, TreeStructure::leaf(), 2, 1, cfg, fast));
  CHECK(r.bound_trace.size() == 1);
  CHECK_FALSE(r.chosen_alpha);
}

TEST_CASE("prune_with_bound removes a redundant split") {
  std::vector<double> values;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 200; ++i) {
    values.push_back(i);
    labels.push_back(i < 100 ? 0 : 1);
  }
  const Sample s(1, values, labels, 2);
  const DecisionTree t = DecisionTree::parse("(0:99.5 (0:30.5 L=0 L=0) L=1)", 1, 2);
  PartitionTable table(BoundMode::fast);
  const PruneResult r = prune_with_bound(t, s, BoundConfig{}, table);
  CHECK(r.tree.to_string() == "(0:99.5 L=0 L=1)");
  CHECK(r.leaves_before == 3);
  CHECK(r.leaves_after == 2);
  REQUIRE(r.bound_trace.size() == 2);
  CHECK(r.bound_trace[1] < r.bound_trace[0]);
}

TEST_CASE("prune_with_bound agrees with a direct transcription") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Sample s = random_sample(40 + trial, 2, 2 + trial % 2, rng);
    const DecisionTree grown = fit(s, 3 + trial % 10);
    for (BoundMode mode : {BoundMode::fast, BoundMode::exact}) {
      BoundConfig cfg;
      cfg.mode = mode;
      PartitionTable table(mode);
      std::string expected_tree;
      const double expected = reference_prune(grown, s, cfg, table, expected_tree);
      const PruneResult r = prune_with_bound(grown, s, cfg, table);
      REQUIRE(r.tree.to_string() == expected_tree);
      REQUIRE(*r.bound_value == expected);
      REQUIRE(r.bound_value <= r.bound_trace.front());
      for (std::size_t i = 1; i < r.bound_trace.size(); ++i) REQUIRE(r.bound_trace[i] <= r.bound_trace[i - 1]);
      REQUIRE(r.leaves_after <= r.leaves_before);
    }
  }
}

TEST_CASE("prune_with_bound is deterministic") {
  const auto [train, test] = split(iris(), 0.75, 3);
  const DecisionTree grown = fit(train, 40);
  PartitionTable a(BoundMode::fast);
  PartitionTable b(BoundMode::fast);
  CHECK(prune_with_bound(grown, train, BoundConfig{}, a).tree == prune_with_bound(grown, train, BoundConfig{}, b).tree);
}

TEST_CASE("weakest_link_sequence") {
  const Sample s(1, {0, 1, 2, 3}, {0, 1, 1, 1}, 2);
  CHECK(weakest_link_sequence(DecisionTree(1, 2), s).empty());

  // node (0:0.5) saves 1/4 with one extra leaf, the root saves 1/4 with two
  const DecisionTree t = DecisionTree::parse("(0:1.5 (0:0.5 L=0 L=1) L=1)", 1, 2);
  const auto seq = weakest_link_sequence(t, s);
  REQUIRE(seq.size() == 1);
  CHECK(seq[0].alpha == 0.125);
  CHECK(seq[0].tree.is_leaf());
  CHECK(seq[0].tree.node(0).label == 1);

  CHECK(tree_for_alpha(t, seq, 0.1) == t);
  CHECK(tree_for_alpha(t, seq, 0.125).is_leaf());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Sample r = random_sample(60, 3, 3, rng);
    const DecisionTree grown = fit(r, 25);
    const auto steps = weakest_link_sequence(grown, r);
    std::size_t leaves = grown.leaf_count();
    double alpha = 0.0;
    for (const auto& step : steps) {
      REQUIRE(step.tree.leaf_count() < leaves);
      REQUIRE(step.alpha >= alpha);
      leaves = step.tree.leaf_count();
      alpha = step.alpha;
    }
    REQUIRE((grown.is_leaf() || steps.back().tree.is_leaf()));
  }
}

TEST_CASE("mcart_penalty") {
  CHECK(mcart_penalty(3, 100, 1) == doctest::Approx(3 * std::log(3.0) / 100 * std::log(100 / (3 * std::log(3.0)))));
  CHECK(mcart_penalty(1, 100, 1) == 0.0);  // d = 0
  CHECK(mcart_penalty(40, 50, 10) == 0.0);  // d >= m
  // increasing in L while d < m / e
  const std::size_t m = 1000;
  const std::size_t l = 4;
  double previous = mcart_penalty(1, m, l);
  for (std::size_t leaves = 2; leaves <= 200; ++leaves) {
    const double d = static_cast<double>(leaves) * std::log(static_cast<double>(leaves * l));
    if (d >= static_cast<double>(m) / std::exp(1.0)) break;
    const double current = mcart_penalty(leaves, m, l);
    REQUIRE(current > previous);
    previous = current;
  }
}

TEST_CASE("CART and M-CART") {
  const Sample pure(1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, std::vector<std::size_t>(12, 1), 2);
  const DecisionTree leaf = fit(pure, 40);
  CHECK(prune_cart(leaf, pure, 10, 1).tree.is_leaf());
  CHECK(prune_mcart(leaf, pure, 1, 10, 1).tree == leaf);

  const auto [train, test] = split(iris(), 0.75, 11);
  const DecisionTree grown = fit(train, 40);
  const PruneResult cart = prune_cart(grown, train, 10, 11);
  const PruneResult mcart = prune_mcart(grown, train, train.features(), 10, 11);
  for (const PruneResult* r : {&cart, &mcart}) {
    CHECK(r->leaves_after <= r->leaves_before);
    CHECK(r->leaves_before == grown.leaf_count());
    REQUIRE(r->chosen_alpha);
    CHECK_FALSE(r->bound_value);
  }
  CHECK(prune_cart(grown, train, 10, 11).tree == cart.tree);

  CHECK_THROWS_AS(prune_cart(grown, train.subset(std::vector<std::size_t>{0, 1, 2}), 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(prune_cart(grown, train, 1, 1), std::invalid_argument);
}
