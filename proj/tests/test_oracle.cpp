#include <random>
#include <vector>

#include "doctest.h"
#include "dtvc/bound_engine.hpp"
#include "dtvc/oracle.hpp"

using namespace dtvc;
using namespace dtvc::oracle;

namespace {

const TreeStructure kLeaf = TreeStructure::leaf();
const TreeStructure kStump = TreeStructure::parse("(LL)");

std::vector<std::vector<std::size_t>> one_based(const PermutationMatrix& p) {
  auto rows = p.rows;
  for (auto& r : rows) {
    for (auto& v : r) ++v;
  }
  return rows;
}

Sample one_feature(std::vector<double> values) {
  const std::size_t m = values.size();
  return Sample(1, std::move(values), std::vector<std::size_t>(m, 0), 1);
}

}  // namespace

TEST_CASE("worst_case_permutations reproduces the tabulated matrices") {
  CHECK(one_based(worst_case_permutations(9, 3)) == std::vector<std::vector<std::size_t>>{
                                                        {1, 2, 3, 7, 8, 9, 6, 5, 4},
                                                        {2, 3, 4, 7, 8, 9, 1, 6, 5},
                                                        {3, 4, 5, 7, 8, 9, 2, 1, 6}});
  CHECK(one_based(worst_case_permutations(5, 5)) == std::vector<std::vector<std::size_t>>{
                                                        {1, 2, 3, 5, 4},
                                                        {2, 3, 4, 1, 5},
                                                        {3, 4, 1, 2, 5},
                                                        {1, 3, 5, 2, 4},
                                                        {1, 4, 2, 3, 5}});
  const Sample single = worst_case_sample(1, 1);
  CHECK(single.size() == 1);
  CHECK(single.features() == 1);
  // truncation and identity padding
  CHECK(worst_case_permutations(4, 2).rows.size() == 2);
  CHECK(one_based(worst_case_permutations(3, 4)).back() == std::vector<std::size_t>{1, 2, 3});
  CHECK_THROWS_AS(worst_case_permutations(9, 5), UnsupportedConstruction);
  CHECK_THROWS_AS(worst_case_permutations(0, 1), UnsupportedConstruction);
}

TEST_CASE("every permutation row induces distinct sorted values") {
  for (std::size_t m = 1; m <= 10; ++m) {
    for (std::size_t l = 1; l <= 8; ++l) {
      if (m > 7 && 2 * l > m) continue;
      const auto p = worst_case_permutations(m, l);
      const Sample s = p.to_sample();
      REQUIRE(s.size() == m);
      REQUIRE(s.features() == l);
      for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j + 1 < m; ++j) REQUIRE(s.value(p.rows[i][j], i) < s.value(p.rows[i][j + 1], i));
      }
    }
  }
}

TEST_CASE("stump_partitions") {
  CHECK(stump_partitions(one_feature({0.3, 0.1, 0.2})).size() == 2);
  CHECK(stump_partitions(worst_case_sample(5, 5)).size() == 15);
  CHECK(stump_partitions(one_feature({1.0, 1.0, 1.0, 1.0})).empty());
  // a tie only removes the cut between the equal values
  CHECK(stump_partitions(one_feature({1.0, 2.0, 2.0, 3.0})).size() == 2);
}

TEST_CASE("stump bound is attained on the worst-case samples") {
  for (std::size_t m = 1; m <= 7; ++m) {
    for (std::size_t l = 1; l <= 8; ++l) {
      CAPTURE(m);
      CAPTURE(l);
      REQUIRE(stump_partitions(worst_case_sample(m, l)).size() == stump_pi2_bound(m, l));
    }
  }
  for (std::size_t m = 2; m <= 10; ++m) {
    for (std::size_t l = 1; 2 * l <= m; ++l) {
      REQUIRE(stump_partitions(worst_case_sample(m, l)).size() == stump_pi2_bound(m, l));
    }
  }
}

TEST_CASE("random distinct samples never beat the stump bound") {
  std::mt19937_64 rng(2024);
  for (std::size_t m = 1; m <= 9; ++m) {
    for (std::size_t l = 1; l <= 4; ++l) {
      for (int trial = 0; trial < 100; ++trial) {
        REQUIRE(stump_partitions(random_distinct_sample(m, l, rng)).size() <= stump_pi2_bound(m, l));
      }
    }
  }
}

TEST_CASE("tree_partitions_count") {
  std::mt19937_64 rng(5);
  CHECK(tree_partitions_count(kLeaf, random_distinct_sample(4, 2, rng), 1) == 1);
  CHECK(tree_partitions_count(kStump, worst_case_sample(4, 3), 2) == 7);
  CHECK(tree_partitions_count(kStump, random_distinct_sample(6, 2, rng), 3) == 0);
  CHECK(tree_partitions_count(kStump, worst_case_sample(4, 3), 0) == 0);
  // a 4-leaf tree realizes every partition of 4 points into at most 4 parts
  const TreeStructure balanced = TreeStructure::parse("((LL)(LL))");
  const Sample four = worst_case_sample(4, 3);
  for (std::size_t c = 1; c <= 4; ++c) CHECK(tree_partitions_count(balanced, four, c) == stirling2(4, c));
}

TEST_CASE("tree enumeration agrees with the stump enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s = random_distinct_sample(1 + trial % 9, 1 + trial % 4, rng);
    REQUIRE(tree_partitions_count(kStump, s, 2) == stump_partitions(s).size());
  }
  for (std::size_t m = 2; m <= 10; ++m) {
    for (std::size_t l = 1; 2 * l <= m && l <= 4; ++l) {
      REQUIRE(tree_partitions_count(kStump, worst_case_sample(m, l), 2) == stump_pi2_bound(m, l));
    }
  }
}

TEST_CASE("tree enumeration stays below the recursive bound") {
  std::mt19937_64 rng(99);
  const std::vector<TreeStructure> trees{TreeStructure::parse("(L(LL))"), TreeStructure::parse("((LL)(LL))"),
                                         TreeStructure::parse("(L(L(LL)))")};
  for (std::size_t l = 1; l <= 2; ++l) {
    PartitionTable table;
    for (const auto& t : trees) {
      for (std::size_t m = 1; m <= 7; ++m) {
        for (int trial = 0; trial < 5; ++trial) {
          const auto counts = tree_partition_counts(t, random_distinct_sample(m, l, rng));
          for (std::size_t c = 1; c < counts.size(); ++c) REQUIRE(counts[c] <= partition_bound(t, c, m, l, table));
        }
      }
    }
  }
}

TEST_CASE("duplicating an example never increases a partition count") {
  std::mt19937_64 rng(3);
  const TreeStructure t = TreeStructure::parse("(L(LL))");
  for (int trial = 0; trial < 20; ++trial) {
    const Sample s = random_distinct_sample(5, 2, rng);
    std::vector<std::size_t> idx{0, 1, 2, 3, 4, static_cast<std::size_t>(trial % 5)};
    const Sample dup = s.subset(idx);
    const auto base = tree_partition_counts(t, s);
    const auto more = tree_partition_counts(t, dup);
    for (std::size_t c = 1; c < base.size(); ++c) REQUIRE(more[c] <= base[c]);
    REQUIRE(stump_partitions(dup).size() <= stump_partitions(s).size());
  }
}

TEST_CASE("resource guard") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(tree_partition_counts(kStump, random_distinct_sample(11, 1, rng)), ResourceLimitError);
  CHECK_THROWS_AS(tree_partition_counts(kStump, random_distinct_sample(5, 5, rng)), ResourceLimitError);
  CHECK_THROWS_AS(tree_partition_counts(TreeStructure::parse("(L(L(L(LL))))"), random_distinct_sample(5, 1, rng)),
                  ResourceLimitError);
}
