#include "dtvc/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <string>

namespace dtvc::oracle {

namespace {

// Explicit worst-case tables for m = 1..7, 1-based.
const std::vector<std::vector<std::size_t>>& small_table(std::size_t m) {
  static const std::array<std::vector<std::vector<std::size_t>>, 8> tables{{
      {},
      {{1}},
      {{1, 2}},
      {{1, 2, 3}, {1, 3, 2}},
      {{1, 2, 4, 3}, {2, 3, 1, 4}, {1, 3, 2, 4}},
      {{1, 2, 3, 5, 4}, {2, 3, 4, 1, 5}, {3, 4, 1, 2, 5}, {1, 3, 5, 2, 4}, {1, 4, 2, 3, 5}},
      {{1, 2, 3, 6, 5, 4},
       {2, 3, 4, 1, 6, 5},
       {3, 4, 5, 2, 1, 6},
       {1, 3, 6, 5, 4, 2},
       {3, 5, 2, 1, 6, 4},
       {5, 1, 4, 3, 2, 6},
       {1, 4, 3, 6, 2, 5},
       {3, 6, 5, 1, 2, 4},
       {1, 2, 5, 3, 4, 6},
       {1, 3, 5, 2, 4, 6}},
      {{1, 2, 3, 4, 5, 6, 7},
       {2, 3, 4, 7, 1, 5, 6},
       {3, 4, 7, 6, 2, 1, 5},
       {4, 7, 6, 2, 5, 1, 3},
       {1, 4, 3, 7, 6, 2, 5},
       {5, 7, 4, 3, 2, 1, 6},
       {3, 7, 5, 6, 1, 2, 4},
       {2, 7, 4, 1, 6, 3, 5},
       {2, 6, 3, 7, 1, 4, 5},
       {1, 7, 3, 5, 2, 4, 6},
       {3, 6, 7, 1, 2, 4, 5},
       {1, 4, 7, 6, 2, 3, 5},
       {1, 2, 7, 3, 4, 5, 6},
       {1, 5, 7, 2, 3, 4, 6},
       {1, 6, 7, 2, 3, 4, 5},
       {2, 3, 7, 5, 1, 4, 6},
       {2, 5, 7, 4, 3, 6, 1},
       {2, 6, 7, 1, 3, 4, 5}},
  }};
  return tables[m];
}

Block lowest_bit(Block b) { return b & (~b + 1); }

Block full_mask(std::size_t m) { return m == 64 ? ~Block{0} : (Block{1} << m) - 1; }

void require_bitmask_size(std::size_t m) {
  if (m > 64) throw ResourceLimitError("oracle: samples are limited to 64 points");
}

// Point indices of `s` sorted by feature i (stable on ties).
std::vector<std::size_t> order_by_feature(const Sample& s, std::size_t feature) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.value(a, feature) < s.value(b, feature); });
  return order;
}

// Every set a threshold rule can send to the left child, over all features
// and both orientations, including the empty and the full set.
std::vector<Block> threshold_splits(const Sample& s) {
  const std::size_t m = s.size();
  std::set<Block> masks{Block{0}, full_mask(m)};
  for (std::size_t i = 0; i < s.features(); ++i) {
    const auto order = order_by_feature(s, i);
    Block prefix = 0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      prefix |= Block{1} << order[j];
      if (s.value(order[j], i) == s.value(order[j + 1], i)) continue;
      masks.insert(prefix);
      masks.insert(full_mask(m) & ~prefix);
    }
  }
  return {masks.begin(), masks.end()};
}

using LeafPartitions = std::set<Partition>;

// All partitions into nonempty leaf sets that subtree `t` can produce on the
// points in `mask`.
LeafPartitions leaf_partitions(const TreeStructure& t, Block mask, const std::vector<Block>& splits) {
  if (t.is_leaf()) {
    if (mask == 0) return {Partition{}};
    return {Partition{mask}};
  }
  std::map<Block, LeafPartitions> left_cache;
  std::map<Block, LeafPartitions> right_cache;
  LeafPartitions out;
  for (Block split : splits) {
    const Block to_left = mask & split;
    const Block to_right = mask & ~split;
    auto lit = left_cache.find(to_left);
    if (lit == left_cache.end()) lit = left_cache.emplace(to_left, leaf_partitions(t.left(), to_left, splits)).first;
    auto rit = right_cache.find(to_right);
    if (rit == right_cache.end()) {
      rit = right_cache.emplace(to_right, leaf_partitions(t.right(), to_right, splits)).first;
    }
    for (const Partition& lp : lit->second) {
      for (const Partition& rp : rit->second) {
        Partition merged = lp;
        merged.insert(merged.end(), rp.begin(), rp.end());
        canonicalize(merged);
        out.insert(std::move(merged));
      }
    }
  }
  return out;
}

// Calls `emit` with each grouping of blocks into exactly `groups` unions.
template <typename Emit>
void merge_blocks(const Partition& blocks, std::size_t groups, Emit&& emit) {
  const std::size_t q = blocks.size();
  if (groups == 0 || groups > q) return;
  std::vector<std::size_t> assign(q, 0);
  // Restricted growth strings enumerate each set partition of the blocks once.
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
    if (q - pos < groups - used) return;
    if (pos == q) {
      if (used != groups) return;
      Partition merged(groups, 0);
      for (std::size_t i = 0; i < q; ++i) merged[assign[i]] |= blocks[i];
      canonicalize(merged);
      emit(std::move(merged));
      return;
    }
    for (std::size_t g = 0; g <= used && g < groups; ++g) {
      assign[pos] = g;
      self(self, pos + 1, g == used ? used + 1 : used);
    }
  };
  recurse(recurse, 0, 0);
}

}  // namespace

void canonicalize(Partition& p) {
  std::sort(p.begin(), p.end(), [](Block a, Block b) { return lowest_bit(a) < lowest_bit(b); });
}

Sample PermutationMatrix::to_sample() const {
  std::vector<double> values(points * rows.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < points; ++j) {
      values[rows[i][j] * rows.size() + i] = static_cast<double>(j + 1);
    }
  }
  return Sample(rows.size(), std::move(values), std::vector<std::size_t>(points, 0), 1);
}

PermutationMatrix worst_case_permutations(std::size_t points, std::size_t features) {
  if (points == 0 || features == 0) throw UnsupportedConstruction("worst_case_permutations: need m >= 1 and l >= 1");
  PermutationMatrix out;
  out.points = points;
  if (points <= 7) {
    const auto& table = small_table(points);
    std::vector<std::size_t> identity(points);
    std::iota(identity.begin(), identity.end(), 0);
    for (std::size_t i = 0; i < features; ++i) {
      if (i < table.size()) {
        std::vector<std::size_t> row;
        for (std::size_t v : table[i]) row.push_back(v - 1);
        out.rows.push_back(std::move(row));
      } else {
        out.rows.push_back(identity);
      }
    }
    return out;
  }
  if (2 * features > points) {
    throw UnsupportedConstruction("worst_case_permutations: no explicit construction for m=" + std::to_string(points) +
                                  ", l=" + std::to_string(features));
  }
  // Left block: 1..l shifted right per row; middle: 2l+1..m; right block:
  // 2l..l+1 shifted left per row. Shifts are cyclic over 1..2l.
  const std::size_t l = features;
  for (std::size_t i = 0; i < l; ++i) {
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < l; ++j) row.push_back((i + j) % (2 * l));
    for (std::size_t v = 2 * l; v < points; ++v) row.push_back(v);
    for (std::size_t j = 0; j < l; ++j) row.push_back((2 * l - 1 - j + i) % (2 * l));
    out.rows.push_back(std::move(row));
  }
  return out;
}

Sample worst_case_sample(std::size_t points, std::size_t features) {
  return worst_case_permutations(points, features).to_sample();
}

Sample random_distinct_sample(std::size_t points, std::size_t features, std::mt19937_64& rng) {
  PermutationMatrix matrix;
  matrix.points = points;
  for (std::size_t i = 0; i < features; ++i) {
    std::vector<std::size_t> row(points);
    std::iota(row.begin(), row.end(), 0);
    for (std::size_t j = points; j > 1; --j) {
      std::uniform_int_distribution<std::size_t> pick(0, j - 1);
      std::swap(row[j - 1], row[pick(rng)]);
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix.to_sample();
}

std::set<Partition> stump_partitions(const Sample& s) {
  const std::size_t m = s.size();
  require_bitmask_size(m);
  std::set<Partition> out;
  for (std::size_t i = 0; i < s.features(); ++i) {
    const auto order = order_by_feature(s, i);
    Block prefix = 0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      prefix |= Block{1} << order[j];
      if (s.value(order[j], i) == s.value(order[j + 1], i)) continue;
      Partition p{prefix, full_mask(m) & ~prefix};
      canonicalize(p);
      out.insert(std::move(p));
    }
  }
  return out;
}

std::vector<std::size_t> tree_partition_counts(const TreeStructure& t, const Sample& s) {
  if (t.node_count() > 3 || s.size() > 10 || s.features() > 4) {
    throw ResourceLimitError("tree_partition_counts: limited to 3 internal nodes, m <= 10, l <= 4");
  }
  const std::size_t leaves = t.leaf_count();
  std::vector<std::size_t> counts(leaves + 1, 0);
  if (s.empty()) return counts;

  const auto splits = threshold_splits(s);
  const LeafPartitions realized = leaf_partitions(t, full_mask(s.size()), splits);
  std::vector<std::set<Partition>> by_parts(leaves + 1);
  for (const Partition& blocks : realized) {
    for (std::size_t c = 1; c <= blocks.size(); ++c) {
      merge_blocks(blocks, c, [&](Partition p) { by_parts[c].insert(std::move(p)); });
    }
  }
  for (std::size_t c = 1; c <= leaves; ++c) counts[c] = by_parts[c].size();
  return counts;
}

std::size_t tree_partitions_count(const TreeStructure& t, const Sample& s, std::size_t parts) {
  const auto counts = tree_partition_counts(t, s);
  return parts < counts.size() ? counts[parts] : 0;
}

}  // namespace dtvc::oracle
