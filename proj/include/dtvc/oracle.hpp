#pragma once

// Brute-force ground truth for the partition bounds: explicit enumeration of
// the partitions a tree class realizes on a concrete sample, and the
// worst-case samples on which the stump bound is attained.

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "dtvc/sample.hpp"
#include "dtvc/tree_structure.hpp"

namespace dtvc::oracle {

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedConstruction : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// One permutation of the points per feature; row i lists point indices
/// (0-based) in ascending order of feature i.
struct PermutationMatrix {
  std::size_t points = 0;
  std::vector<std::vector<std::size_t>> rows;

  /// Sample with value j+1 for the point at position j of each row, so every
  /// feature has distinct values. Labels are all 0.
  Sample to_sample() const;
};

/// Block of a partition as a bitmask over point indices (samples of at most
/// 64 points). A partition lists its blocks ordered by smallest element.
using Block = std::uint64_t;
using Partition = std::vector<Block>;

/// Orders blocks by their smallest element.
void canonicalize(Partition& p);

/// Worst-case permutation representation for the stump bound: the explicit
/// tables for m <= 7 (first l rows, identity rows appended when l exceeds the
/// table), else the shifted block construction when 2l <= m. Any other
/// (m, l) throws UnsupportedConstruction.
PermutationMatrix worst_case_permutations(std::size_t points, std::size_t features);

Sample worst_case_sample(std::size_t points, std::size_t features);

/// Random sample with distinct values per feature (a uniform permutation per
/// feature).
Sample random_distinct_sample(std::size_t points, std::size_t features, std::mt19937_64& rng);

/// Set of 2-partitions realizable by one threshold rule on `s`.
std::set<Partition> stump_partitions(const Sample& s);

/// Every c-partition realizable by tree class `t` on `s`, for each c.
/// Index c of the result holds |P^c_T(s)|; the vector has L_T + 1 entries.
/// Guarded to t with at most 3 internal nodes, m <= 10 and l <= 4; larger
/// inputs throw ResourceLimitError.
std::vector<std::size_t> tree_partition_counts(const TreeStructure& t, const Sample& s);

/// |P^c_T(s)|; zero for c = 0 or c > L_T.
std::size_t tree_partitions_count(const TreeStructure& t, const Sample& s, std::size_t parts);

}  // namespace dtvc::oracle
