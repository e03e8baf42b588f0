#pragma once

// Upper bounds on the partitioning functions, growth function and VC
// dimension of binary decision tree classes over real-valued features.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "dtvc/combinatorics.hpp"
#include "dtvc/tree_structure.hpp"

namespace dtvc {

/// Exact mode sums over every split size k of the sample; fast mode replaces
/// that sum by (number of terms) x (largest term).
enum class BoundMode { exact, fast };

const char* to_string(BoundMode mode);

struct PartitionKey {
  std::string structure;  // canonical text form
  std::size_t parts = 0;
  std::size_t points = 0;
  std::size_t features = 0;

  friend bool operator==(const PartitionKey&, const PartitionKey&) = default;
};

struct PartitionKeyHash {
  std::size_t operator()(const PartitionKey& key) const noexcept;
};

/// Memo of partition-function bounds for one BoundMode. Lookups may run
/// concurrently; inserts are idempotent since entries are deterministic.
class PartitionTable {
 public:
  explicit PartitionTable(BoundMode mode = BoundMode::exact) : mode_(mode) {}

  PartitionTable(const PartitionTable&) = delete;
  PartitionTable& operator=(const PartitionTable&) = delete;

  BoundMode mode() const { return mode_; }

  std::optional<BigCount> find(const PartitionKey& key) const;
  void insert(PartitionKey key, BigCount value);
  std::size_t size() const;
  void clear();

  /// Line-oriented text: a "# mode=<mode>" header then
  /// "structure,c,m,l,value" per entry, sorted for reproducible output.
  void save(std::ostream& out) const;

  /// Best-effort load. Malformed lines, non-canonical structures and values
  /// above S(m,c) are skipped with a warning on `warnings`. A file written in
  /// the other mode is rejected entirely. Returns the number of entries added.
  std::size_t load(std::istream& in, std::ostream& warnings);

  void save_file(const std::string& path) const;
  std::size_t load_file(const std::string& path, std::ostream& warnings);

 private:
  BoundMode mode_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<PartitionKey, BigCount, PartitionKeyHash> entries_;
};

/// Decision-stump bound on the 2-partitioning function:
/// (1/2) sum_{k=1}^{m-1} min{2l, C(m,k)}. Zero for m <= 1.
BigCount stump_pi2_bound(std::size_t points, std::size_t features);

/// Exact VC dimension of decision stumps: largest d with 2l >= C(d, floor(d/2)).
std::size_t stump_vcdim_exact(std::size_t features);

/// Recursive bound on the c-partitioning function of tree class `t` on
/// `points` examples. Requires an exact-mode table.
BigCount partition_bound(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                         PartitionTable& table);

/// Looser bound replacing the sum over split sizes by its term count times the
/// largest term. Requires a fast-mode table.
BigCount partition_bound_fast(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                              PartitionTable& table);

/// Dispatches to partition_bound or partition_bound_fast by table mode.
BigCount partition_bound_auto(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                              PartitionTable& table);

/// Growth-function bound sum_{a=1}^{L} (n)_a pi^a(m), using the table's mode.
BigCount growth_bound(const TreeStructure& t, std::size_t points, std::size_t classes, std::size_t features,
                      PartitionTable& table);

/// Largest m such that the 2-partition bound reaches 2^(m-1) - 1 for every
/// size up to m, scanning upward from L+1. Leaves have VC dimension 1.
std::size_t vcdim_upper_bound(const TreeStructure& t, std::size_t features, PartitionTable& table);

}  // namespace dtvc
