#pragma once

#include <cmath>
#include <cstddef>

#include "dtvc/bound_engine.hpp"
#include "dtvc/tree_structure.hpp"

namespace dtvc {

struct BoundConfig {
  double delta = 0.05;
  double r = std::exp2(-13.7);
  BoundMode mode = BoundMode::fast;

  /// Throws std::invalid_argument unless 0 < delta < 1 and 0 < r < 1.
  void validate() const;
};

/// 6 / (pi^2 L^2) / WE(L), with L the leaf count.
double prior_pd(const TreeStructure& t);
double ln_prior_pd(const TreeStructure& t);

/// (1 - r) r^k
double prior_qk(std::size_t k, double r);
double ln_prior_qk(std::size_t k, double r);

/// Risk bound for a tree of structure t making k errors on m points:
///   (2k + 4 (ln 4 + ln tau(2m) - ln delta - ln q_k - ln p_d)) / m
/// where tau is growth_bound. Everything is evaluated in log space, so m up
/// to 1e5 and trees of 40 leaves are fine. Throws std::invalid_argument if
/// m = 0, k > m, or the table's mode differs from cfg.mode.
double epsilon(std::size_t m, std::size_t k, const TreeStructure& t, std::size_t classes, std::size_t features,
               const BoundConfig& cfg, PartitionTable& table);

}  // namespace dtvc
