#include "dtvc/risk_bound.hpp"

#include <numbers>
#include <stdexcept>

#include "dtvc/combinatorics.hpp"

namespace dtvc {

void BoundConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must be in (0, 1)");
}

double ln_prior_pd(const TreeStructure& t) {
  const double leaves = static_cast<double>(t.leaf_count());
  return std::log(6.0) - 2.0 * std::log(std::numbers::pi) - 2.0 * std::log(leaves) -
         ln_big(wedderburn_etherington(t.leaf_count()));
}

double prior_pd(const TreeStructure& t) { return std::exp(ln_prior_pd(t)); }

double ln_prior_qk(std::size_t k, double r) { return std::log1p(-r) + static_cast<double>(k) * std::log(r); }

double prior_qk(std::size_t k, double r) { return std::exp(ln_prior_qk(k, r)); }

double epsilon(std::size_t m, std::size_t k, const TreeStructure& t, std::size_t classes, std::size_t features,
               const BoundConfig& cfg, PartitionTable& table) {
  cfg.validate();
  if (m == 0) throw std::invalid_argument("epsilon: m must be positive");
  if (k > m) throw std::invalid_argument("epsilon: more errors than points");
  if (table.mode() != cfg.mode) throw std::invalid_argument("epsilon: partition table mode differs from config");
  const double ln_growth = ln_big(growth_bound(t, 2 * m, classes, features, table));
  const double complexity =
      std::log(4.0) + ln_growth - std::log(cfg.delta) - ln_prior_qk(k, cfg.r) - ln_prior_pd(t);
  return (2.0 * static_cast<double>(k) + 4.0 * complexity) / static_cast<double>(m);
}

}  // namespace dtvc
