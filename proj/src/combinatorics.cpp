#include "dtvc/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace dtvc {

namespace {

// Rows beyond these limits are computed directly instead of tabulated.
constexpr std::size_t kPascalRows = 256;
constexpr std::size_t kStirlingRows = 320;

// Triangular table whose row r holds entries 0..r. Rows are appended under an
// exclusive lock; lookups copy the value out under a shared lock.
class TriangleTable {
 public:
  template <typename NextRow>
  BigCount get(std::size_t row, std::size_t col, NextRow&& next_row) {
    {
      std::shared_lock lock(mutex_);
      if (row < rows_.size()) return rows_[row][col];
    }
    std::unique_lock lock(mutex_);
    while (rows_.size() <= row) {
      rows_.push_back(next_row(rows_));
    }
    return rows_[row][col];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<std::vector<BigCount>> rows_;
};

TriangleTable& pascal_table() {
  static TriangleTable table;
  return table;
}

TriangleTable& stirling_table() {
  static TriangleTable table;
  return table;
}

std::vector<BigCount> next_pascal_row(const std::vector<std::vector<BigCount>>& rows) {
  const std::size_t n = rows.size();
  std::vector<BigCount> row(n + 1);
  row[0] = 1;
  row[n] = 1;
  for (std::size_t k = 1; k < n; ++k) row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
  return row;
}

std::vector<BigCount> next_stirling_row(const std::vector<std::vector<BigCount>>& rows) {
  const std::size_t m = rows.size();
  std::vector<BigCount> row(m + 1);
  if (m == 0) {
    row[0] = 1;
    return row;
  }
  row[0] = 0;
  row[m] = 1;
  for (std::size_t c = 1; c < m; ++c) {
    row[c] = rows[m - 1][c] * static_cast<unsigned long>(c) + rows[m - 1][c - 1];
  }
  return row;
}

BigCount binomial_direct(std::size_t n, std::size_t k) {
  BigCount out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// S(m,c) = (1/c!) sum_j (-1)^j C(c,j) (c-j)^m
BigCount stirling_direct(std::size_t m, std::size_t c) {
  BigCount sum = 0;
  for (std::size_t j = 0; j <= c; ++j) {
    BigCount power;
    mpz_ui_pow_ui(power.get_mpz_t(), c - j, m);
    BigCount term = binomial(c, j) * power;
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  BigCount out;
  mpz_divexact(out.get_mpz_t(), sum.get_mpz_t(), factorial(c).get_mpz_t());
  return out;
}

}  // namespace

BigCount binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (n >= kPascalRows) return binomial_direct(n, k);
  return pascal_table().get(n, k, next_pascal_row);
}

std::uint64_t binomial_min(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // The running value C(n-k+i, i) increases with i and ends at C(n, k).
  __extension__ using u128 = unsigned __int128;
  u128 value = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value >= cap) return cap;
  }
  return static_cast<std::uint64_t>(value);
}

BigCount stirling2(std::size_t m, std::size_t c) {
  if (c > m) return 0;
  if (m == 0) return 1;
  if (c == 0) return 0;
  if (c == 1 || c == m) return 1;
  if (m >= kStirlingRows) return stirling_direct(m, c);
  return stirling_table().get(m, c, next_stirling_row);
}

BigCount min_with_stirling2(const BigCount& value, std::size_t m, std::size_t c) {
  if (c >= 2 && c < m) {
    // Anchoring the first c elements in distinct blocks gives S(m,c) >= c^(m-c).
    const double log2_lower = static_cast<double>(m - c) * std::log2(static_cast<double>(c));
    if (static_cast<double>(bit_length(value)) + 1.0 <= log2_lower) return value;
  }
  BigCount s = stirling2(m, c);
  return value < s ? value : s;
}

BigCount falling_factorial(std::size_t n, std::size_t a) {
  if (a > n) return 0;
  BigCount out = 1;
  for (std::size_t i = 0; i < a; ++i) out *= static_cast<unsigned long>(n - i);
  return out;
}

BigCount factorial(std::size_t n) {
  BigCount out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigCount wedderburn_etherington(std::size_t leaves) {
  if (leaves == 0) throw std::invalid_argument("wedderburn_etherington: leaf count must be >= 1");
  std::vector<BigCount> we(leaves + 1, 0);
  we[1] = 1;
  for (std::size_t n = 2; n <= leaves; ++n) {
    BigCount total = 0;
    // unordered pairs {i, n-i} of subtree sizes
    for (std::size_t i = 1; 2 * i < n; ++i) total += we[i] * we[n - i];
    if (n % 2 == 0) {
      const BigCount& half = we[n / 2];
      total += half * (half + 1) / 2;
    }
    we[n] = total;
  }
  return we[leaves];
}

std::size_t bit_length(const BigCount& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

double ln_big(const BigCount& x) {
  if (sgn(x) <= 0) throw std::invalid_argument("ln_big: argument must be positive");
  if (bit_length(x) <= 53) return std::log(x.get_d());
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

}  // namespace dtvc
