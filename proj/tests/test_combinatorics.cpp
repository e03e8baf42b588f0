#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "doctest.h"
#include "dtvc/combinatorics.hpp"
#include "dtvc/tree_structure.hpp"

using namespace dtvc;

namespace {

// Counts set partitions of {0..m-1} into exactly c blocks by walking every
// restricted growth string.
std::size_t brute_force_partitions(std::size_t m, std::size_t c) {
  std::vector<std::size_t> rgs(m, 0);
  std::size_t count = 0;
  auto walk = [&](auto&& self, std::size_t pos, std::size_t blocks) -> void {
    if (pos == m) {
      if (blocks == c) ++count;
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      rgs[pos] = b;
      self(self, pos + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  walk(walk, 0, 0);
  return count;
}

}  // namespace

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(4, 7) == 0);
  CHECK(binomial(0, 0) == 1);
  // direct path beyond the tabulated rows
  CHECK(binomial(300, 2) == 44850);
  CHECK(binomial(300, 150) == binomial(299, 149) + binomial(299, 150));
}

TEST_CASE("Pascal identity holds exhaustively up to n = 64") {
  for (std::size_t n = 1; n <= 64; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
  }
}

TEST_CASE("binomial_min clamps without overflow") {
  CHECK(binomial_min(6, 3, 100) == 20);
  CHECK(binomial_min(6, 3, 20) == 20);
  CHECK(binomial_min(6, 3, 7) == 7);
  CHECK(binomial_min(3, 5, 7) == 0);
  CHECK(binomial_min(1000000, 500000, 1u << 30) == 1u << 30);
  for (std::size_t n = 0; n <= 40; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const BigCount exact = binomial(n, k);
      const std::uint64_t cap = 1000;
      const std::uint64_t expected = exact < cap ? exact.get_ui() : cap;
      REQUIRE(binomial_min(n, k, cap) == expected);
    }
  }
}

TEST_CASE("stirling2") {
  CHECK(stirling2(6, 2) == 31);
  CHECK(stirling2(4, 3) == brute_force_partitions(4, 3));
  CHECK(stirling2(4, 3) == 6);
  CHECK(stirling2(3, 5) == 0);
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(5, 0) == 0);
  for (std::size_t m = 1; m <= 9; ++m) {
    for (std::size_t c = 1; c <= m; ++c) REQUIRE(stirling2(m, c) == brute_force_partitions(m, c));
  }
  for (std::size_t m = 1; m <= 100; ++m) {
    BigCount two_pow = 1;
    two_pow <<= static_cast<mp_bitcnt_t>(m - 1);
    REQUIRE(stirling2(m, 1) == 1);
    REQUIRE(stirling2(m, 2) == two_pow - 1);
  }
}

TEST_CASE("Stirling recurrence holds exhaustively up to m = 30") {
  for (std::size_t m = 1; m <= 30; ++m) {
    for (std::size_t c = 1; c <= m; ++c) {
      REQUIRE(stirling2(m, c) == BigCount(static_cast<unsigned long>(c)) * stirling2(m - 1, c) + stirling2(m - 1, c - 1));
    }
  }
}

TEST_CASE("tabulated and explicit-formula Stirling numbers agree across the table edge") {
  for (std::size_t m : {318u, 319u, 320u, 321u}) {
    for (std::size_t c : {2u, 3u, 7u}) {
      REQUIRE(stirling2(m, c) ==
              BigCount(static_cast<unsigned long>(c)) * stirling2(m - 1, c) + stirling2(m - 1, c - 1));
    }
  }
}

TEST_CASE("min_with_stirling2") {
  CHECK(min_with_stirling2(100, 6, 2) == 31);
  CHECK(min_with_stirling2(5, 6, 2) == 5);
  CHECK(min_with_stirling2(5, 3, 5) == 0);
  // huge m: the shortcut must not need S(m, c) to decide
  BigCount small = 123456789;
  CHECK(min_with_stirling2(small, 200000, 3) == small);
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(3, 2) == 6);
  CHECK(falling_factorial(2, 3) == 0);
  CHECK(falling_factorial(5, 0) == 1);
}

TEST_CASE("sum_c S(m,c) (n)_c = n^m exhaustively for m <= 10, n <= 5") {
  for (std::size_t m = 0; m <= 10; ++m) {
    for (std::size_t n = 0; n <= 5; ++n) {
      BigCount sum = 0;
      for (std::size_t c = 0; c <= m; ++c) sum += stirling2(m, c) * falling_factorial(n, c);
      BigCount power;
      mpz_ui_pow_ui(power.get_mpz_t(), n, m);
      REQUIRE(sum == power);
    }
  }
}

TEST_CASE("Wedderburn-Etherington numbers match shape enumeration") {
  CHECK(wedderburn_etherington(1) == 1);
  CHECK(wedderburn_etherington(2) == 1);
  CHECK(wedderburn_etherington(3) == 1);
  CHECK(wedderburn_etherington(4) == 2);
  CHECK(wedderburn_etherington(5) == 3);
  for (std::size_t leaves = 1; leaves <= 12; ++leaves) {
    REQUIRE(wedderburn_etherington(leaves) == enumerate(leaves).size());
  }
  CHECK_THROWS_AS(wedderburn_etherington(0), std::invalid_argument);
}

TEST_CASE("ln_big") {
  CHECK(ln_big(1) == 0.0);
  BigCount two64 = 1;
  two64 <<= 64;
  CHECK(ln_big(two64) == doctest::Approx(44.3614195558365).epsilon(1e-13));
  BigCount ten40;
  mpz_ui_pow_ui(ten40.get_mpz_t(), 10, 40);
  CHECK(std::abs(ln_big(ten40) - 92.10340371976182736) / 92.10340371976182736 <= 1e-12);
  BigCount huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 3, 100000);
  CHECK(std::abs(ln_big(huge) - 100000 * std::log(3.0)) / (100000 * std::log(3.0)) <= 1e-12);
  CHECK_THROWS_AS(ln_big(0), std::invalid_argument);
}

TEST_CASE("memo tables tolerate concurrent readers") {
  std::vector<std::thread> workers;
  std::vector<BigCount> results(4);
  for (std::size_t w = 0; w < 4; ++w) {
    workers.emplace_back([w, &results] {
      BigCount acc = 0;
      for (std::size_t m = 0; m < 200; ++m) acc += stirling2(m, (m + w) % 7) + binomial(m, m / 2);
      results[w] = acc;
    });
  }
  for (auto& t : workers) t.join();
  for (std::size_t w = 0; w < 4; ++w) {
    BigCount acc = 0;
    for (std::size_t m = 0; m < 200; ++m) acc += stirling2(m, (m + w) % 7) + binomial(m, m / 2);
    CHECK(results[w] == acc);
  }
}
