#pragma once

// Exact counting primitives shared by every bound computation.
//
// All counts are unbounded integers (GMP). Binomials and Stirling numbers of
// the second kind are served from process-wide dynamic-programming tables
// that grow on demand and tolerate concurrent readers.

#include <cstddef>
#include <cstdint>

#include <gmpxx.h>

namespace dtvc {

using BigCount = mpz_class;

/// C(n, k); zero when k > n.
BigCount binomial(std::size_t n, std::size_t k);

/// min{cap, C(n, k)} evaluated in machine arithmetic with early exit.
/// Used by the bound recursion, which only ever needs C(m, k) clamped to 2l.
std::uint64_t binomial_min(std::size_t n, std::size_t k, std::uint64_t cap);

/// Number of partitions of an m-set into c nonempty blocks.
BigCount stirling2(std::size_t m, std::size_t c);

/// min{value, S(m, c)} without materialising S(m, c) when the cheap lower
/// bound S(m, c) >= c^(m-c) already exceeds value.
BigCount min_with_stirling2(const BigCount& value, std::size_t m, std::size_t c);

/// n (n-1) ... (n-a+1); 1 for a = 0, 0 for a > n.
BigCount falling_factorial(std::size_t n, std::size_t a);

BigCount factorial(std::size_t n);

/// Number of binary tree shapes with L leaves up to mirror symmetry.
/// Throws std::invalid_argument for L = 0.
BigCount wedderburn_etherington(std::size_t leaves);

/// Natural logarithm of a positive big integer, from its bit length and
/// leading bits. Throws std::invalid_argument for x = 0.
double ln_big(const BigCount& x);

std::size_t bit_length(const BigCount& x);

}  // namespace dtvc
