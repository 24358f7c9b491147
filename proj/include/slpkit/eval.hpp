#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slpkit/polynomial.hpp"
#include "slpkit/slp.hpp"

namespace slpkit {

// Caps for exact and symbolic evaluation. All fields must be positive.
struct EvalBudget {
  std::size_t max_bits = std::size_t{1} << 20;
  std::size_t max_degree = std::size_t{1} << 12;
  std::size_t max_terms = std::size_t{1} << 14;

  static EvalBudget with_bits(std::size_t bits) {
    EvalBudget b;
    b.max_bits = bits;
    return b;
  }
};

BigInt eval_exact(const Slp& slp, std::span<const BigInt> assignment = {},
                  const EvalBudget& budget = {});

// Residue of the output in [0, modulus). Requires modulus >= 2.
BigInt eval_mod(const Slp& slp, std::span<const BigInt> assignment, const BigInt& modulus);
std::uint64_t eval_mod(const Slp& slp, std::span<const std::uint64_t> assignment,
                       std::uint64_t modulus);
// Residue modulo 2^bits, computed by truncation; bits >= 1.
BigInt eval_mod_pow2(const Slp& slp, std::span<const BigInt> assignment, std::size_t bits);

// Coefficient expansion of a program with at most one variable.
Polynomial expand_poly(const Slp& slp, const EvalBudget& budget = {});
// Expansion of a program over any number of variables.
MultiPolynomial expand_multi(const Slp& slp, const EvalBudget& budget = {});
// Univariate expansion with coefficients reduced modulo a prime below 2^63.
// Entry k is the residue of the x^k coefficient; trailing zeros trimmed.
std::vector<std::uint64_t> expand_poly_mod(const Slp& slp, std::uint64_t modulus,
                                           const EvalBudget& budget = {});

// Gate recursion m_g: 0 at constants, 1 at variables, m_a + m_b at every
// arithmetic gate. Bounds the degree from above and is at most 2^size.
BigInt degree_upper_bound(const Slp& slp);

// Bit i of the sign-and-magnitude encoding of the value N with n magnitude
// bits: i < n selects magnitude bit i (LSB first), i == n is the sign bit.
// Throws PrecisionViolation when |N| >= 2^n.
bool bit_of(const Slp& slp, std::size_t n, std::size_t i, const EvalBudget& budget = {});

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace slpkit
