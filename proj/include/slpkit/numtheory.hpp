#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "slpkit/slp.hpp"

namespace slpkit {

struct FactorBudget {
  // Pollard-rho iterations allowed per composite cofactor.
  std::uint64_t rho_iterations = 1'000'000;
};

struct Factorization {
  int sign = 1;
  std::vector<std::pair<BigInt, unsigned>> factors;  // primes strictly increasing

  BigInt product() const;
};

// Sum-of-three-squares test by the 4^a(8k+7) characterization. Negative
// inputs are never sums of squares.
bool is_3sos(const BigInt& n);
bool is_3sos(std::uint64_t n);

// Sum-of-two-squares test: every prime 3 mod 4 must occur to an even power.
// Throws FactorizationTimeout when a cofactor resists the rho budget.
bool is_2sos(const BigInt& n, const FactorBudget& budget = {});

bool is_perfect_square(const BigInt& n);
// Largest a with a^2 <= n, by Newton iteration. Throws on negative n.
BigInt isqrt(const BigInt& n);

// Miller-Rabin: the fixed bases 2..37 (deterministic below 2^64), then 40
// pseudo-random rounds above.
bool is_probable_prime(const BigInt& n);
bool is_prime_u64(std::uint64_t n);

// Full factorization of n >= 2: trial division to 10^6, Miller-Rabin,
// Brent's variant of Pollard rho.
Factorization factorize(const BigInt& n, const FactorBudget& budget = {});

// Largest t with 2^t | n; nullopt for n == 0, where every power divides.
std::optional<std::size_t> trailing_zeros(const BigInt& n);

// (a, b, c, d) with a^2 + b^2 + c^2 + d^2 = n for 0 <= n <= 2^64.
std::array<BigInt, 4> four_square_witness(const BigInt& n);

enum class DensityKind { ThreeSquares, TwoSquares };

struct DensityResult {
  std::uint64_t count = 0;
  // count/limit for three squares; count*sqrt(ln limit)/limit for two.
  double ratio = 0.0;
};

// Counts qualifying n in [1, limit] (limit <= 10^8) using the
// characterizations, never search.
DensityResult density_scan(DensityKind kind, std::uint64_t limit);

// Primes below 10^6, ascending.
const std::vector<std::uint32_t>& small_primes();

}  // namespace slpkit
