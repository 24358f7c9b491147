#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "doctest.h"
#include "slpkit/numtheory.hpp"
#include "test_support.hpp"

using namespace slpkit;

TEST_CASE("is_3sos examples and brute force") {
  CHECK(is_3sos(BigInt(0)));
  CHECK_FALSE(is_3sos(BigInt(7)));
  CHECK_FALSE(is_3sos(BigInt(28)));
  CHECK(is_3sos(BigInt(6)));
  CHECK_FALSE(is_3sos(BigInt(-1)));
  CHECK_FALSE(is_3sos(BigInt(1792)));

  const auto table = testing::sums_of_squares_table(3, 1 << 12, 64);
  for (std::uint64_t n = 0; n < (1u << 12); ++n) {
    CHECK(is_3sos(BigInt(static_cast<unsigned long>(n))) == table[n]);
    CHECK(is_3sos(n) == table[n]);
  }
}

TEST_CASE("is_2sos examples and brute force") {
  CHECK(is_2sos(BigInt(2)));
  CHECK_FALSE(is_2sos(BigInt(21)));
  CHECK(is_2sos(BigInt(9)));
  CHECK(is_2sos(BigInt(0)));
  CHECK(is_2sos(BigInt(1)));
  CHECK_FALSE(is_2sos(BigInt(-4)));

  const auto table = testing::sums_of_squares_table(2, 1 << 12, 64);
  for (std::uint64_t n = 0; n < (1u << 12); ++n) {
    CHECK(is_2sos(BigInt(static_cast<unsigned long>(n))) == table[n]);
  }
}

TEST_CASE("is_2sos on large structured inputs") {
  // 2^61 - 1 is a prime 3 mod 4: even powers pass, odd ones fail.
  const BigInt m61 = (BigInt(1) << 61) - 1;
  CHECK(is_2sos(BigInt(m61 * m61)));
  CHECK_FALSE(is_2sos(BigInt(m61 * 5)));
  // p = 2^89 - 1 is prime and 3 mod 4; 3 p^4 is never a sum of two squares.
  const BigInt m89 = (BigInt(1) << 89) - 1;
  CHECK_FALSE(is_2sos(BigInt(3 * m89 * m89 * m89 * m89)));
  // Products of primes 1 mod 4 are sums of two squares.
  CHECK(is_2sos(BigInt(BigInt(1000000009) * BigInt(1000000021))));
}

TEST_CASE("lemma invariants over small ranges") {
  for (unsigned long M = 1; M <= 10000; ++M) {
    const BigInt m(M);
    CHECK_FALSE(is_3sos(BigInt(7 * m * m * m * m)));
    CHECK_FALSE(is_2sos(BigInt(3 * m * m)));
  }
}

TEST_CASE("isqrt and perfect squares") {
  CHECK(isqrt(BigInt(0)) == 0);
  CHECK(isqrt(BigInt(24)) == 4);
  CHECK(isqrt(BigInt(25)) == 5);
  CHECK_THROWS_AS(isqrt(BigInt(-1)), std::invalid_argument);
  CHECK(is_perfect_square(BigInt(16)));
  CHECK_FALSE(is_perfect_square(BigInt(15)));
  CHECK(is_perfect_square(BigInt(0)));
  CHECK_FALSE(is_perfect_square(BigInt(-4)));

  gmp_randclass gen(gmp_randinit_default);
  gen.seed(17);
  for (int trial = 0; trial < 5000; ++trial) {
    const BigInt n = gen.get_z_bits(1 + trial % 400);
    BigInt want;
    mpz_sqrt(want.get_mpz_t(), n.get_mpz_t());
    REQUIRE(isqrt(n) == want);
    CHECK(is_perfect_square(n) == (want * want == n));
    CHECK(is_perfect_square(BigInt(n * n)));
  }
}

TEST_CASE("primality agrees with GMP") {
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(23);
  for (int trial = 0; trial < 3000; ++trial) {
    const BigInt n = gen.get_z_bits(2 + trial % 130);
    const bool gmp = mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
    CHECK(is_probable_prime(n) == gmp);
  }
  for (std::uint64_t n = 0; n < 20000; ++n) {
    CHECK(is_prime_u64(n) == (mpz_probab_prime_p(BigInt(static_cast<unsigned long>(n)).get_mpz_t(), 30) != 0));
  }
  // Strong pseudoprime to bases 2..11.
  CHECK_FALSE(is_prime_u64(3474749660383ULL));
}

TEST_CASE("factorize") {
  auto f12 = factorize(BigInt(12));
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == std::pair<BigInt, unsigned>{BigInt(2), 2});
  CHECK(f12.factors[1] == std::pair<BigInt, unsigned>{BigInt(3), 1});

  auto f97 = factorize(BigInt(97));
  REQUIRE(f97.factors.size() == 1);
  CHECK(f97.factors[0].first == 97);

  const BigInt f5 = (BigInt(1) << 64) + 1;
  auto fermat = factorize(f5);
  REQUIRE(fermat.factors.size() == 2);
  CHECK(fermat.factors[0].first == 274177);
  CHECK(fermat.factors[1].first == BigInt("67280421310721"));
  CHECK(fermat.product() == f5);

  CHECK_THROWS_AS(factorize(BigInt(1)), std::invalid_argument);

  // Two 40-bit primes exceed a tiny rho budget.
  const BigInt p("1099511627791"), q("1099511628401");
  REQUIRE(is_probable_prime(p));
  REQUIRE(is_probable_prime(q));
  FactorBudget tiny;
  tiny.rho_iterations = 50;
  CHECK_THROWS_AS(factorize(BigInt(p * q), tiny), FactorizationTimeout);
  CHECK(factorize(BigInt(p * q)).product() == p * q);
}

TEST_CASE("factorize multiplies back on random 96-bit inputs") {
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(31);
  std::vector<BigInt> inputs;
  for (int trial = 0; trial < 10000; ++trial) inputs.push_back(gen.get_z_bits(96) + 2);

  FactorBudget budget;
  budget.rho_iterations = 50'000'000;
  // Workers only record failures; assertions stay on the main thread.
  std::vector<std::string> failures;
  std::mutex mu;
  const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < inputs.size(); i += workers) {
        const BigInt& n = inputs[i];
        const Factorization f = factorize(n, budget);
        bool ok = f.product() == n;
        for (std::size_t k = 0; k < f.factors.size(); ++k) {
          ok = ok && f.factors[k].second >= 1 && mpz_probab_prime_p(f.factors[k].first.get_mpz_t(), 30) != 0;
          if (k > 0) ok = ok && f.factors[k - 1].first < f.factors[k].first;
        }
        if (!ok) {
          std::lock_guard lock(mu);
          failures.push_back(n.get_str());
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  CHECK(failures.empty());
  for (const auto& n : failures) MESSAGE("bad factorization of " << n);
}

TEST_CASE("trailing_zeros") {
  CHECK(trailing_zeros(BigInt(12)) == 2u);
  CHECK(trailing_zeros(BigInt(7)) == 0u);
  CHECK(trailing_zeros(BigInt(-8)) == 3u);
  CHECK_FALSE(trailing_zeros(BigInt(0)).has_value());
}

TEST_CASE("four_square_witness") {
  const auto w7 = four_square_witness(BigInt(7));
  CHECK(w7 == std::array<BigInt, 4>{2, 1, 1, 1});
  CHECK(four_square_witness(BigInt(0)) == std::array<BigInt, 4>{0, 0, 0, 0});
  for (const BigInt n : {BigInt(310), BigInt("18446744073709551615"), BigInt(BigInt(1) << 64), BigInt(999999)}) {
    const auto w = four_square_witness(n);
    CHECK(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3] == n);
  }
  CHECK_THROWS_AS(four_square_witness((BigInt(1) << 64) + 1), std::length_error);
}

TEST_CASE("density_scan small limits match enumeration") {
  // Independent route: count the excluded set 4^a(8k+7) directly.
  std::uint64_t excluded = 0;
  for (std::uint64_t base = 1; base * 7 <= 100; base *= 4) {
    for (std::uint64_t v = 7; v * base <= 100; v += 8) ++excluded;
  }
  const auto r3 = density_scan(DensityKind::ThreeSquares, 100);
  CHECK(r3.count == 100 - excluded);
  CHECK(r3.count == 85);

  const auto table = testing::sums_of_squares_table(2, 10001, 101);
  std::uint64_t two = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) two += table[n] ? 1 : 0;
  CHECK(density_scan(DensityKind::TwoSquares, 10000).count == two);

  CHECK_THROWS_AS(density_scan(DensityKind::ThreeSquares, 100'000'001), std::invalid_argument);
}
