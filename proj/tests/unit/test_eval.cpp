#include <random>

#include "doctest.h"
#include "slpkit/eval.hpp"
#include "test_support.hpp"

using namespace slpkit;

namespace {

Slp squaring_tower(std::size_t squarings) {
  std::vector<Instruction> instrs = {Instruction::add(0, 0)};
  for (std::size_t k = 1; k <= squarings; ++k) instrs.push_back(Instruction::mul(k, k));
  return Slp(0, std::move(instrs));
}

}  // namespace

TEST_CASE("eval_exact") {
  CHECK(eval_exact(parse("slp 0\nadd 0 0\nmul 1 1\n"), {}, EvalBudget::with_bits(1024)) == 4);

  BigInt two_1024;
  mpz_setbit(two_1024.get_mpz_t(), 1024);
  CHECK(eval_exact(squaring_tower(10), {}, EvalBudget::with_bits(2048)) == two_1024);

  try {
    eval_exact(squaring_tower(10), {}, EvalBudget::with_bits(64));
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.gate() == 7);  // 2^64 is the first value needing 65 bits
  }

  // A deep tower fails fast instead of materializing 2^(2^40).
  CHECK_THROWS_AS(eval_exact(squaring_tower(40)), BudgetExceeded);
  CHECK_THROWS_AS(eval_exact(parse("slp 1\nvar 1\n")), std::invalid_argument);
}

TEST_CASE("eval_mod") {
  const std::uint64_t none[] = {0};
  CHECK(eval_mod(pow2_slp(4), std::span<const std::uint64_t>(none, 0), 7) == 2);
  CHECK(eval_mod(int_to_slp(-5), std::span<const BigInt>{}, BigInt(17)) == 12);
  CHECK_THROWS_AS(eval_mod(int_to_slp(3), std::span<const BigInt>{}, BigInt(1)), std::invalid_argument);

  // Agreement with exact evaluation on random programs.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t vars = rng() % 2;
    const Slp p = testing::random_program(rng, 1 + rng() % 10, vars);
    std::vector<BigInt> point;
    std::vector<std::uint64_t> point_u;
    for (std::size_t v = 0; v < vars; ++v) {
      point_u.push_back(rng() % 50);
      point.emplace_back(static_cast<unsigned long>(point_u.back()));
    }
    const BigInt exact = testing::naive_value(p, point);
    const std::uint64_t m = 2 + rng() % 1'000'000'000'000ULL;
    BigInt want;
    mpz_fdiv_r(want.get_mpz_t(), exact.get_mpz_t(), BigInt(static_cast<unsigned long>(m)).get_mpz_t());
    CHECK(eval_mod(p, point, BigInt(static_cast<unsigned long>(m))) == want);
    CHECK(BigInt(static_cast<unsigned long>(eval_mod(p, point_u, m))) == want);
    CHECK(eval_exact(p, point) == exact);
    BigInt low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), exact.get_mpz_t(), 13);
    CHECK(eval_mod_pow2(p, point, 13) == low);
  }
}

TEST_CASE("expand_poly") {
  const Polynomial f = expand_poly(parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n"));
  CHECK(f == Polynomial({1, 0, 1}));
  CHECK(f.to_string() == "x^2 + 1");
  CHECK(expand_poly(parse("slp 1\nvar 1\nsub 1 1\n")).is_zero());
  CHECK(Polynomial({-3, 0, 2, -1}).to_string() == "-x^3 + 2x^2 - 3");

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Slp p = testing::random_program(rng, 1 + rng() % 10, 1);
    const Polynomial poly = expand_poly(p);
    const std::vector<BigInt> at3 = {BigInt(3)};
    CHECK(poly.evaluate(BigInt(3)) == eval_exact(p, at3));
    CHECK(poly.evaluate(BigInt(-2)) == testing::naive_value(p, {BigInt(-2)}));

    const BigInt m = degree_upper_bound(p);
    if (poly.degree()) CHECK(BigInt(static_cast<unsigned long>(*poly.degree())) <= m);
    BigInt cap;
    mpz_setbit(cap.get_mpz_t(), p.size());
    CHECK(m <= cap);

    // Modular expansion matches the reduced exact coefficients.
    const std::uint64_t prime = 1'000'000'007ULL;
    const auto mod_coeffs = expand_poly_mod(p, prime);
    std::vector<BigInt> reduced;
    for (const auto& c : poly.coefficients()) {
      BigInt r;
      mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), prime);
      reduced.push_back(r);
    }
    while (!reduced.empty() && reduced.back() == 0) reduced.pop_back();
    REQUIRE(mod_coeffs.size() == reduced.size());
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      CHECK(BigInt(static_cast<unsigned long>(mod_coeffs[k])) == reduced[k]);
    }
  }

  EvalBudget tight;
  tight.max_degree = 8;
  CHECK_THROWS_AS(expand_poly(parse("slp 1\nvar 1\nmul 1 1\nmul 2 2\nmul 3 3\nmul 4 4\n"), tight),
                  BudgetExceeded);
}

TEST_CASE("expand_multi agrees with point evaluation") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t vars = 1 + rng() % 3;
    const Slp p = testing::random_program(rng, 1 + rng() % 8, vars);
    const MultiPolynomial poly = expand_multi(p);
    std::vector<BigInt> point;
    for (std::size_t v = 0; v < vars; ++v) point.emplace_back(static_cast<long>(rng() % 9) - 4);
    CHECK(poly.evaluate(point) == testing::naive_value(p, point));
  }
  const MultiPolynomial xy = expand_multi(parse("slp 2\nvar 1\nvar 2\nmul 1 2\n"));
  CHECK(xy.total_degree() == 2u);
}

TEST_CASE("degree_upper_bound") {
  CHECK(degree_upper_bound(parse("slp 1\nvar 1\nmul 1 1\n")) == 2);
  CHECK(degree_upper_bound(parse("slp 1\nvar 1\nadd 1 1\n")) == 2);
  CHECK(expand_poly(parse("slp 1\nvar 1\nadd 1 1\n")).degree() == 1u);
  CHECK(degree_upper_bound(int_to_slp(77)) == 0);
}

TEST_CASE("bit_of") {
  const Slp five = int_to_slp(5);
  CHECK(bit_of(five, 3, 0) == true);
  CHECK(bit_of(five, 3, 1) == false);
  CHECK(bit_of(five, 3, 2) == true);
  CHECK(bit_of(five, 3, 3) == false);
  CHECK(bit_of(int_to_slp(-5), 3, 3) == true);
  CHECK(bit_of(int_to_slp(-5), 3, 0) == true);
  CHECK_THROWS_AS(bit_of(int_to_slp(8), 3, 0), PrecisionViolation);
  CHECK_THROWS_AS(bit_of(five, 3, 4), std::invalid_argument);
}
