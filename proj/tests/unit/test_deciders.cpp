#include <functional>
#include <random>

#include "doctest.h"
#include "slpkit/deciders.hpp"
#include "test_support.hpp"

using namespace slpkit;

namespace {

const Slp kX = parse("slp 1\nvar 1\n");

// Enumerates every variable-free program of exactly `size` gates.
void each_program(std::size_t size, std::vector<Instruction>& prefix, const std::function<void(const Slp&)>& f) {
  if (prefix.size() == size) {
    f(Slp(0, prefix));
    return;
  }
  const std::size_t p = prefix.size() + 1;
  for (Op op : {Op::Add, Op::Sub, Op::Mul}) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        prefix.push_back({op, i, j});
        each_program(size, prefix, f);
        prefix.pop_back();
      }
    }
  }
}

bool brute_square(long n) {
  if (n < 0) return false;
  for (long a = 0; a * a <= n; ++a)
    if (a * a == n) return true;
  return false;
}

}  // namespace

TEST_CASE("problem names round trip") {
  for (Problem p : all_problems()) CHECK(problem_from_name(problem_name(p)) == p);
  CHECK(problem_name(Problem::ThreeSos) == "3sosslp");
  CHECK_FALSE(problem_from_name("nosuch").has_value());
}

TEST_CASE("decider examples") {
  CHECK(decide_pos(int_to_slp(1)).answer);
  CHECK_FALSE(decide_pos(int_to_slp(0)).answer);
  CHECK_FALSE(decide_pos(int_to_slp(-3)).answer);

  CHECK(decide_equ(parse("slp 0\nsub 0 0\n"), 1).answer);
  CHECK_FALSE(decide_equ(int_to_slp(1), 1).answer);
  {
    SlpBuilder b;
    const auto big = b.pow2(32);
    const auto sq = b.mul(big, big);
    const auto other = b.pow2(64);
    const Slp prog = std::move(b).finish(b.sub(sq, other));
    CHECK(decide_equ(prog, 5).answer);
  }

  CHECK(decide_div2(int_to_slp(12), 2).answer);
  CHECK_FALSE(decide_div2(int_to_slp(12), 3).answer);
  CHECK(decide_div2(int_to_slp(0), BigInt("123456789012345678901234567890")).answer);

  CHECK(decide_3sos(int_to_slp(6)).answer);
  CHECK_FALSE(decide_3sos(int_to_slp(1792)).answer);
  CHECK(decide_2sos(int_to_slp(2)).answer);
  CHECK_FALSE(decide_2sos(int_to_slp(3)).answer);
  CHECK(decide_squ(int_to_slp(16)).answer);
  CHECK_FALSE(decide_squ(int_to_slp(12)).answer);

  CHECK(decide_bit(int_to_slp(-5), 3, 3).answer);

  const Slp x2p1 = parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n");
  CHECK(decide_deg(x2p1, 2).answer);
  CHECK_FALSE(decide_deg(x2p1, 1).answer);
  const Slp x3px2 = parse("slp 1\nvar 1\nmul 1 1\nmul 2 1\nadd 3 2\n");
  CHECK(decide_ord(x3px2, 2).answer);
  CHECK_FALSE(decide_ord(x3px2, 3).answer);
  const Slp zero_poly = parse("slp 1\nvar 1\nsub 1 1\n");
  for (int k = 0; k < 50; ++k) {
    CHECK(decide_deg(zero_poly, k).answer);
    CHECK(decide_ord(zero_poly, BigInt(1) << k).answer);
  }

  CHECK(decide_pos_poly(parse("slp 1\nvar 1\nsub 1 0\nmul 2 2\n")).answer);
  CHECK_FALSE(decide_pos_poly(kX).answer);
  CHECK_FALSE(decide_pos_poly(parse("slp 1\nvar 1\nmul 1 1\nadd 0 0\nsub 2 3\n")).answer);
}

TEST_CASE("randomized squareness test for polynomials") {
  const Slp sq = parse("slp 1\nvar 1\nadd 1 0\nmul 2 2\n");  // (x+1)^2
  const Slp x2p1 = parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n");
  int no = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Verdict v = decide_squ_poly_rand(sq, std::nullopt, seed);
    CHECK(v.answer);
    CHECK(v.seed == seed);
    if (!decide_squ_poly_rand(x2p1, 20, seed).answer) ++no;
  }
  CHECK(no >= 95);
  CHECK_FALSE(decide_squ_poly_rand(int_to_slp(3), 8, 1).answer);
  // x at t: square exactly when t is.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Verdict v = decide_squ_poly_rand(kX, 4, seed);
    gmp_randclass gen(gmp_randinit_mt);
    gen.seed(seed);
    const BigInt t = BigInt(gen.get_z_bits(4)) + 1;
    CHECK(v.answer == (t == 1 || t == 4 || t == 9 || t == 16));
  }
}

TEST_CASE("exhaustive variable-free programs agree with direct checks") {
  const auto three = testing::sums_of_squares_table(3, 1 << 17, 400);
  const auto two = testing::sums_of_squares_table(2, 1 << 17, 400);
  std::vector<Instruction> prefix;
  std::size_t count = 0;
  for (std::size_t size = 1; size <= 5; ++size) {
    each_program(size, prefix, [&](const Slp& slp) {
      const long n = testing::naive_value(slp).get_si();
      REQUIRE(std::abs(n) < (1L << 17));
      CHECK(decide_pos(slp).answer == (n > 0));
      CHECK(decide_equ(slp, 99).answer == (n == 0));
      CHECK(decide_3sos(slp).answer == (n >= 0 && three[n]));
      CHECK(decide_2sos(slp).answer == (n >= 0 && two[n]));
      CHECK(decide_squ(slp).answer == brute_square(n));
      ++count;
    });
  }
  CHECK(count == 3 * 12 * 27 * 48 * 75 + 3 * 12 * 27 * 48 + 3 * 12 * 27 + 3 * 12 + 3);
}

TEST_CASE("div2 matches trailing zeros on random programs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10000; ++trial) {
    const Slp p = testing::random_program(rng, 1 + rng() % 12, 0);
    BigInt n;
    try {
      n = eval_exact(p, {}, EvalBudget::with_bits(1 << 14));
    } catch (const BudgetExceeded&) {
      continue;
    }
    const auto tz = trailing_zeros(n);
    const BigInt l(static_cast<unsigned long>(rng() % 40));
    CHECK(decide_div2(p, l).answer == (!tz || BigInt(static_cast<unsigned long>(*tz)) >= l));
    // The modular path, forced by a tiny budget.
    if (l > 0) {
      const Verdict v = decide_div2(p, l, EvalBudget::with_bits(2));
      CHECK(v.answer == (!tz || BigInt(static_cast<unsigned long>(*tz)) >= l));
    }
  }
}

TEST_CASE("equ never reports a nonzero value as zero") {
  std::mt19937_64 rng(43);
  int tested = 0;
  while (tested < 10000) {
    const Slp p = testing::random_program(rng, 1 + rng() % 12, 0);
    BigInt n;
    try {
      n = eval_exact(p, {}, EvalBudget::with_bits(1 << 14));
    } catch (const BudgetExceeded&) {
      continue;
    }
    if (n == 0) continue;
    const std::uint64_t seed = rng();
    // Tiny budget: exact confirmation is impossible, so any "true" would be
    // a randomized false positive.
    const Verdict v = decide_equ(p, seed, EvalBudget::with_bits(1));
    if (v.answer) MESSAGE("false positive, seed " << seed << "\n" << serialize(p));
    CHECK_FALSE(v.answer);
    ++tested;
  }
  // Zero beyond the exact budget comes back randomized with its seed.
  SlpBuilder b;
  const auto big = b.pow2(BigInt(1) << 12);
  const Slp zero = std::move(b).finish(b.sub(big, big));
  const Verdict v = decide_equ(zero, 7, EvalBudget::with_bits(64));
  CHECK(v.answer);
  CHECK(v.provenance == "randomized");
  CHECK(v.seed == 7u);
}

TEST_CASE("deg and ord fall back to modular expansion") {
  // f = 2^4096 x + x^3: coefficients beyond a 64-bit budget.
  SlpBuilder b(1);
  const auto x = b.var(1);
  const auto c = b.pow2(4096);
  const auto cx = b.mul(c, x);
  const auto x2 = b.mul(x, x);
  const auto x3 = b.mul(x2, x);
  const Slp f = std::move(b).finish(b.add(cx, x3));
  const EvalBudget tight = EvalBudget::with_bits(64);
  CHECK_THROWS_AS(expand_poly(f, tight), BudgetExceeded);
  const Verdict d3 = decide_deg(f, 3, tight, 11);
  CHECK(d3.answer);
  CHECK(d3.provenance == "randomized");
  CHECK_FALSE(decide_deg(f, 2, tight, 11).answer);
  CHECK(decide_ord(f, 1, tight, 11).answer);
  CHECK_FALSE(decide_ord(f, 2, tight, 11).answer);
}

TEST_CASE("instances validate their parameters") {
  CHECK_THROWS_AS(decide(ProblemInstance{Problem::Div2, int_to_slp(4), {}}), std::invalid_argument);
  AuxParams extra;
  extra.d = 3;
  CHECK_THROWS_AS(decide(ProblemInstance{Problem::Pos, int_to_slp(4), extra}), std::invalid_argument);
  CHECK_THROWS_AS(decide(ProblemInstance{Problem::Pos, kX, {}}), std::invalid_argument);
  AuxParams neg;
  neg.l = -1;
  CHECK_THROWS_AS(decide(ProblemInstance{Problem::Ord, kX, neg}), std::invalid_argument);

  AuxParams bit;
  bit.n = 3;
  bit.i = 2;
  CHECK(decide(ProblemInstance{Problem::Bit, int_to_slp(5), bit}).answer);
  AuxParams l2;
  l2.l = 2;
  CHECK(decide(ProblemInstance{Problem::Div2, int_to_slp(12), l2}).answer);
}

TEST_CASE("oracle handles count and trace queries") {
  OracleHandle pos = make_oracle(Problem::Pos);
  pos.set_tracing(true);
  CHECK(pos(int_to_slp(3)));
  CHECK_FALSE(pos(int_to_slp(-3)));
  CHECK(pos.calls() == 2);
  REQUIRE(pos.trace().size() == 2);
  CHECK(pos.trace()[1].answer == false);
  CHECK(pos.trace()[0].query.rfind("slp 0\n", 0) == 0);
  pos.reset();
  CHECK(pos.calls() == 0);

  int seen = 0;
  OracleHandle mock(Problem::ThreeSos, [&](const Slp&, const AuxParams&) {
    ++seen;
    return true;
  });
  CHECK(mock(int_to_slp(7)));
  CHECK(mock.calls() == 1);
  CHECK(seen == 1);
}
