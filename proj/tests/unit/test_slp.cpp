#include <functional>
#include <random>

#include "doctest.h"
#include "slpkit/eval.hpp"
#include "slpkit/slp.hpp"
#include "test_support.hpp"

using namespace slpkit;

namespace {

// Every program with `size` instructions over num_vars variables.
void enumerate(std::size_t num_vars, std::size_t size, std::vector<Instruction>& prefix,
               const std::function<void(const Slp&)>& visit) {
  if (prefix.size() == size) {
    visit(Slp(num_vars, prefix));
    return;
  }
  const std::size_t p = prefix.size() + 1;
  for (std::size_t k = 1; k <= num_vars; ++k) {
    prefix.push_back(Instruction::var(k));
    enumerate(num_vars, size, prefix, visit);
    prefix.pop_back();
  }
  for (Op op : {Op::Add, Op::Sub, Op::Mul}) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        prefix.push_back({op, i, j});
        enumerate(num_vars, size, prefix, visit);
        prefix.pop_back();
      }
    }
  }
}

}  // namespace

TEST_CASE("validate reports forward references and bad variables") {
  CHECK(validate_instructions(1, std::vector{Instruction::var(1)}).empty());

  auto forward = validate_instructions(0, std::vector{Instruction::add(0, 5)});
  REQUIRE(forward.size() == 1);
  CHECK(forward[0].position == 1);
  CHECK(forward[0].message == "operand 5 >= position 1");

  auto bad_var = validate_instructions(1, std::vector{Instruction::var(2)});
  REQUIRE(bad_var.size() == 1);
  CHECK(bad_var[0].message.find("variable index out of range") != std::string::npos);

  CHECK_THROWS_AS(Slp(0, {Instruction::mul(1, 0)}), ValidationError);
}

TEST_CASE("parse accepts the text format") {
  const Slp two = parse("slp 0\nadd 0 0\n");
  CHECK(two.num_vars() == 0);
  CHECK(two.size() == 1);
  CHECK(two.at(1) == Instruction::add(0, 0));
  CHECK(eval_exact(two) == 2);

  const Slp square = parse("slp 1\nvar 1\nmul 1 1\n");
  const BigInt x[] = {BigInt(7)};
  CHECK(eval_exact(square, x) == 49);

  const Slp commented = parse("# a comment\nslp 0   # header\n\nadd 0 0 # two\nmul 1 1\n");
  CHECK(serialize(commented) == "slp 0\nadd 0 0\nmul 1 1\n");
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse("slp 0\nbogus 1 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("slp 0\ndiv 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse("add 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("slp 0\nadd 0 -1\n"), ParseError);
  CHECK_THROWS_AS(parse("slp 0\nadd 0\n"), ParseError);
  CHECK_THROWS_AS(parse("slp 0\nadd 0 1\n"), ValidationError);
  CHECK_THROWS_AS(parse("slp 1\nvar 2\n"), ValidationError);
}

TEST_CASE("serialize produces the canonical form") {
  CHECK(serialize(Slp(0, {Instruction::add(0, 0)})) == "slp 0\nadd 0 0\n");
  CHECK(serialize(Slp(1, {Instruction::var(1)})) == "slp 1\nvar 1\n");
}

TEST_CASE("round trip over every small program") {
  std::size_t visited = 0;
  std::vector<Instruction> prefix;
  for (std::size_t vars : {0u, 1u}) {
    for (std::size_t size = 0; size <= 3; ++size) {
      enumerate(vars, size, prefix, [&](const Slp& slp) {
        CHECK(validate(slp).empty());
        const std::string text = serialize(slp);
        const Slp back = parse(text);
        CHECK(back == slp);
        CHECK(serialize(back) == text);
        ++visited;
      });
    }
  }
  CHECK(visited > 1000);
}

TEST_CASE("int_to_slp") {
  CHECK(int_to_slp(1).size() == 1);
  CHECK(eval_exact(int_to_slp(1)) == 1);
  CHECK(serialize(int_to_slp(0)) == "slp 0\nsub 0 0\n");

  const Slp thirteen = int_to_slp(13);
  CHECK(eval_exact(thirteen) == 13);
  CHECK(thirteen.size() <= 2 * 4 + 2);

  std::mt19937_64 rng(7);
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(11);
  for (int trial = 0; trial < 10000; ++trial) {
    BigInt k = gen.get_z_bits(1 + rng() % 255);
    if (rng() % 2) k = -k;
    const Slp p = int_to_slp(k);
    REQUIRE(testing::naive_value(p) == k);
    CHECK(p.size() <= 2 * bit_length(k) + 2);
  }
}

TEST_CASE("pow2_slp") {
  CHECK(eval_exact(pow2_slp(0)) == 1);

  const Slp p5 = pow2_slp(5);
  CHECK(eval_exact(p5) == 32);
  CHECK(p5.size() <= 2 * 3 * 3);

  // 1024 modular doublings as the independent route.
  const std::uint64_t mod = 1'000'000'007ULL;
  std::uint64_t expected = 1;
  for (int i = 0; i < 1024; ++i) expected = expected * 2 % mod;
  CHECK(eval_mod(pow2_slp(1024), std::span<const std::uint64_t>{}, mod) == expected);

  for (unsigned t = 0; t <= 4096; ++t) {
    const Slp p = pow2_slp(t);
    BigInt want;
    mpz_setbit(want.get_mpz_t(), t);
    REQUIRE(testing::naive_value(p) == want);
    const std::size_t bl = bit_length(BigInt(t));
    CHECK(p.size() <= (bl + 1) * (bl + 1));
  }
}

TEST_CASE("shift_slp") {
  CHECK(eval_exact(shift_slp(int_to_slp(5), 2)) == 7);
  const Slp p = int_to_slp(12345);
  CHECK(shift_slp(p, 0) == p);
  CHECK(eval_exact(shift_slp(int_to_slp(-1), 2)) == 1);
  CHECK(eval_exact(shift_slp(int_to_slp(3), -10)) == -7);

  const Slp sq = parse("slp 1\nvar 1\nmul 1 1\n");
  const BigInt x[] = {BigInt(4)};
  CHECK(eval_exact(shift_slp(sq, 3), x) == 19);
}

TEST_CASE("builder splicing substitutes variables") {
  const Slp sq = parse("slp 1\nvar 1\nmul 1 1\n");
  SlpBuilder b;
  const std::size_t three = b.constant(3);
  const std::size_t map[] = {three};
  const std::size_t out = b.splice(sq, map);
  CHECK(eval_exact(std::move(b).finish(out)) == 9);
}
