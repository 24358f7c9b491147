#pragma once

// Test-only helpers: a program generator and brute-force oracles that do not
// go through the library code paths under test.

#include <random>
#include <set>
#include <vector>

#include "slpkit/slp.hpp"

namespace slpkit::testing {

inline Slp random_program(std::mt19937_64& rng, std::size_t size, std::size_t num_vars) {
  std::vector<Instruction> instrs;
  for (std::size_t p = 1; p <= size; ++p) {
    const std::size_t kinds = num_vars > 0 ? 4 : 3;
    const std::size_t kind = rng() % kinds;
    const std::size_t i = rng() % p;
    const std::size_t j = rng() % p;
    if (kind == 3) {
      instrs.push_back(Instruction::var(1 + rng() % num_vars));
    } else {
      instrs.push_back({static_cast<Op>(kind + 1), i, j});
    }
  }
  return Slp(num_vars, std::move(instrs));
}

// Value of a variable-free program by a direct recursive walk.
inline BigInt naive_value(const Slp& slp, const std::vector<BigInt>& vars = {}) {
  std::vector<BigInt> v{BigInt(1)};
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v.push_back(vars.at(ins.lhs - 1)); break;
      case Op::Add: v.push_back(v[ins.lhs] + v[ins.rhs]); break;
      case Op::Sub: v.push_back(v[ins.lhs] - v[ins.rhs]); break;
      case Op::Mul: v.push_back(v[ins.lhs] * v[ins.rhs]); break;
    }
  }
  return v.back();
}

// All sums of `k` squares of integers in [0, bound] that lie below limit.
inline std::vector<bool> sums_of_squares_table(unsigned k, std::uint64_t limit, std::uint64_t bound) {
  std::vector<bool> hit(limit, false);
  std::vector<std::uint64_t> cur = {0};
  for (unsigned round = 0; round < k; ++round) {
    std::vector<bool> seen(limit, false);
    std::vector<std::uint64_t> next;
    for (const auto base : cur) {
      for (std::uint64_t a = 0; a <= bound; ++a) {
        const std::uint64_t v = base + a * a;
        if (v >= limit) break;
        if (!seen[v]) {
          seen[v] = true;
          next.push_back(v);
        }
      }
    }
    cur = std::move(next);
  }
  for (const auto v : cur) hit[v] = true;
  return hit;
}

}  // namespace slpkit::testing
