#include "slpkit/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace slpkit {

namespace {

void check_assignment(const Slp& slp, std::size_t given) {
  if (given != slp.num_vars()) {
    throw std::invalid_argument("assignment has " + std::to_string(given) + " values, program has " +
                                std::to_string(slp.num_vars()) + " variables");
  }
}

void check_budget(const EvalBudget& budget) {
  if (budget.max_bits == 0 || budget.max_degree == 0 || budget.max_terms == 0) {
    throw std::invalid_argument("evaluation budget caps must be positive");
  }
}

std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const std::uint64_t s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

std::uint64_t submod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

}  // namespace

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

BigInt eval_exact(const Slp& slp, std::span<const BigInt> assignment, const EvalBudget& budget) {
  check_assignment(slp, assignment.size());
  check_budget(budget);
  std::vector<BigInt> v(slp.size() + 1);
  v[0] = 1;
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v[g] = assignment[ins.lhs - 1]; break;
      case Op::Add: v[g] = v[ins.lhs] + v[ins.rhs]; break;
      case Op::Sub: v[g] = v[ins.lhs] - v[ins.rhs]; break;
      case Op::Mul: {
        const std::size_t a = bit_length(v[ins.lhs]);
        const std::size_t b = bit_length(v[ins.rhs]);
        // A product of nonzero a- and b-bit values has at least a+b-1 bits.
        if (a != 0 && b != 0 && a + b - 1 > budget.max_bits) {
          throw BudgetExceeded(g, "product needs more than " + std::to_string(budget.max_bits) + " bits");
        }
        v[g] = v[ins.lhs] * v[ins.rhs];
        break;
      }
    }
    if (bit_length(v[g]) > budget.max_bits) {
      throw BudgetExceeded(g, "value exceeds " + std::to_string(budget.max_bits) + " bits");
    }
    ++g;
  }
  return v[slp.size()];
}

BigInt eval_mod(const Slp& slp, std::span<const BigInt> assignment, const BigInt& modulus) {
  check_assignment(slp, assignment.size());
  if (modulus < 2) throw std::invalid_argument("eval_mod: modulus must be at least 2");
  std::vector<BigInt> v(slp.size() + 1);
  v[0] = 1 % modulus;
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: mpz_fdiv_r(v[g].get_mpz_t(), assignment[ins.lhs - 1].get_mpz_t(), modulus.get_mpz_t()); break;
      case Op::Add: v[g] = v[ins.lhs] + v[ins.rhs]; if (v[g] >= modulus) v[g] -= modulus; break;
      case Op::Sub: v[g] = v[ins.lhs] - v[ins.rhs]; if (v[g] < 0) v[g] += modulus; break;
      case Op::Mul:
        mpz_mul(v[g].get_mpz_t(), v[ins.lhs].get_mpz_t(), v[ins.rhs].get_mpz_t());
        mpz_fdiv_r(v[g].get_mpz_t(), v[g].get_mpz_t(), modulus.get_mpz_t());
        break;
    }
    ++g;
  }
  return v[slp.size()];
}

std::uint64_t eval_mod(const Slp& slp, std::span<const std::uint64_t> assignment,
                       std::uint64_t modulus) {
  check_assignment(slp, assignment.size());
  if (modulus < 2) throw std::invalid_argument("eval_mod: modulus must be at least 2");
  std::vector<std::uint64_t> v(slp.size() + 1);
  v[0] = 1;
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v[g] = assignment[ins.lhs - 1] % modulus; break;
      case Op::Add: v[g] = addmod_u64(v[ins.lhs], v[ins.rhs], modulus); break;
      case Op::Sub: v[g] = submod_u64(v[ins.lhs], v[ins.rhs], modulus); break;
      case Op::Mul: v[g] = mulmod_u64(v[ins.lhs], v[ins.rhs], modulus); break;
    }
    ++g;
  }
  return v[slp.size()];
}

BigInt eval_mod_pow2(const Slp& slp, std::span<const BigInt> assignment, std::size_t bits) {
  check_assignment(slp, assignment.size());
  if (bits == 0) throw std::invalid_argument("eval_mod_pow2: need at least one bit");
  const mp_bitcnt_t nb = bits;
  std::vector<BigInt> v(slp.size() + 1);
  v[0] = 1;
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v[g] = assignment[ins.lhs - 1]; break;
      case Op::Add: v[g] = v[ins.lhs] + v[ins.rhs]; break;
      case Op::Sub: v[g] = v[ins.lhs] - v[ins.rhs]; break;
      case Op::Mul: mpz_mul(v[g].get_mpz_t(), v[ins.lhs].get_mpz_t(), v[ins.rhs].get_mpz_t()); break;
    }
    mpz_fdiv_r_2exp(v[g].get_mpz_t(), v[g].get_mpz_t(), nb);
    ++g;
  }
  BigInt out = v[slp.size()];
  mpz_fdiv_r_2exp(out.get_mpz_t(), out.get_mpz_t(), nb);
  return out;
}

Polynomial expand_poly(const Slp& slp, const EvalBudget& budget) {
  if (slp.num_vars() > 1) throw std::invalid_argument("expand_poly: program has more than one variable");
  check_budget(budget);
  std::vector<Polynomial> v(slp.size() + 1);
  v[0] = Polynomial::constant(1);
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v[g] = Polynomial::x(); break;
      case Op::Add: v[g] = v[ins.lhs] + v[ins.rhs]; break;
      case Op::Sub: v[g] = v[ins.lhs] - v[ins.rhs]; break;
      case Op::Mul: {
        const auto da = v[ins.lhs].degree();
        const auto db = v[ins.rhs].degree();
        if (da && db && *da + *db > budget.max_degree) {
          throw BudgetExceeded(g, "degree exceeds " + std::to_string(budget.max_degree));
        }
        v[g] = v[ins.lhs] * v[ins.rhs];
        break;
      }
    }
    for (const auto& c : v[g].coefficients()) {
      if (bit_length(c) > budget.max_bits) {
        throw BudgetExceeded(g, "coefficient exceeds " + std::to_string(budget.max_bits) + " bits");
      }
    }
    ++g;
  }
  return v[slp.size()];
}

MultiPolynomial expand_multi(const Slp& slp, const EvalBudget& budget) {
  check_budget(budget);
  const std::size_t n = slp.num_vars();
  std::vector<MultiPolynomial> v(slp.size() + 1, MultiPolynomial(n));
  v[0] = MultiPolynomial::constant(n, 1);
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    switch (ins.op) {
      case Op::Var: v[g] = MultiPolynomial::variable(n, ins.lhs); break;
      case Op::Add: v[g] = v[ins.lhs] + v[ins.rhs]; break;
      case Op::Sub: v[g] = v[ins.lhs] - v[ins.rhs]; break;
      case Op::Mul: {
        const std::size_t ta = v[ins.lhs].terms().size();
        const std::size_t tb = v[ins.rhs].terms().size();
        if (ta * tb > budget.max_terms * 16) throw BudgetExceeded(g, "too many term products");
        const auto da = v[ins.lhs].total_degree();
        const auto db = v[ins.rhs].total_degree();
        if (da && db && *da + *db > budget.max_degree) {
          throw BudgetExceeded(g, "degree exceeds " + std::to_string(budget.max_degree));
        }
        v[g] = v[ins.lhs] * v[ins.rhs];
        break;
      }
    }
    if (v[g].terms().size() > budget.max_terms) {
      throw BudgetExceeded(g, "term count exceeds " + std::to_string(budget.max_terms));
    }
    for (const auto& [e, c] : v[g].terms()) {
      if (bit_length(c) > budget.max_bits) {
        throw BudgetExceeded(g, "coefficient exceeds " + std::to_string(budget.max_bits) + " bits");
      }
    }
    ++g;
  }
  return v[slp.size()];
}

std::vector<std::uint64_t> expand_poly_mod(const Slp& slp, std::uint64_t modulus,
                                           const EvalBudget& budget) {
  if (slp.num_vars() > 1) throw std::invalid_argument("expand_poly_mod: program has more than one variable");
  if (modulus < 2) throw std::invalid_argument("expand_poly_mod: modulus must be at least 2");
  check_budget(budget);
  using Dense = std::vector<std::uint64_t>;
  auto trim = [](Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  std::vector<Dense> v(slp.size() + 1);
  v[0] = {1};
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    Dense& out = v[g];
    const Dense& a = v[ins.lhs];
    const Dense& b = v[ins.rhs];
    switch (ins.op) {
      case Op::Var: out = {0, 1}; break;
      case Op::Add:
      case Op::Sub:
        out.assign(std::max(a.size(), b.size()), 0);
        for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k];
        for (std::size_t k = 0; k < b.size(); ++k) {
          out[k] = ins.op == Op::Add ? addmod_u64(out[k], b[k], modulus)
                                     : submod_u64(out[k], b[k], modulus);
        }
        break;
      case Op::Mul:
        if (a.empty() || b.empty()) {
          out.clear();
          break;
        }
        if (a.size() + b.size() - 2 > budget.max_degree) {
          throw BudgetExceeded(g, "degree exceeds " + std::to_string(budget.max_degree));
        }
        out.assign(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == 0) continue;
          for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = addmod_u64(out[i + j], mulmod_u64(a[i], b[j], modulus), modulus);
          }
        }
        break;
    }
    trim(out);
    ++g;
  }
  return v[slp.size()];
}

BigInt degree_upper_bound(const Slp& slp) {
  std::vector<BigInt> m(slp.size() + 1);
  m[0] = 0;
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    m[g] = ins.op == Op::Var ? BigInt(1) : BigInt(m[ins.lhs] + m[ins.rhs]);
    ++g;
  }
  return m[slp.size()];
}

bool bit_of(const Slp& slp, std::size_t n, std::size_t i, const EvalBudget& budget) {
  if (slp.num_vars() != 0) throw std::invalid_argument("bit_of: program must be variable-free");
  if (i > n) throw std::invalid_argument("bit_of: index beyond the sign bit");
  const BigInt value = eval_exact(slp, {}, budget);
  const BigInt magnitude = abs(value);
  if (bit_length(magnitude) > n) {
    throw PrecisionViolation("|N| does not fit in " + std::to_string(n) + " bits");
  }
  if (i == n) return value < 0;
  return mpz_tstbit(magnitude.get_mpz_t(), i) != 0;
}

}  // namespace slpkit
