#include "slpkit/deciders.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <random>
#include <stdexcept>

#include "slpkit/polyreal.hpp"

namespace slpkit {

namespace {

struct NameEntry {
  Problem problem;
  std::string_view name;
};

constexpr std::array<NameEntry, 11> kNames = {{
    {Problem::Pos, "posslp"},
    {Problem::Equ, "equslp"},
    {Problem::Bit, "bitslp"},
    {Problem::Div2, "div2slp"},
    {Problem::ThreeSos, "3sosslp"},
    {Problem::TwoSos, "2sosslp"},
    {Problem::Squ, "squslp"},
    {Problem::Deg, "degslp"},
    {Problem::Ord, "ordslp"},
    {Problem::PosPoly, "pospolyslp"},
    {Problem::SquPoly, "squpolyslp"},
}};

void require_variable_free(const Slp& slp, const char* who) {
  if (slp.num_vars() != 0) throw std::invalid_argument(std::string(who) + ": program must be variable-free");
}

void require_univariate(const Slp& slp, const char* who) {
  if (slp.num_vars() > 1) throw std::invalid_argument(std::string(who) + ": program must be univariate");
}

std::uint64_t random_prime62(std::mt19937_64& rng) {
  for (;;) {
    const std::uint64_t c = (rng() >> 2) | (std::uint64_t{1} << 61) | 1;
    if (is_prime_u64(c)) return c;
  }
}

// The kEquPrimes primes drawn from `seed`; the last list is cached per thread
// since sweeps reuse one seed for many instances.
const std::vector<std::uint64_t>& primes_for_seed(std::uint64_t seed) {
  thread_local std::uint64_t cached_seed = 0;
  thread_local std::vector<std::uint64_t> cached;
  if (cached.empty() || cached_seed != seed) {
    std::mt19937_64 rng(seed);
    cached.clear();
    for (int k = 0; k < kEquPrimes; ++k) cached.push_back(random_prime62(rng));
    cached_seed = seed;
  }
  return cached;
}

Verdict make(bool answer, std::string provenance, std::uint64_t gate_evals) {
  Verdict v;
  v.answer = answer;
  v.provenance = std::move(provenance);
  v.cost.gate_evals = gate_evals;
  return v;
}

std::size_t to_size(const BigInt& v, const char* what) {
  if (sgn(v) < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
  if (!v.fits_ulong_p()) throw std::invalid_argument(std::string(what) + " is too large");
  return v.get_ui();
}

BigInt exact_value(const Slp& slp, const EvalBudget& budget) { return eval_exact(slp, {}, budget); }

}  // namespace

std::string_view problem_name(Problem p) {
  for (const auto& e : kNames) {
    if (e.problem == p) return e.name;
  }
  return "?";
}

std::optional<Problem> problem_from_name(std::string_view name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.problem;
  }
  return std::nullopt;
}

const std::vector<Problem>& all_problems() {
  static const std::vector<Problem> all = [] {
    std::vector<Problem> out;
    for (const auto& e : kNames) out.push_back(e.problem);
    return out;
  }();
  return all;
}

std::string AuxParams::to_string() const {
  std::string out;
  auto put = [&](const char* key, const std::optional<BigInt>& v) {
    if (!v) return;
    if (!out.empty()) out += ' ';
    out += key;
    out += '=';
    out += v->get_str();
  };
  put("l", l);
  put("d", d);
  put("n", n);
  put("i", i);
  return out;
}

void validate_instance(const ProblemInstance& inst) {
  const auto& a = inst.aux;
  const bool want_l = inst.problem == Problem::Div2 || inst.problem == Problem::Ord;
  const bool want_d = inst.problem == Problem::Deg;
  const bool want_ni = inst.problem == Problem::Bit;
  const std::string who(problem_name(inst.problem));
  auto check = [&](const std::optional<BigInt>& v, bool wanted, const char* key) {
    if (wanted && !v) throw std::invalid_argument(who + " needs parameter " + key);
    if (!wanted && v) throw std::invalid_argument(who + " takes no parameter " + key);
    if (v && sgn(*v) < 0) throw std::invalid_argument(std::string("parameter ") + key + " must be non-negative");
  };
  check(a.l, want_l, "l");
  check(a.d, want_d, "d");
  check(a.n, want_ni, "n");
  check(a.i, want_ni, "i");
  switch (inst.problem) {
    case Problem::Deg:
    case Problem::Ord:
    case Problem::PosPoly:
    case Problem::SquPoly:
      require_univariate(inst.slp, who.c_str());
      break;
    default:
      require_variable_free(inst.slp, who.c_str());
      break;
  }
}

Verdict decide_pos(const Slp& slp, const EvalBudget& budget) {
  require_variable_free(slp, "decide_pos");
  try {
    return make(sgn(exact_value(slp, budget)) > 0, "exact", slp.size());
  } catch (const BudgetExceeded&) {
    EvalBudget doubled = budget;
    doubled.max_bits *= 2;
    return make(sgn(exact_value(slp, doubled)) > 0, "exact (doubled budget)", 2 * slp.size());
  }
}

Verdict decide_equ(const Slp& slp, std::uint64_t seed, const EvalBudget& budget) {
  require_variable_free(slp, "decide_equ");
  std::uint64_t evals = 0;
  for (const std::uint64_t p : primes_for_seed(seed)) {
    evals += slp.size();
    if (eval_mod(slp, std::span<const std::uint64_t>{}, p) != 0) return make(false, "modular", evals);
  }
  try {
    const BigInt n = exact_value(slp, budget);
    return make(n == 0, "exact", evals + slp.size());
  } catch (const BudgetExceeded&) {
    Verdict v = make(true, "randomized", evals);
    v.seed = seed;
    return v;
  }
}

Verdict decide_bit(const Slp& slp, std::size_t n, std::size_t i, const EvalBudget& budget) {
  return make(bit_of(slp, n, i, budget), "exact", slp.size());
}

Verdict decide_div2(const Slp& slp, const BigInt& l, const EvalBudget& budget) {
  require_variable_free(slp, "decide_div2");
  if (sgn(l) < 0) throw std::invalid_argument("decide_div2: l must be non-negative");
  if (l == 0) return make(true, "exact", 0);
  try {
    const BigInt n = exact_value(slp, budget);
    if (n == 0) return make(true, "exact", slp.size());
    const auto tz = trailing_zeros(n);
    return make(BigInt(static_cast<unsigned long>(*tz)) >= l, "exact", slp.size());
  } catch (const BudgetExceeded&) {
    if (l > kDiv2Cap) {
      throw BudgetExceeded(slp.size(), "div2 exponent " + l.get_str() + " beyond the desk cap");
    }
    const BigInt r = eval_mod_pow2(slp, {}, l.get_ui());
    return make(r == 0, "modular", 2 * slp.size());
  }
}

Verdict decide_3sos(const Slp& slp, const EvalBudget& budget) {
  require_variable_free(slp, "decide_3sos");
  return make(is_3sos(exact_value(slp, budget)), "characterization", slp.size());
}

Verdict decide_2sos(const Slp& slp, const EvalBudget& budget, const FactorBudget& factor) {
  require_variable_free(slp, "decide_2sos");
  return make(is_2sos(exact_value(slp, budget), factor), "characterization", slp.size());
}

Verdict decide_squ(const Slp& slp, const EvalBudget& budget) {
  require_variable_free(slp, "decide_squ");
  return make(is_perfect_square(exact_value(slp, budget)), "exact (desk stand-in)", slp.size());
}

Verdict decide_deg(const Slp& slp, const BigInt& d, const EvalBudget& budget, std::uint64_t seed) {
  require_univariate(slp, "decide_deg");
  if (sgn(d) < 0) throw std::invalid_argument("decide_deg: d must be non-negative");
  try {
    const Polynomial f = expand_poly(slp, budget);
    const bool yes = f.is_zero() || BigInt(static_cast<unsigned long>(*f.degree())) <= d;
    return make(yes, "exact", slp.size());
  } catch (const BudgetExceeded&) {
  }
  // A residue degree never exceeds the true degree, and matches it unless
  // every prime divides the leading coefficient.
  long best = -1;
  for (const std::uint64_t p : primes_for_seed(seed)) {
    const auto coeffs = expand_poly_mod(slp, p, budget);
    best = std::max(best, static_cast<long>(coeffs.size()) - 1);
  }
  Verdict v = make(best < 0 || BigInt(best) <= d, "randomized", (1 + kEquPrimes) * slp.size());
  v.seed = seed;
  return v;
}

Verdict decide_ord(const Slp& slp, const BigInt& l, const EvalBudget& budget, std::uint64_t seed) {
  require_univariate(slp, "decide_ord");
  if (sgn(l) < 0) throw std::invalid_argument("decide_ord: l must be non-negative");
  try {
    const Polynomial f = expand_poly(slp, budget);
    const bool yes = f.is_zero() || BigInt(static_cast<unsigned long>(*f.order())) >= l;
    return make(yes, "exact", slp.size());
  } catch (const BudgetExceeded&) {
  }
  std::optional<std::size_t> best;
  for (const std::uint64_t p : primes_for_seed(seed)) {
    const auto coeffs = expand_poly_mod(slp, p, budget);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] != 0) {
        best = best ? std::min(*best, j) : j;
        break;
      }
    }
  }
  Verdict v = make(!best || BigInt(static_cast<unsigned long>(*best)) >= l, "randomized",
                   (1 + kEquPrimes) * slp.size());
  v.seed = seed;
  return v;
}

Verdict decide_pos_poly(const Slp& slp, const EvalBudget& budget) {
  require_univariate(slp, "decide_pos_poly");
  return make(is_positive_poly(expand_poly(slp, budget)), "exact (Sturm)", slp.size());
}

Verdict decide_squ_poly_rand(const Slp& slp, std::optional<std::size_t> sample_exponent, std::uint64_t seed,
                             const EvalBudget& budget) {
  require_univariate(slp, "decide_squ_poly_rand");
  const std::size_t e = sample_exponent.value_or(200 * std::max<std::size_t>(slp.size(), 1));
  if (e == 0) throw std::invalid_argument("decide_squ_poly_rand: sample exponent must be positive");
  gmp_randclass gen(gmp_randinit_mt);
  gen.seed(seed);
  std::vector<BigInt> point;
  if (slp.num_vars() == 1) point.push_back(BigInt(gen.get_z_bits(e)) + 1);
  const BigInt value = eval_exact(slp, point, budget);
  Verdict v = make(is_perfect_square(value), "randomized", slp.size());
  v.seed = seed;
  return v;
}

Verdict decide(const ProblemInstance& inst, const DeciderOptions& opts) {
  validate_instance(inst);
  const auto& a = inst.aux;
  const auto& s = inst.slp;
  switch (inst.problem) {
    case Problem::Pos: return decide_pos(s, opts.budget);
    case Problem::Equ: return decide_equ(s, opts.seed, opts.budget);
    case Problem::Bit: return decide_bit(s, to_size(*a.n, "n"), to_size(*a.i, "i"), opts.budget);
    case Problem::Div2: return decide_div2(s, *a.l, opts.budget);
    case Problem::ThreeSos: return decide_3sos(s, opts.budget);
    case Problem::TwoSos: return decide_2sos(s, opts.budget, opts.factor);
    case Problem::Squ: return decide_squ(s, opts.budget);
    case Problem::Deg: return decide_deg(s, *a.d, opts.budget, opts.seed);
    case Problem::Ord: return decide_ord(s, *a.l, opts.budget, opts.seed);
    case Problem::PosPoly: return decide_pos_poly(s, opts.budget);
    case Problem::SquPoly: return decide_squ_poly_rand(s, opts.sample_exponent, opts.seed, opts.budget);
  }
  throw std::logic_error("unhandled problem");
}

std::string describe_query(const Slp& slp, const AuxParams& aux) {
  std::string q = slp.size() <= 64 ? serialize(slp) : "slp of size " + std::to_string(slp.size());
  const std::string extra = aux.to_string();
  if (!extra.empty()) q += " [" + extra + "]";
  return q;
}

bool OracleHandle::operator()(const Slp& slp, const AuxParams& aux) {
  ++calls_;
  const bool answer = fn_(slp, aux);
  if (tracing_) trace_.push_back({problem_, describe_query(slp, aux), answer});
  return answer;
}

OracleHandle make_oracle(Problem problem, const DeciderOptions& opts) {
  auto counter = std::make_shared<std::uint64_t>(0);
  return OracleHandle(problem, [problem, opts, counter](const Slp& slp, const AuxParams& aux) {
    DeciderOptions local = opts;
    local.seed = derive_seed(opts.seed, (*counter)++);
    return decide(ProblemInstance{problem, slp, aux}, local).answer;
  });
}

}  // namespace slpkit
