#include "slpkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "slpkit/deciders.hpp"
#include "slpkit/eval.hpp"
#include "slpkit/numtheory.hpp"
#include "slpkit/polyreal.hpp"
#include "slpkit/reductions.hpp"

namespace slpkit {

namespace {

using ojson = nlohmann::ordered_json;

BigInt to_big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void enumerate_rec(std::size_t size, std::size_t num_vars, std::vector<Instruction>& prefix,
                   const std::function<void(const Slp&)>& visit) {
  if (prefix.size() == size) {
    visit(Slp(num_vars, prefix));
    return;
  }
  const std::size_t p = prefix.size() + 1;
  for (std::size_t k = 1; k <= num_vars; ++k) {
    prefix.push_back(Instruction::var(k));
    enumerate_rec(size, num_vars, prefix, visit);
    prefix.pop_back();
  }
  for (Op op : {Op::Add, Op::Sub, Op::Mul}) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        prefix.push_back({op, i, j});
        enumerate_rec(size, num_vars, prefix, visit);
        prefix.pop_back();
      }
    }
  }
}

// One unit of work: a program, or a half-open range of integers.
struct Unit {
  const Slp* slp = nullptr;
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t random_index = 0;
  bool is_random = false;
};

// Brute-force sums of two and three squares below a limit.
struct SquareTables {
  std::vector<bool> two, three;

  explicit SquareTables(std::uint64_t limit) : two(limit, false), three(limit, false) {
    for (std::uint64_t a = 0; a * a < limit; ++a) {
      for (std::uint64_t b = a; a * a + b * b < limit; ++b) {
        two[a * a + b * b] = true;
        for (std::uint64_t c = b; a * a + b * b + c * c < limit; ++c) three[a * a + b * b + c * c] = true;
      }
    }
  }
};

struct Context {
  const CampaignConfig& config;
  std::optional<SquareTables> tables;
};

struct Result {
  InstanceRecord rec;
  std::optional<double> metric;
};

Result pass(std::string instance, std::string expected, std::string got, std::uint64_t calls = 0) {
  Result r;
  r.rec.instance = std::move(instance);
  r.rec.expected = std::move(expected);
  r.rec.got = std::move(got);
  r.rec.oracle_calls = calls;
  r.rec.status = r.rec.expected == r.rec.got ? InstanceStatus::Pass : InstanceStatus::Fail;
  return r;
}

Result inconclusive(std::string instance, std::string why) {
  Result r;
  r.rec.instance = std::move(instance);
  r.rec.status = InstanceStatus::Inconclusive;
  r.rec.detail = std::move(why);
  return r;
}

Result failed(std::string instance, std::string expected, std::string got, std::string why) {
  Result r = pass(std::move(instance), std::move(expected), std::move(got));
  r.rec.status = InstanceStatus::Fail;
  r.rec.detail = std::move(why);
  return r;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

EvalBudget bits(std::size_t b) { return EvalBudget::with_bits(b); }

std::uint64_t instance_seed(const CampaignConfig& c, std::uint64_t index) {
  return derive_seed(c.seed ^ 0x5a5a5a5a5a5a5a5aULL, index);
}

DeciderOptions oracle_options(const CampaignConfig& c, std::uint64_t index) {
  DeciderOptions o;
  o.seed = instance_seed(c, index);
  return o;
}

OracleHandle wire(const Context& ctx, Problem p, const DeciderOptions& o = {}) {
  if (ctx.config.oracles == OracleWiring::True) return make_oracle(p, o);
  auto inner = std::make_shared<OracleHandle>(make_oracle(p, o));
  return OracleHandle(p, [inner](const Slp& q, const AuxParams& aux) { return !(*inner)(q, aux); });
}

// ---- per-campaign checks --------------------------------------------------

Result check_gadget(const Context& ctx, const Slp& p, bool three) {
  const std::string text = serialize(p);
  const BigInt n = eval_exact(p, {}, bits(ctx.config.max_bits));
  const Slp g = three ? equ_to_3sos(p) : equ_to_2sos(p);
  const std::size_t bound = three ? equ_to_3sos_bound(p.size()) : equ_to_2sos_bound(p.size());
  if (g.size() > bound) return failed(text, "size <= " + std::to_string(bound), std::to_string(g.size()), "size");
  DeciderOptions o;
  o.budget = bits(8 * ctx.config.max_bits + 64);
  OracleHandle oracle = wire(ctx, three ? Problem::ThreeSos : Problem::TwoSos, o);
  const bool got = oracle(g);
  return pass(text, yn(n == 0), yn(got), oracle.calls());
}

Result check_pos_via_3sos(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const BigInt n = eval_exact(p, {}, bits(ctx.config.max_bits));
  OracleHandle oracle = wire(ctx, Problem::ThreeSos, oracle_options(ctx.config, index));
  const bool got = pos_via_3sos(p, oracle);
  Result r = pass(text, yn(sgn(n) > 0), yn(got), oracle.calls());
  if (oracle.calls() > 5) {
    r.rec.status = InstanceStatus::Fail;
    r.rec.detail = "more than 5 oracle calls";
  }
  return r;
}

Result check_3sos_via_div2(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const BigInt n = eval_exact(p, {}, bits(ctx.config.max_bits));
  OracleHandle div2 = wire(ctx, Problem::Div2, oracle_options(ctx.config, index));
  OracleHandle pos = wire(ctx, Problem::Pos, oracle_options(ctx.config, index));
  const bool got = three_sos_via_div2_pos(p, div2, pos);
  Result r = pass(text, yn(is_3sos(n)), yn(got), div2.calls() + pos.calls());
  if (div2.calls() > 2 * p.size() + 3) {
    r.rec.status = InstanceStatus::Fail;
    r.rec.detail = std::to_string(div2.calls()) + " div2 queries exceed 2s+3";
  }
  return r;
}

Result check_reversal(const Context& ctx, const Slp& p) {
  const std::string text = serialize(p);
  const EvalBudget budget = bits(ctx.config.max_bits);
  const Polynomial f = expand_poly(p, budget);
  const Reversal r = reverse_slp(p);
  const std::size_t s = p.size();
  if (r.m > (BigInt(1) << s)) return failed(text, "m <= 2^s", r.m.get_str(), "degree bound");
  if (r.q.size() > reverse_bound(s)) {
    return failed(text, "size <= " + std::to_string(reverse_bound(s)), std::to_string(r.q.size()), "size");
  }
  const Polynomial want = f.reversed(r.m.get_ui());
  const Polynomial got = expand_poly(r.q, budget);
  Result out = pass(text, want.to_string(), got.to_string());
  out.metric = static_cast<double>(r.q.size());
  return out;
}

bool deg_at_most(const Polynomial& f, const BigInt& d) {
  return f.is_zero() || to_big(*f.degree()) <= d;
}

bool ord_at_least(const Polynomial& f, const BigInt& l) {
  return f.is_zero() || to_big(*f.order()) >= l;
}

Result check_deg_ord(const Context& ctx, const Slp& p) {
  const std::string text = serialize(p);
  const EvalBudget budget = bits(ctx.config.max_bits);
  const Polynomial f = expand_poly(p, budget);
  const std::size_t m = degree_upper_bound(p).get_ui();
  std::optional<Slp> cached_slp;
  Polynomial cached;
  auto expand_cached = [&](const Slp& q) -> const Polynomial& {
    if (!cached_slp || !(*cached_slp == q)) {
      cached = expand_poly(q, budget);
      cached_slp = q;
    }
    return cached;
  };
  std::size_t checked = 0;
  for (std::size_t k = 0; k <= m + 1; ++k) {
    const OrdInstance o = deg_to_ord(p, to_big(k));
    const bool want_deg = deg_at_most(f, to_big(k));
    const bool got_ord = ord_at_least(expand_cached(o.slp), o.l);
    if (want_deg != got_ord) {
      return failed(text, yn(want_deg), yn(got_ord), "deg_to_ord at d = " + std::to_string(k));
    }
    const OrdToDeg d = ord_to_deg(p, to_big(k));
    const bool want_ord = ord_at_least(f, to_big(k));
    const bool got_deg = deg_at_most(expand_cached(d.instance.slp), d.instance.d);
    if (want_ord != got_deg) {
      return failed(text, yn(want_ord), yn(got_deg), "ord_to_deg at l = " + std::to_string(k));
    }
    checked += 2;
  }
  return pass(text, std::to_string(checked) + " parameters preserved", std::to_string(checked) + " parameters preserved");
}

// Exact 2-adic valuation of f(B) capped at `cap` (nullopt: divisible by 2^cap).
std::optional<std::size_t> valuation_capped(const Slp& q, std::size_t cap) {
  const BigInt r = eval_mod_pow2(q, {}, cap);
  if (r == 0) return std::nullopt;
  return *trailing_zeros(r);
}

// Checks ord_to_div2 for every l in 0..m+1 at exponent e; returns an error
// message on mismatch, "unsound" when the condition fails, "" on success.
std::string div2_chain(const Slp& p, const Polynomial& f, std::size_t m, std::size_t e) {
  if (!ord_to_div2_sound(f, e)) return "unsound";
  const Div2Instance top = ord_to_div2(p, to_big(m + 1), e);
  if (top.slp.size() > ord_to_div2_bound(p.size(), e)) return "size bound exceeded at e = " + std::to_string(e);
  const std::size_t cap = top.l.get_ui() + 1;
  const auto v = valuation_capped(top.slp, cap);
  for (std::size_t l = 0; l <= m + 1; ++l) {
    const Div2Instance d = ord_to_div2(p, to_big(l), e);
    if (!(d.slp == top.slp)) return "program depends on l";
    const bool got = !v || to_big(*v) >= d.l;
    if (got != ord_at_least(f, to_big(l))) {
      return "mismatch at l = " + std::to_string(l) + ", e = " + std::to_string(e);
    }
  }
  return "";
}

Result check_ord_div2(const Context& ctx, const Slp& p) {
  const std::string text = serialize(p);
  const Polynomial f = expand_poly(p, bits(ctx.config.max_bits));
  const std::size_t m = degree_upper_bound(p).get_ui();
  std::vector<std::size_t> exponents = {ctx.config.div2_exponent};
  if (p.size() <= 3) exponents.push_back(3 * p.size());
  std::string summary;
  for (const std::size_t e : exponents) {
    const std::string err = div2_chain(p, f, m, e);
    if (err == "unsound") return inconclusive(text, "soundness condition fails at e = " + std::to_string(e));
    if (!err.empty()) return failed(text, "preserved", "not preserved", err);
    summary += (summary.empty() ? "e=" : ",") + std::to_string(e);
  }
  return pass(text, "preserved " + summary, "preserved " + summary);
}

Slp mdeg_program(std::uint64_t seed) {
  static constexpr std::size_t kMaxSize[] = {6, 4, 3};  // n s^2 <= 40
  const std::size_t n = 1 + seed % 3;
  const std::size_t size = 1 + (seed >> 8) % kMaxSize[n - 1];
  return gen_random_slp(size, n, derive_seed(seed, 1));
}

Result check_mdeg(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const MultiPolynomial f = expand_multi(p, bits(ctx.config.max_bits));
  const auto total = f.total_degree();
  const BigInt bound = mdeg_to_deg_bound(p.size(), p.num_vars());
  const std::size_t top = total ? *total + 1 : 2;
  std::uint64_t calls = 0;
  for (std::size_t d = 0; d <= top; ++d) {
    const DegInstance inst = mdeg_to_deg(p, to_big(d));
    if (to_big(inst.slp.size()) > bound) return failed(text, "size <= " + bound.get_str(), std::to_string(inst.slp.size()), "size");
    const bool want = !total || *total <= d;
    const bool got = decide_deg(inst.slp, inst.d, {}, instance_seed(ctx.config, index) + d).answer;
    ++calls;
    if (want != got) return failed(text, yn(want), yn(got), "d = " + std::to_string(d));
  }
  const std::string deg = total ? std::to_string(*total) : "-inf";
  return pass(text, "degree " + deg, "degree " + deg, calls);
}

// Even indices: squares g*g. Odd indices: programs whose expansion is not a square.
Slp squpoly_program(std::uint64_t seed, std::uint64_t index, std::size_t max_size, std::size_t max_bits) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = derive_seed(seed, attempt);
    const std::size_t size = 1 + s % max_size;
    Slp g = gen_random_slp(size, 1, derive_seed(s, 1));
    if (index % 2 == 0) {
      std::vector<Instruction> ins(g.instructions().begin(), g.instructions().end());
      ins.push_back(Instruction::mul(g.size(), g.size()));
      return Slp(1, std::move(ins));
    }
    try {
      const Polynomial f = expand_poly(g, bits(max_bits));
      if (!is_poly_square(f)) return g;
    } catch (const BudgetExceeded&) {
    }
  }
}

Result check_squpoly(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const bool square = index % 2 == 0;
  const std::uint64_t seed = instance_seed(ctx.config, index);
  if (square) {
    const Verdict v = decide_squ_poly_rand(p, std::nullopt, seed);
    return pass(text, "yes", yn(v.answer), 1);
  }
  const Verdict v = decide_squ_poly_rand(p, ctx.config.squpoly_exponent, seed);
  // One-sided error: a "yes" here is counted, not failed.
  Result r = pass(text, "no (one-sided)", v.answer ? "yes" : "no (one-sided)", 1);
  r.rec.status = InstanceStatus::Pass;
  r.metric = v.answer ? 0.0 : 1.0;
  return r;
}

BigInt centered(const BigInt& n, const BigInt& m) {
  const BigInt t = 2 * m + 1;
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), t.get_mpz_t());
  if (r > m) r -= t;
  return r;
}

Result check_pos_via_2sos(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const BigInt n = eval_exact(p, {}, bits(ctx.config.max_bits));
  const BigInt m = two_sos_bound_m(p.size());
  OracleHandle two = wire(ctx, Problem::TwoSos, oracle_options(ctx.config, index));
  OracleHandle equ = equ_via_2sos(two);
  const bool positive = sgn(n) > 0;
  Result r;
  if (abs(n) <= m) {
    const TwoSosCheck c = pos_via_2sos_verify(p, TwoSosWitness::small_value(n), equ, two);
    r = pass(text, std::string("valid, ") + yn(positive), std::string(c.valid ? "valid, " : "invalid, ") + yn(c.positive),
             two.calls());
  } else if (positive) {
    // Smallest shift with an exact 2SoS certificate.
    std::optional<BigInt> shift;
    for (BigInt s = 0; s <= m && !shift; ++s) {
      try {
        if (is_2sos(n + s)) shift = s;
      } catch (const FactorizationTimeout&) {
      }
    }
    if (!shift) return inconclusive(text, "no certifiable shift up to M");
    const TwoSosCheck c = pos_via_2sos_verify(p, TwoSosWitness::shift(*shift), equ, two);
    r = pass(text, "accepted", c.accepts_positive() ? "accepted" : "rejected", two.calls());
    r.rec.detail = "shift " + shift->get_str();
    r.metric = shift->get_d();
  } else {
    const TwoSosCheck a = pos_via_2sos_verify(p, TwoSosWitness::small_value(centered(n, m)), equ, two);
    const TwoSosCheck b = pos_via_2sos_verify(p, TwoSosWitness::shift(0), equ, two);
    r = pass(text, "rejected", a.accepts_positive() || b.accepts_positive() ? "accepted" : "rejected", two.calls());
  }
  return r;
}

// A random prefix, a base of 2 or 3 squared 5 or 6 times, and the prefix
// value added or subtracted: |N| > M = 2^(3s) with either sign.
Slp tower_program(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Slp prefix = gen_random_slp(1 + rng() % 2, 0, rng());
  std::vector<Instruction> ins(prefix.instructions().begin(), prefix.instructions().end());
  const std::size_t tail = ins.size();
  ins.push_back(Instruction::add(0, 0));
  if (rng() % 2) ins.push_back(Instruction::add(ins.size(), 0));
  const std::size_t squarings = 5 + rng() % 2;
  for (std::size_t k = 0; k < squarings; ++k) ins.push_back(Instruction::mul(ins.size(), ins.size()));
  const std::size_t top = ins.size();
  switch (rng() % 3) {
    case 0: ins.push_back(Instruction::add(top, tail)); break;
    case 1: ins.push_back(Instruction::sub(top, tail)); break;
    default: ins.push_back(Instruction::sub(tail, top)); break;
  }
  return Slp(0, std::move(ins));
}

// Dishonest witnesses against the first non-positive instances.
void pos_via_2sos_soundness(const CampaignConfig& c, const std::vector<const Slp*>& programs,
                            std::vector<Result>& results, CampaignReport& report) {
  std::uint64_t used = 0, tried = 0, violations = 0;
  for (std::size_t k = 0; k < programs.size() && used < c.dishonest_instances; ++k) {
    if (results[k].rec.status == InstanceStatus::Inconclusive) continue;
    const Slp& p = *programs[k];
    const BigInt n = eval_exact(p, {}, bits(c.max_bits));
    if (sgn(n) > 0) continue;
    ++used;
    const BigInt m = two_sos_bound_m(p.size());
    OracleHandle two = make_oracle(Problem::TwoSos);
    OracleHandle equ = equ_via_2sos(two);
    gmp_randclass gen(gmp_randinit_mt);
    gen.seed(static_cast<unsigned long>(derive_seed(c.seed ^ 0xd15d15ULL, k)));
    std::uint64_t bad = 0;
    for (std::uint64_t j = 0; j < c.dishonest_samples; ++j) {
      const BigInt u = gen.get_z_range(BigInt(2 * m + 1));
      const TwoSosWitness w = j % 2 == 0 ? TwoSosWitness::small_value(u - m) : TwoSosWitness::shift(u / 2);
      if (pos_via_2sos_verify(p, w, equ, two).accepts_positive()) ++bad;
      ++tried;
    }
    auto& rec = results[k].rec;
    rec.detail += (rec.detail.empty() ? "" : "; ") + std::to_string(c.dishonest_samples) + " dishonest witnesses, " +
                  std::to_string(bad) + " accepted";
    if (bad > 0) {
      rec.status = InstanceStatus::Fail;
      ++violations;
    }
  }
  report.metrics["dishonest_instances"] = std::to_string(used);
  report.metrics["dishonest_witnesses"] = std::to_string(tried);
  report.metrics["soundness_violations"] = std::to_string(violations);
  if (used < c.dishonest_instances) {
    report.aggregate_failures.push_back("only " + std::to_string(used) + " non-positive instances for soundness sampling");
  }
}

Polynomial minval_g(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t deg = 1 + rng() % 6;
  std::vector<BigInt> c(deg + 1);
  for (auto& x : c) x = static_cast<long>(rng() % 21) - 10;
  while (c.back() == 0) c.back() = static_cast<long>(rng() % 21) - 10;
  return Polynomial(std::move(c));
}

Result check_minval(const Context& ctx, std::uint64_t index) {
  const Polynomial g = minval_g(instance_seed(ctx.config, index));
  const Polynomial f = g * g + Polynomial::constant(1);
  const std::size_t d = *f.degree();
  const std::size_t tau = std::max<std::size_t>(1, bit_length(f.height()));
  const mpq_class bound = min_value_lower_bound({d, tau});
  // Grid x = k / 2^10, k in [-5000, 5000): scaled values F(k) = 2^{10 d} f(x).
  constexpr unsigned kShift = 10;
  const auto& c = f.coefficients();
  std::vector<BigInt> scaled(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) scaled[i] = c[i] << (kShift * (d - i));
  BigInt best;
  bool first = true;
  for (long k = -5000; k < 5000; ++k) {
    BigInt acc = 0;
    const BigInt x(k);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + scaled[i];
    if (first || acc < best) best = acc, first = false;
  }
  mpq_class sampled(best, BigInt(1) << (kShift * d));
  sampled.canonicalize();
  const std::string inst = f.to_string();
  Result r = pass(inst, "min >= bound", sampled >= bound ? "min >= bound" : "min < bound", 0);
  r.rec.detail = "sampled min " + fmt_double(sampled.get_d()) + ", d " + std::to_string(d) + ", tau " + std::to_string(tau);
  return r;
}

Result check_deciders(const Context& ctx, const Slp& p, std::uint64_t index) {
  const std::string text = serialize(p);
  const BigInt n = eval_exact(p, {}, bits(ctx.config.max_bits));
  const auto& t = *ctx.tables;
  std::string want, got;
  std::uint64_t calls = 0;
  auto add = [&](const char* name, bool w, bool g) {
    want += std::string(name) + "=" + yn(w) + " ";
    got += std::string(name) + "=" + yn(g) + " ";
    ++calls;
  };
  const EvalBudget budget = bits(ctx.config.max_bits);
  add("pos", sgn(n) > 0, decide_pos(p, budget).answer);
  add("equ", n == 0, decide_equ(p, instance_seed(ctx.config, index), budget).answer);
  add("squ", sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0, decide_squ(p, budget).answer);
  if (sgn(n) < 0 || n < BigInt(static_cast<unsigned long>(t.two.size()))) {
    const bool neg = sgn(n) < 0;
    add("3sos", !neg && t.three[n.get_ui()], decide_3sos(p, budget).answer);
    add("2sos", !neg && t.two[n.get_ui()], decide_2sos(p, budget).answer);
  }
  const auto tz = trailing_zeros(n);
  for (std::size_t l : {tz.value_or(5), tz.value_or(5) + 1}) {
    add("div2", !tz || *tz >= l, decide_div2(p, to_big(l), budget).answer);
  }
  const std::size_t width = (std::size_t{1} << p.size()) + 1;
  const BigInt mag = abs(n);
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, width}) {
    const bool w = i == width ? sgn(n) < 0 : mpz_tstbit(mag.get_mpz_t(), i) != 0;
    add("bit", w, decide_bit(p, width, i, budget).answer);
  }
  return pass(text, want, got, calls);
}

Result check_characterization(const Context& ctx, std::uint64_t lo, std::uint64_t hi) {
  const auto& t = *ctx.tables;
  for (std::uint64_t n = lo; n < hi; ++n) {
    if (is_3sos(n) != t.three[n]) {
      return failed(std::to_string(n), yn(t.three[n]), yn(!t.three[n]), "three squares at " + std::to_string(n));
    }
    if (is_2sos(BigInt(static_cast<unsigned long>(n))) != t.two[n]) {
      return failed(std::to_string(n), yn(t.two[n]), yn(!t.two[n]), "two squares at " + std::to_string(n));
    }
  }
  const std::string range = "[" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
  return pass(range, "match", "match");
}

Result check_nn23sos(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t n = lo; n < hi; ++n) {
    if (!is_3sos(n) && !is_3sos(n + 2)) return failed(std::to_string(n), "3sos(n) or 3sos(n+2)", "neither", "exception");
  }
  return pass("[" + std::to_string(lo) + ", " + std::to_string(hi) + ")", "no exceptions", "no exceptions");
}

// ---- campaign table -------------------------------------------------------

enum class Family { Programs, Numbers, Polys };

struct Campaign {
  Family family = Family::Programs;
  std::size_t vars = 0;
  std::optional<std::size_t> default_exhaustive;
  std::optional<std::pair<std::uint64_t, std::size_t>> default_random;
  std::uint64_t default_limit = 0;  // Numbers
  std::uint64_t block = 1;          // Numbers
  bool needs_tables = false;
  std::function<Slp(const CampaignConfig&, std::uint64_t)> random_program;
  std::function<Result(const Context&, const Unit&, std::uint64_t)> check;
};

const std::map<std::string, Campaign>& campaigns() {
  static const std::map<std::string, Campaign> table = [] {
    std::map<std::string, Campaign> t;
    const std::pair<std::uint64_t, std::size_t> r10k12{10000, 12};
    t["gadget-3sos"] = {Family::Programs, 0, 4, std::pair<std::uint64_t, std::size_t>{10000, 10}, 0, 1, false, {},
                        [](const Context& c, const Unit& u, std::uint64_t) { return check_gadget(c, *u.slp, true); }};
    t["gadget-2sos"] = {Family::Programs, 0, 4, std::pair<std::uint64_t, std::size_t>{10000, 10}, 0, 1, false, {},
                        [](const Context& c, const Unit& u, std::uint64_t) { return check_gadget(c, *u.slp, false); }};
    t["pos-via-3sos"] = {Family::Programs, 0, {}, r10k12, 0, 1, false, {},
                         [](const Context& c, const Unit& u, std::uint64_t i) { return check_pos_via_3sos(c, *u.slp, i); }};
    t["3sos-via-div2"] = {Family::Programs, 0, {}, r10k12, 0, 1, false, {},
                          [](const Context& c, const Unit& u, std::uint64_t i) { return check_3sos_via_div2(c, *u.slp, i); }};
    t["reversal"] = {Family::Programs, 1, {}, std::pair<std::uint64_t, std::size_t>{1000, 8}, 0, 1, false, {},
                     [](const Context& c, const Unit& u, std::uint64_t) { return check_reversal(c, *u.slp); }};
    t["deg-ord"] = {Family::Programs, 1, 4, std::pair<std::uint64_t, std::size_t>{1000, 8}, 0, 1, false, {},
                    [](const Context& c, const Unit& u, std::uint64_t) { return check_deg_ord(c, *u.slp); }};
    t["ord-div2"] = {Family::Programs, 1, 4, std::pair<std::uint64_t, std::size_t>{1000, 8}, 0, 1, false, {},
                     [](const Context& c, const Unit& u, std::uint64_t) { return check_ord_div2(c, *u.slp); }};
    t["mdeg"] = {Family::Programs, 2, {}, std::pair<std::uint64_t, std::size_t>{200, 6}, 0, 1, false,
                 [](const CampaignConfig& c, std::uint64_t j) { return mdeg_program(derive_seed(c.seed, j)); },
                 [](const Context& c, const Unit& u, std::uint64_t i) { return check_mdeg(c, *u.slp, i); }};
    t["squpoly"] = {Family::Programs, 1, {}, std::pair<std::uint64_t, std::size_t>{200, 5}, 0, 1, false,
                    [](const CampaignConfig& c, std::uint64_t j) {
                      return squpoly_program(derive_seed(c.seed, j), j, c.random_size.value_or(5), c.max_bits);
                    },
                    [](const Context& c, const Unit& u, std::uint64_t i) { return check_squpoly(c, *u.slp, i); }};
    t["pos-via-2sos"] = {Family::Programs, 0, {}, std::pair<std::uint64_t, std::size_t>{1000, 7}, 0, 1, false,
                         [](const CampaignConfig& c, std::uint64_t j) {
                           const std::uint64_t d = derive_seed(c.seed, j);
                           if (j % 2 == 1) return tower_program(d);
                           return gen_random_slp(1 + d % c.random_size.value_or(7), 0, derive_seed(d, 1));
                         },
                         [](const Context& c, const Unit& u, std::uint64_t i) { return check_pos_via_2sos(c, *u.slp, i); }};
    t["deciders"] = {Family::Programs, 0, 4, std::pair<std::uint64_t, std::size_t>{1000, 10}, 0, 1, true, {},
                     [](const Context& c, const Unit& u, std::uint64_t i) { return check_deciders(c, *u.slp, i); }};
    t["minval"] = {Family::Polys, 0, {}, std::pair<std::uint64_t, std::size_t>{100, 6}, 0, 1, false, {},
                   [](const Context& c, const Unit&, std::uint64_t i) { return check_minval(c, i); }};
    t["characterization"] = {Family::Numbers, 0, {}, {}, std::uint64_t{1} << 16, 1024, true, {},
                             [](const Context& c, const Unit& u, std::uint64_t) { return check_characterization(c, u.lo, u.hi); }};
    t["nn23sos"] = {Family::Numbers, 0, {}, {}, 1'000'001, 10000, false, {},
                    [](const Context&, const Unit& u, std::uint64_t) { return check_nn23sos(u.lo, u.hi); }};
    return t;
  }();
  return table;
}

struct Source {
  std::optional<std::size_t> exhaustive;
  std::optional<std::uint64_t> count;
  std::size_t size = 0;
};

Source resolve_source(const CampaignConfig& c, const Campaign& k) {
  Source s;
  if (!c.exhaustive && !c.random_count) {
    s.exhaustive = k.default_exhaustive;
    if (k.default_random) {
      s.count = k.default_random->first;
      s.size = c.random_size.value_or(k.default_random->second);
    }
    return s;
  }
  s.exhaustive = c.exhaustive;
  if (c.random_count) {
    s.count = c.random_count;
    s.size = c.random_size.value_or(k.default_random ? k.default_random->second : 8);
  }
  return s;
}

// Calls visit(index, unit) for every unit in order.
void for_each_unit(const CampaignConfig& c, const Campaign& k, const std::function<void(std::uint64_t, const Unit&)>& visit) {
  std::uint64_t index = 0;
  if (k.family == Family::Numbers) {
    const std::uint64_t limit = c.limit.value_or(k.default_limit);
    for (std::uint64_t lo = 0; lo < limit; lo += k.block) {
      Unit u;
      u.lo = lo;
      u.hi = std::min(limit, lo + k.block);
      visit(index++, u);
    }
    return;
  }
  const Source s = resolve_source(c, k);
  if (k.family == Family::Polys) {
    for (std::uint64_t j = 0; j < s.count.value_or(0); ++j) visit(index++, Unit{});
    return;
  }
  if (s.exhaustive) {
    for (std::size_t size = 1; size <= *s.exhaustive; ++size) {
      enumerate_slps(size, k.vars, [&](const Slp& p) {
        Unit u;
        u.slp = &p;
        visit(index++, u);
      });
    }
  }
  for (std::uint64_t j = 0; j < s.count.value_or(0); ++j) {
    Slp p = [&] {
      if (k.random_program) return k.random_program(c, j);
      const std::uint64_t d = derive_seed(c.seed, j);
      return gen_random_slp(1 + d % s.size, k.vars, derive_seed(d, 1));
    }();
    Unit u;
    u.slp = &p;
    u.random_index = j;
    u.is_random = true;
    visit(index++, u);
  }
}

}  // namespace

Slp gen_random_slp(std::size_t size, std::size_t num_vars, std::uint64_t seed, const OpWeights& weights) {
  if (size == 0) throw std::invalid_argument("gen_random_slp: size must be at least 1");
  const unsigned wvar = num_vars > 0 ? weights.var : 0;
  const std::uint64_t total = std::uint64_t{weights.add} + weights.sub + weights.mul + wvar;
  if (total == 0) throw std::invalid_argument("gen_random_slp: all weights are zero");
  std::mt19937_64 rng(seed);
  std::vector<Instruction> ins;
  ins.reserve(size);
  for (std::size_t p = 1; p <= size; ++p) {
    std::uint64_t r = rng() % total;
    if (r < wvar) {
      ins.push_back(Instruction::var(1 + rng() % num_vars));
      continue;
    }
    r -= wvar;
    const Op op = r < weights.add ? Op::Add : r < std::uint64_t{weights.add} + weights.sub ? Op::Sub : Op::Mul;
    const std::size_t i = rng() % p;
    const std::size_t j = rng() % p;
    ins.push_back({op, i, j});
  }
  return Slp(num_vars, std::move(ins));
}

void enumerate_slps(std::size_t size, std::size_t num_vars, const std::function<void(const Slp&)>& visit) {
  std::vector<Instruction> prefix;
  prefix.reserve(size);
  enumerate_rec(size, num_vars, prefix, visit);
}

std::uint64_t count_slps(std::size_t size, std::size_t num_vars) {
  std::uint64_t n = 1;
  for (std::uint64_t p = 1; p <= size; ++p) n *= num_vars + 3 * p * p;
  return n;
}

void CampaignConfig::validate() const {
  const auto& table = campaigns();
  const auto it = table.find(campaign);
  if (it == table.end()) throw std::invalid_argument("unknown campaign: " + campaign);
  const Campaign& k = it->second;
  if (exhaustive && *exhaustive > 6) throw std::invalid_argument("exhaustive size must be at most 6");
  if (exhaustive && *exhaustive == 0) throw std::invalid_argument("exhaustive size must be at least 1");
  if (random_size && *random_size == 0) throw std::invalid_argument("random size must be at least 1");
  if (random_size && !random_count) throw std::invalid_argument("--size needs --random");
  if (k.family == Family::Numbers && (exhaustive || random_count)) {
    throw std::invalid_argument(campaign + " scans a number range and takes no instance source");
  }
  if (k.family != Family::Numbers && limit) throw std::invalid_argument(campaign + " takes no limit");
  if ((k.random_program || k.family == Family::Polys || campaign == "squpoly") && exhaustive) {
    throw std::invalid_argument(campaign + " has no exhaustive family");
  }
  if (squpoly_min_no < 0 || squpoly_min_no > 1) throw std::invalid_argument("squpoly_min_no must lie in [0, 1]");
  if (max_bits == 0) throw std::invalid_argument("max_bits must be positive");
}

std::string CampaignConfig::to_json() const {
  ojson j;
  j["type"] = "config";
  j["campaign"] = campaign;
  j["exhaustive"] = exhaustive ? ojson(*exhaustive) : ojson(nullptr);
  j["random_count"] = random_count ? ojson(*random_count) : ojson(nullptr);
  j["random_size"] = random_size ? ojson(*random_size) : ojson(nullptr);
  j["seed"] = seed;
  j["max_bits"] = max_bits;
  j["div2_exponent"] = div2_exponent;
  j["squpoly_exponent"] = squpoly_exponent;
  j["squpoly_min_no"] = squpoly_min_no;
  j["dishonest_instances"] = dishonest_instances;
  j["dishonest_samples"] = dishonest_samples;
  j["limit"] = limit ? ojson(*limit) : ojson(nullptr);
  j["oracles"] = oracles == OracleWiring::True ? "true" : "negated";
  return j.dump();
}

std::string InstanceRecord::to_json() const {
  ojson j;
  j["type"] = "instance";
  j["index"] = index;
  j["instance"] = instance;
  j["expected"] = expected;
  j["got"] = got;
  j["oracle_calls"] = oracle_calls;
  j["status"] = status == InstanceStatus::Pass ? "pass" : status == InstanceStatus::Fail ? "fail" : "inconclusive";
  if (!detail.empty()) j["detail"] = detail;
  return j.dump();
}

std::string CampaignReport::summary_json() const {
  ojson j;
  j["type"] = "summary";
  j["campaign"] = config.campaign;
  j["total"] = total();
  j["pass"] = pass;
  j["fail"] = fail;
  j["inconclusive"] = inconclusive;
  j["ok"] = ok();
  j["metrics"] = ojson::object();
  for (const auto& [k, v] : metrics) j["metrics"][k] = v;
  j["aggregate_failures"] = aggregate_failures;
  return j.dump();
}

std::string CampaignReport::to_jsonl() const {
  std::string out = config.to_json() + "\n";
  for (const auto& r : records) out += r.to_json() + "\n";
  out += summary_json() + "\n";
  return out;
}

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : campaigns()) v.push_back(name);
    return v;
  }();
  return names;
}

CampaignReport run_campaign(const CampaignConfig& config) {
  config.validate();
  const Campaign& k = campaigns().at(config.campaign);
  Context ctx{config, std::nullopt};
  if (k.needs_tables) {
    ctx.tables.emplace(k.family == Family::Numbers ? config.limit.value_or(k.default_limit) : std::uint64_t{1} << 16);
  }

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<Result>> per_worker(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for_each_unit(config, k, [&](std::uint64_t index, const Unit& u) {
        if (index % workers != w) return;
        Result r;
        try {
          r = k.check(ctx, u, index);
        } catch (const BudgetExceeded& e) {
          r = inconclusive(u.slp ? serialize(*u.slp) : "", std::string("budget: ") + e.what());
        } catch (const FactorizationTimeout& e) {
          r = inconclusive(u.slp ? serialize(*u.slp) : "", std::string("factorization: ") + e.what());
        } catch (const std::exception& e) {
          r = failed(u.slp ? serialize(*u.slp) : "", "", "", std::string("error: ") + e.what());
        }
        r.rec.index = index;
        per_worker[w].push_back(std::move(r));
      });
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<Result> results;
  for (auto& v : per_worker)
    for (auto& r : v) results.push_back(std::move(r));
  std::sort(results.begin(), results.end(), [](const Result& a, const Result& b) { return a.rec.index < b.rec.index; });

  CampaignReport report;
  report.config = config;

  if (config.campaign == "pos-via-2sos") {
    std::vector<Slp> programs;
    for_each_unit(config, k, [&](std::uint64_t, const Unit& u) { programs.push_back(*u.slp); });
    std::vector<const Slp*> ptrs;
    for (const auto& p : programs) ptrs.push_back(&p);
    pos_via_2sos_soundness(config, ptrs, results, report);
    double max_shift = 0;
    std::uint64_t shifted = 0;
    for (const auto& r : results)
      if (r.metric) max_shift = std::max(max_shift, *r.metric), ++shifted;
    report.metrics["shift_instances"] = std::to_string(shifted);
    report.metrics["max_shift"] = std::to_string(static_cast<std::uint64_t>(max_shift));
  } else if (config.campaign == "squpoly") {
    std::uint64_t non_squares = 0, no = 0;
    for (const auto& r : results) {
      if (!r.metric) continue;
      ++non_squares;
      if (*r.metric > 0) ++no;
    }
    report.metrics["non_squares"] = std::to_string(non_squares);
    report.metrics["no_verdicts"] = std::to_string(no);
    if (non_squares > 0 && static_cast<double>(no) < config.squpoly_min_no * static_cast<double>(non_squares)) {
      report.aggregate_failures.push_back("only " + std::to_string(no) + " of " + std::to_string(non_squares) +
                                          " non-squares answered no");
    }
  } else if (config.campaign == "reversal") {
    double biggest = 0;
    for (const auto& r : results)
      if (r.metric) biggest = std::max(biggest, *r.metric);
    report.metrics["max_output_size"] = std::to_string(static_cast<std::uint64_t>(biggest));
  }

  for (auto& r : results) {
    switch (r.rec.status) {
      case InstanceStatus::Pass: ++report.pass; break;
      case InstanceStatus::Fail: ++report.fail; break;
      case InstanceStatus::Inconclusive: ++report.inconclusive; break;
    }
    report.records.push_back(std::move(r.rec));
  }
  return report;
}

}  // namespace slpkit
