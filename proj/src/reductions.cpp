#include "slpkit/reductions.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "json.hpp"
#include "slpkit/errors.hpp"
#include "slpkit/eval.hpp"

namespace slpkit {

namespace {

// A builder holding a copy of slp, and the gate carrying N.
std::pair<SlpBuilder, std::size_t> extend(const Slp& slp) {
  SlpBuilder b(slp.num_vars());
  const std::size_t n = b.splice(slp);
  return {std::move(b), n};
}

BigInt to_big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

// N - k as a program.
Slp minus_constant(const Slp& slp, const BigInt& k) {
  auto [b, n] = extend(slp);
  const std::size_t c = b.constant(k);
  return std::move(b).finish(b.sub(n, c));
}

// Residue of N modulo 2M+1 taken in [-M, M].
BigInt centered_residue(const Slp& slp, const BigInt& m) {
  const BigInt t = 2 * m + 1;
  BigInt r = eval_mod(slp, {}, t);
  if (r > m) r -= t;
  return r;
}

}  // namespace

std::string ReductionRecord::to_json() const {
  nlohmann::ordered_json j;
  j["reduction"] = name;
  j["input_size"] = input_size;
  j["output_size"] = output_size;
  j["size_bound"] = size_bound.get_str();
  j["size_ok"] = size_ok();
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["answer"] = answer ? nlohmann::ordered_json(*answer) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  for (const auto& q : trace) {
    t.push_back({{"problem", std::string(problem_name(q.problem))}, {"query", q.query}, {"answer", q.answer}});
  }
  j["trace"] = t;
  j["input"] = input;
  j["outputs"] = outputs;
  return j.dump();
}

Slp equ_to_3sos(const Slp& slp) {
  auto [b, n] = extend(slp);
  const std::size_t n2 = b.mul(n, n);
  const std::size_t n4 = b.mul(n2, n2);
  const std::size_t n8 = b.mul(n4, n4);
  const std::size_t t2 = b.add(n8, n8);
  const std::size_t t4 = b.add(t2, t2);
  const std::size_t t8 = b.add(t4, t4);
  return std::move(b).finish(b.sub(t8, n8));
}

Slp equ_to_2sos(const Slp& slp) {
  auto [b, n] = extend(slp);
  const std::size_t n2 = b.mul(n, n);
  const std::size_t n4 = b.mul(n2, n2);
  const std::size_t t2 = b.add(n4, n4);
  return std::move(b).finish(b.add(t2, n4));
}

OracleHandle equ_via_2sos(OracleHandle& two_sos) {
  return OracleHandle(Problem::Equ,
                      [&two_sos](const Slp& slp, const AuxParams&) { return two_sos(equ_to_2sos(slp)); });
}

bool pos_via_3sos(const Slp& slp, OracleHandle& three_sos) {
  for (int c = 0; c <= 2; ++c) {
    if (three_sos(equ_to_3sos(shift_slp(slp, c)))) return false;  // N in {0, -1, -2}
  }
  if (three_sos(slp)) return true;
  // N and N+2 cannot both fail for N > 0.
  return three_sos(shift_slp(slp, 2));
}

bool three_sos_via_div2_pos(const Slp& slp, OracleHandle& div2, OracleHandle& pos) {
  const std::size_t s = slp.size();
  const BigInt top = BigInt(1) << s;  // |N| <= 2^(2^s), so N > 0 has at most 2^s trailing zeros
  auto divisible = [&](const Slp& p, const BigInt& l) {
    AuxParams aux;
    aux.l = l;
    return div2(p, aux);
  };
  if (!pos(slp)) return divisible(slp, top + 1);  // only zero is divisible that far

  BigInt lo = 0, hi = top + 1;  // div2 holds at lo, fails at hi
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) / 2;
    if (divisible(slp, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const BigInt& t = lo;
  if (mpz_odd_p(t.get_mpz_t())) return true;

  SlpBuilder b;
  const std::size_t n = b.splice(slp);
  const std::size_t p = b.pow2(t);
  const Slp shifted = std::move(b).finish(b.add(n, p));
  return !divisible(shifted, t + 3);
}

Reversal reverse_slp(const Slp& slp) {
  if (slp.num_vars() > 1) throw std::invalid_argument("reverse_slp: program must be univariate");
  SlpBuilder b(slp.num_vars());
  // Per gate: m_g, a gate for x^{m_g}, a gate for x^{m_g} R_g(1/x).
  std::vector<BigInt> m(slp.size() + 1);
  std::vector<std::size_t> e(slp.size() + 1, 0), r(slp.size() + 1, 0);
  std::optional<std::size_t> x;
  auto mul = [&](std::size_t a, std::size_t c) {
    if (a == SlpBuilder::one()) return c;
    if (c == SlpBuilder::one()) return a;
    return b.mul(a, c);
  };
  std::size_t g = 1;
  for (const auto& ins : slp.instructions()) {
    const std::size_t i = ins.lhs, j = ins.rhs;
    switch (ins.op) {
      case Op::Var:
        if (!x) x = b.var(1);
        m[g] = 1;
        e[g] = *x;
        r[g] = SlpBuilder::one();
        break;
      case Op::Add:
      case Op::Sub: {
        m[g] = m[i] + m[j];
        e[g] = mul(e[i], e[j]);
        const std::size_t left = mul(e[j], r[i]);
        const std::size_t right = mul(e[i], r[j]);
        r[g] = ins.op == Op::Add ? b.add(left, right) : b.sub(left, right);
        break;
      }
      case Op::Mul:
        m[g] = m[i] + m[j];
        e[g] = mul(e[i], e[j]);
        r[g] = mul(r[i], r[j]);
        break;
    }
    ++g;
  }
  const std::size_t out = slp.size();
  return {m[out], std::move(b).finish(r[out])};
}

OrdInstance deg_to_ord(const Slp& slp, const BigInt& d) {
  if (sgn(d) < 0) throw std::invalid_argument("deg_to_ord: d must be non-negative");
  Reversal rev = reverse_slp(slp);
  BigInt l = rev.m - d;
  if (sgn(l) < 0) l = 0;
  return {std::move(rev.q), l};
}

OrdToDeg ord_to_deg(const Slp& slp, const BigInt& l) {
  if (sgn(l) < 0) throw std::invalid_argument("ord_to_deg: l must be non-negative");
  Reversal rev = reverse_slp(slp);
  if (l <= rev.m) return {{std::move(rev.q), BigInt(rev.m - l)}, false};
  // ord f >= l > m >= deg f forces f = 0, i.e. deg(x f) <= 0.
  SlpBuilder b(1);
  const std::size_t f = b.splice(slp);
  const std::size_t x = b.var(1);
  return {{std::move(b).finish(b.mul(x, f)), BigInt(0)}, true};
}

Div2Instance ord_to_div2(const Slp& slp, const BigInt& l, std::optional<std::size_t> exponent_override) {
  if (slp.num_vars() > 1) throw std::invalid_argument("ord_to_div2: program must be univariate");
  if (sgn(l) < 0) throw std::invalid_argument("ord_to_div2: l must be non-negative");
  const std::size_t e = exponent_override.value_or(3 * slp.size());
  SlpBuilder b;
  const std::size_t big = b.pow2(BigInt(1) << e);
  const std::size_t map[] = {big};
  const std::size_t out = b.splice(slp, map);
  return {std::move(b).finish(out), BigInt(l << e), e};
}

bool ord_to_div2_sound(const Polynomial& f, std::size_t e) {
  if (f.is_zero()) return true;
  const BigInt cap = BigInt(1) << e;
  return to_big(bit_length(f.height())) <= cap;
}

DegInstance mdeg_to_deg(const Slp& slp, const BigInt& d) {
  const std::size_t s = slp.size();
  SlpBuilder b(1);
  const std::size_t y = b.var(1);
  std::vector<std::size_t> map;
  for (std::size_t i = 1; i <= slp.num_vars(); ++i) {
    const BigInt exponent = BigInt(1) << (i * s * s);
    const std::size_t alpha = b.pow2(exponent);
    map.push_back(b.mul(y, alpha));
  }
  const std::size_t out = b.splice(slp, map);
  return {std::move(b).finish(out), d};
}

BigInt mdeg_to_deg_bound(std::size_t s, std::size_t num_vars) {
  const BigInt n = to_big(num_vars);
  return to_big(s) + to_big(s) * to_big(s) * n * (n + 1) / 2 + 2 * n + 2;
}

BigInt two_sos_bound_m(std::size_t s) { return BigInt(1) << (3 * s); }

TwoSosCheck pos_via_2sos_verify(const Slp& slp, const TwoSosWitness& witness, OracleHandle& equ,
                                OracleHandle& two_sos) {
  if (slp.num_vars() != 0) throw std::invalid_argument("pos_via_2sos_verify: program must be variable-free");
  const BigInt m = two_sos_bound_m(slp.size());
  if (abs(witness.value) > m) throw MalformedWitness("witness exceeds M = 2^(3s)");
  const BigInt rep = centered_residue(slp, m);
  TwoSosCheck out;
  if (witness.kind == TwoSosWitness::Kind::SmallValue) {
    if (witness.value != rep) return out;
    out.valid = equ(minus_constant(slp, rep));
    out.positive = sgn(rep) > 0;
    return out;
  }
  if (sgn(witness.value) < 0) throw MalformedWitness("shift must be non-negative");
  if (equ(minus_constant(slp, rep))) return out;  // |N| <= M: the small branch decides
  out.valid = two_sos(shift_slp(slp, witness.value));
  out.positive = true;
  return out;
}

BigInt default_gap_bound(std::size_t s) {
  const BigInt cap(1'000'000);
  if (s >= 10) return cap;  // 4 (2^s ln 2)^2 exceeds 10^6 from s = 10 on
  const double ln = std::ldexp(std::log(2.0), static_cast<int>(s));
  const double v = std::ceil(4.0 * ln * ln);
  return v >= 1e6 ? cap : BigInt(static_cast<unsigned long>(v));
}

bool pos_via_2sos_search(const Slp& slp, std::optional<BigInt> gap_bound, OracleHandle& equ,
                         OracleHandle& two_sos) {
  if (slp.num_vars() != 0) throw std::invalid_argument("pos_via_2sos_search: program must be variable-free");
  const BigInt m = two_sos_bound_m(slp.size());
  const BigInt rep = centered_residue(slp, m);
  if (equ(minus_constant(slp, rep))) return sgn(rep) > 0;
  BigInt bound = gap_bound.value_or(default_gap_bound(slp.size()));
  if (bound > m) bound = m;
  for (BigInt shift = 0; shift <= bound; ++shift) {
    if (two_sos(shift_slp(slp, shift))) return true;
  }
  if (bound == m) return false;
  throw GapBoundExhausted("no 2SoS shift within gap bound " + bound.get_str());
}

const std::vector<std::string>& reduction_names() {
  static const std::vector<std::string> names = {
      "equ-to-3sos", "equ-to-2sos", "pos-via-3sos", "3sos-via-div2", "reverse",
      "deg-to-ord",  "ord-to-deg",  "ord-to-div2",  "mdeg-to-deg",   "pos-via-2sos",
  };
  return names;
}

ReductionRecord run_reduction(const ReductionRequest& req, const Slp& slp) {
  ReductionRecord rec;
  rec.name = req.name;
  rec.input = serialize(slp);
  rec.input_size = slp.size();
  const std::size_t s = slp.size();
  auto need = [&](const std::optional<BigInt>& v, const char* key) -> const BigInt& {
    if (!v) throw std::invalid_argument(req.name + " needs --" + key);
    if (sgn(*v) < 0) throw std::invalid_argument(std::string("--") + key + " must be non-negative");
    return *v;
  };
  auto emit = [&](const Slp& out) {
    rec.outputs.push_back(serialize(out));
    rec.output_size = std::max(rec.output_size, out.size());
  };
  // Library oracles appending to one ordered trace.
  auto oracle = [&](Problem p) {
    auto inner = std::make_shared<OracleHandle>(make_oracle(p, req.oracle_options));
    return OracleHandle(p, [inner, p, &rec](const Slp& q, const AuxParams& aux) {
      const bool a = (*inner)(q, aux);
      rec.trace.push_back({p, describe_query(q, aux), a});
      return a;
    });
  };

  const std::string& n = req.name;
  if (n == "equ-to-3sos") {
    emit(equ_to_3sos(slp));
    rec.size_bound = to_big(equ_to_3sos_bound(s));
  } else if (n == "equ-to-2sos") {
    emit(equ_to_2sos(slp));
    rec.size_bound = to_big(equ_to_2sos_bound(s));
  } else if (n == "pos-via-3sos") {
    OracleHandle o3 = oracle(Problem::ThreeSos);
    rec.answer = pos_via_3sos(slp, o3);
  } else if (n == "3sos-via-div2") {
    OracleHandle div2 = oracle(Problem::Div2);
    OracleHandle pos = oracle(Problem::Pos);
    rec.answer = three_sos_via_div2_pos(slp, div2, pos);
  } else if (n == "reverse") {
    Reversal rev = reverse_slp(slp);
    rec.params.emplace_back("m", rev.m.get_str());
    emit(rev.q);
    rec.size_bound = to_big(reverse_bound(s));
  } else if (n == "deg-to-ord") {
    OrdInstance out = deg_to_ord(slp, need(req.d, "d"));
    rec.params.emplace_back("l", out.l.get_str());
    emit(out.slp);
    rec.size_bound = to_big(reverse_bound(s));
  } else if (n == "ord-to-deg") {
    OrdToDeg out = ord_to_deg(slp, need(req.l, "l"));
    rec.params.emplace_back("d", out.instance.d.get_str());
    if (out.forced) rec.params.emplace_back("forced", "true");
    emit(out.instance.slp);
    rec.size_bound = to_big(reverse_bound(s));
  } else if (n == "ord-to-div2") {
    Div2Instance out = ord_to_div2(slp, need(req.l, "l"), req.exponent_override);
    rec.params.emplace_back("l", out.l.get_str());
    rec.params.emplace_back("e", std::to_string(out.e));
    emit(out.slp);
    rec.size_bound = to_big(ord_to_div2_bound(s, out.e));
  } else if (n == "mdeg-to-deg") {
    DegInstance out = mdeg_to_deg(slp, need(req.d, "d"));
    rec.params.emplace_back("d", out.d.get_str());
    emit(out.slp);
    rec.size_bound = mdeg_to_deg_bound(s, slp.num_vars());
  } else if (n == "pos-via-2sos") {
    OracleHandle two = oracle(Problem::TwoSos);
    OracleHandle equ = equ_via_2sos(two);
    rec.params.emplace_back("M", two_sos_bound_m(s).get_str());
    rec.answer = pos_via_2sos_search(slp, req.gap_bound, equ, two);
  } else {
    throw std::invalid_argument("unknown reduction: " + n);
  }
  return rec;
}

}  // namespace slpkit
