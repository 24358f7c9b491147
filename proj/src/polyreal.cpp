#include "slpkit/polyreal.hpp"

#include <stdexcept>

namespace slpkit {

namespace {

using Coeffs = std::vector<BigInt>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// lc(b)^k * a = q b + r with k the number of reduction steps taken.
// Returns r and reports k through `steps`.
Coeffs pseudo_rem(const Polynomial& a, const Polynomial& b, std::size_t& steps) {
  Coeffs r = a.coefficients();
  const Coeffs& bc = b.coefficients();
  const std::size_t db = bc.size() - 1;
  const BigInt& lb = bc.back();
  steps = 0;
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t shift = r.size() - 1 - db;
    const BigInt lr = r.back();
    for (auto& c : r) c *= lb;
    for (std::size_t k = 0; k <= db; ++k) r[shift + k] -= lr * bc[k];
    ++steps;
    trim(r);
  }
  return r;
}

Polynomial divide_by_positive_content(Coeffs c) {
  trim(c);
  BigInt g = 0;
  for (const auto& v : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1) {
    for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
  return Polynomial(std::move(c));
}

int sign_at_infinity(const Polynomial& p, bool negative) {
  const int s = sgn(p.leading());
  return negative && (*p.degree() % 2 == 1) ? -s : s;
}

std::size_t variations(const std::vector<int>& signs) {
  std::size_t v = 0;
  int prev = 0;
  for (const int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

}  // namespace

SturmChain sturm_chain(const Polynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("Sturm chain of the zero polynomial");
  SturmChain sc;
  sc.chain.push_back(f);
  Polynomial next = f.derivative();
  while (!next.is_zero()) {
    sc.chain.push_back(next);
    const Polynomial& a = sc.chain[sc.chain.size() - 2];
    const Polynomial& b = sc.chain.back();
    std::size_t steps = 0;
    Coeffs r = pseudo_rem(a, b, steps);
    // rem = r / lc(b)^steps; the next element is -rem.
    const bool flip = !(sgn(b.leading()) < 0 && steps % 2 == 1);
    if (flip) {
      for (auto& c : r) c = -c;
    }
    next = divide_by_positive_content(std::move(r));
  }
  return sc;
}

std::size_t sign_variations(const SturmChain& sc, const mpq_class& x) {
  std::vector<int> signs;
  for (const auto& p : sc.chain) signs.push_back(sgn(p.evaluate(x)));
  return variations(signs);
}

BigInt content(const Polynomial& f) {
  BigInt g = 0;
  for (const auto& v : f.coefficients()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

Polynomial primitive_part(const Polynomial& f) {
  if (f.is_zero()) return f;
  const BigInt g = sgn(f.leading()) < 0 ? BigInt(-content(f)) : content(f);
  Coeffs c = f.coefficients();
  for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return Polynomial(std::move(c));
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return primitive_part(b) * Polynomial::constant(content(b));
  if (b.is_zero()) return primitive_part(a) * Polynomial::constant(content(a));
  BigInt cg;
  mpz_gcd(cg.get_mpz_t(), content(a).get_mpz_t(), content(b).get_mpz_t());
  Polynomial x = primitive_part(a);
  Polynomial y = primitive_part(b);
  if (*x.degree() < *y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    std::size_t steps = 0;
    Polynomial r = primitive_part(Polynomial(pseudo_rem(x, y, steps)));
    x = std::move(y);
    y = std::move(r);
  }
  return cg * primitive_part(x);
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  Coeffs r = a.coefficients();
  const Coeffs& bc = b.coefficients();
  const std::size_t db = bc.size() - 1;
  if (r.size() < bc.size()) {
    if (!r.empty()) throw std::domain_error("inexact polynomial division");
    return Polynomial();
  }
  Coeffs q(r.size() - db);
  while (!r.empty() && r.size() - 1 >= db) {
    const std::size_t shift = r.size() - 1 - db;
    if (!mpz_divisible_p(r.back().get_mpz_t(), bc.back().get_mpz_t())) {
      throw std::domain_error("inexact polynomial division");
    }
    BigInt lead;
    mpz_divexact(lead.get_mpz_t(), r.back().get_mpz_t(), bc.back().get_mpz_t());
    for (std::size_t k = 0; k <= db; ++k) r[shift + k] -= lead * bc[k];
    q[shift] = lead;
    trim(r);
  }
  if (!r.empty()) throw std::domain_error("inexact polynomial division");
  return Polynomial(std::move(q));
}

Polynomial square_free_odd_part(const Polynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("square-free part of the zero polynomial");
  // P_k = gcd(P_{k-1}, P_{k-1}') holds every factor of multiplicity i to the
  // power max(i - k, 0); Q_k = P_{k-1} / P_k is the product of factors with
  // multiplicity >= k; Q_k / Q_{k+1} is the multiplicity-k part.
  std::vector<Polynomial> q;
  Polynomial p = primitive_part(f);
  while (*p.degree() > 0) {
    Polynomial next = primitive_part(poly_gcd(p, p.derivative()));
    q.push_back(primitive_part(exact_div(p, next)));
    p = std::move(next);
  }
  q.push_back(Polynomial::constant(1));
  Polynomial odd = Polynomial::constant(1);
  for (std::size_t k = 0; k + 1 < q.size(); k += 2) {
    odd = odd * exact_div(q[k], q[k + 1]);
  }
  return primitive_part(odd);
}

std::size_t count_real_roots(const Polynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("root count of the zero polynomial");
  const SturmChain sc = sturm_chain(f);
  std::vector<int> lo, hi;
  for (const auto& p : sc.chain) {
    lo.push_back(sign_at_infinity(p, true));
    hi.push_back(sign_at_infinity(p, false));
  }
  return variations(lo) - variations(hi);
}

bool is_positive_poly(const Polynomial& f) {
  if (f.is_zero()) return true;
  if (*f.degree() % 2 == 1 || sgn(f.leading()) < 0) return false;
  if (*f.degree() == 0) return true;
  return count_real_roots(square_free_odd_part(f)) == 0;
}

std::optional<Polynomial> is_poly_square(const Polynomial& f) {
  if (f.is_zero()) return Polynomial();
  const std::size_t d = *f.degree();
  if (d % 2 == 1 || sgn(f.leading()) < 0) return std::nullopt;
  const std::size_t k = d / 2;
  const Coeffs& c = f.coefficients();
  Coeffs g(k + 1);
  if (!mpz_perfect_square_p(c[d].get_mpz_t())) return std::nullopt;
  mpz_sqrt(g[k].get_mpz_t(), c[d].get_mpz_t());
  const BigInt twice = 2 * g[k];
  for (std::size_t j = 1; j <= k; ++j) {
    const std::size_t e = 2 * k - j;
    BigInt rest = c[e];
    for (std::size_t a = k - j + 1; a < k; ++a) rest -= g[a] * g[e - a];
    if (!mpz_divisible_p(rest.get_mpz_t(), twice.get_mpz_t())) return std::nullopt;
    mpz_divexact(g[k - j].get_mpz_t(), rest.get_mpz_t(), twice.get_mpz_t());
  }
  Polynomial root(std::move(g));
  if (root * root != f) return std::nullopt;
  return root;
}

mpq_class min_value_lower_bound(const PositivityBoundInput& inp) {
  if (inp.d < 1 || inp.tau < 1) throw std::invalid_argument("min_value_lower_bound needs d >= 1 and tau >= 1");
  constexpr unsigned long kScaleBits = 64;
  const unsigned long d = inp.d;
  const unsigned long tau = inp.tau;

  // floor(2^64 sqrt(3^d)) / 2^64 <= 3^{d/2}
  BigInt three_d, num;
  mpz_ui_pow_ui(three_d.get_mpz_t(), 3, d);
  mpz_mul_2exp(three_d.get_mpz_t(), three_d.get_mpz_t(), 2 * kScaleBits);
  mpz_sqrt(num.get_mpz_t(), three_d.get_mpz_t());

  // ceil(2^64 sqrt(d+1)) / 2^64 >= (d+1)^{1/2}
  BigInt dp1_scaled(d + 1), root;
  mpz_mul_2exp(dp1_scaled.get_mpz_t(), dp1_scaled.get_mpz_t(), 2 * kScaleBits);
  mpz_sqrt(root.get_mpz_t(), dp1_scaled.get_mpz_t());
  if (root * root != dp1_scaled) root += 1;

  BigInt den, pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), d + 1, 2 * d - 1);
  mpz_mul_2exp(den.get_mpz_t(), pw.get_mpz_t(), (2 * d - 1) * tau);
  den *= root;

  // Both scale factors cancel.
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace slpkit
