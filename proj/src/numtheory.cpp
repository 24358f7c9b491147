#include "slpkit/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "slpkit/eval.hpp"

namespace slpkit {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;
constexpr std::array<std::uint64_t, 12> kMillerRabinBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

const BigInt& small_prime_product() {
  static const BigInt product = [] {
    BigInt p;
    mpz_primorial_ui(p.get_mpz_t(), kTrialLimit);
    return p;
  }();
  return product;
}

bool fits_u64(const BigInt& n) { return sgn(n) >= 0 && bit_length(n) <= 64; }

std::uint64_t to_u64(const BigInt& n) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, n.get_mpz_t());
  return out;
}

BigInt from_u64(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return out;
}

bool miller_rabin_round(const BigInt& n, const BigInt& n_minus_1, const BigInt& d, std::size_t s,
                        const BigInt& base) {
  BigInt x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (std::size_t r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Small prime factors of n (with multiplicity). Leaves the cofactor in n.
std::vector<std::pair<BigInt, unsigned>> strip_small_primes(BigInt& n) {
  std::vector<std::pair<BigInt, unsigned>> found;
  const auto& primes = small_primes();
  if (fits_u64(n)) {
    std::uint64_t r = to_u64(n);
    for (const std::uint32_t p : primes) {
      if (static_cast<std::uint64_t>(p) * p > r) break;
      if (r % p != 0) continue;
      unsigned e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      found.emplace_back(BigInt(p), e);
    }
    if (r > 1 && r <= kTrialLimit) {
      found.emplace_back(from_u64(r), 1);
      r = 1;
    }
    n = from_u64(r);
    return found;
  }
  // Large n: the gcd with the primorial isolates the small primes present.
  BigInt g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), small_prime_product().get_mpz_t());
  for (const std::uint32_t p : primes) {
    if (g == 1) break;
    if (!mpz_divisible_ui_p(g.get_mpz_t(), p)) continue;
    mpz_divexact_ui(g.get_mpz_t(), g.get_mpz_t(), p);
    const BigInt bp(p);
    const unsigned e = static_cast<unsigned>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), bp.get_mpz_t()));
    found.emplace_back(bp, e);
  }
  return found;
}

// Montgomery arithmetic modulo an odd n < 2^63 with R = 2^64.
class Mont64 {
 public:
  explicit Mont64(std::uint64_t n) : n_(n) {
    std::uint64_t inv = n;
    for (int i = 0; i < 6; ++i) inv *= 2 - n * inv;
    ninv_ = -inv;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    const std::uint64_t m = static_cast<std::uint64_t>(t) * ninv_;
    const unsigned __int128 u = (t + static_cast<unsigned __int128>(m) * n_) >> 64;
    const std::uint64_t r = static_cast<std::uint64_t>(u);
    return r >= n_ ? r - n_ : r;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t t = a + b;
    return t >= n_ ? t - n_ : t;
  }

 private:
  std::uint64_t n_;
  std::uint64_t ninv_;
};

// Brent rho for odd n < 2^63, map y -> y^2 R^-1 + c in Montgomery form.
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t& iterations_left) {
  if (n % 2 == 0) return 2;
  const Mont64 mont(n);
  std::mt19937_64 rng(n);
  while (iterations_left > 0) {
    const std::uint64_t c = rng() % (n - 1) + 1;
    std::uint64_t y = rng() % n;
    std::uint64_t g = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t m = 128;
    auto f = [&](std::uint64_t v) { return mont.add(mont.mul(v, v), c); };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        const std::uint64_t steps = std::min(m, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = mont.mul(q, x > y ? x - y : y - x);
        }
        g = std::gcd(q, n);
        if (iterations_left <= steps) {
          iterations_left = 0;
          if (g == 1) return 0;
        } else {
          iterations_left -= steps;
        }
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

BigInt rho_big(const BigInt& n, std::uint64_t& iterations_left) {
  std::mt19937_64 rng(mpz_get_ui(n.get_mpz_t()));
  BigInt x, y, ys, q, g, c, diff;
  while (iterations_left > 0) {
    c = from_u64(rng()) % (n - 1) + 1;
    y = from_u64(rng()) % n;
    q = 1;
    g = 1;
    const std::uint64_t m = 128;
    auto step = [&](BigInt& v) {
      mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
      mpz_add(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        const std::uint64_t steps = std::min(m, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          step(y);
          mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
          mpz_mul(q.get_mpz_t(), q.get_mpz_t(), diff.get_mpz_t());
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        if (iterations_left <= steps) {
          iterations_left = 0;
          if (g == 1) return 0;
        } else {
          iterations_left -= steps;
        }
      }
    }
    if (g == n) {
      do {
        step(ys);
        mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), ys.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd n < 2^127 with R = 2^128.
class Mont128 {
 public:
  explicit Mont128(u128 n) : n_(n) {
    u128 inv = n;  // Newton: correct to 3 bits, doubling each step
    for (int i = 0; i < 7; ++i) inv *= 2 - n * inv;
    ninv_ = -inv;
  }
  u128 mul(u128 a, u128 b) const {
    u128 lo, hi;
    wide_mul(a, b, lo, hi);
    const u128 m = lo * ninv_;
    u128 mlo, mhi;
    wide_mul(m, n_, mlo, mhi);
    const u128 sum_lo = lo + mlo;
    u128 t = hi + mhi + (sum_lo < lo ? 1 : 0);
    return t >= n_ ? t - n_ : t;
  }
  u128 add(u128 a, u128 b) const {
    const u128 t = a + b;
    return t >= n_ ? t - n_ : t;
  }

 private:
  static void wide_mul(u128 a, u128 b, u128& lo, u128& hi) {
    const std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
    const std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
    lo = (mid << 64) | static_cast<std::uint64_t>(p00);
    hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  }

  u128 n_;
  u128 ninv_;
};

u128 to_u128(const BigInt& n) {
  u128 out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, n.get_mpz_t());
  return out;
}

BigInt from_u128(u128 v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return out;
}

int ctz_u128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  return lo != 0 ? __builtin_ctzll(lo) : 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

// Binary gcd; u128 division is a slow library call.
u128 gcd_u128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = ctz_u128(a | b);
  a >>= ctz_u128(a);
  while (b != 0) {
    b >>= ctz_u128(b);
    if (a > b) std::swap(a, b);
    b -= a;
  }
  return a << shift;
}

// Brent rho on the map y -> y^2 R^-1 + c, all in Montgomery form.
u128 rho_u128(u128 n, std::uint64_t& iterations_left) {
  const Mont128 mont(n);
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  auto draw = [&] { return ((static_cast<u128>(rng()) << 64) | rng()) % n; };
  while (iterations_left > 0) {
    const u128 c = draw() % (n - 1) + 1;
    u128 y = draw(), x = 0, ys = 0, q = 1, g = 1;
    const std::uint64_t m = 512;
    auto f = [&](u128 v) { return mont.add(mont.mul(v, v), c); };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        const std::uint64_t steps = std::min(m, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = mont.mul(q, x > y ? x - y : y - x);
        }
        g = gcd_u128(q, n);
        if (iterations_left <= steps) {
          iterations_left = 0;
          if (g == 1) return 0;
        } else {
          iterations_left -= steps;
        }
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u128(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

// Splits a cofactor free of small primes into primes, appending to `out`.
void factor_large(const BigInt& n, const FactorBudget& budget,
                  std::vector<std::pair<BigInt, unsigned>>& out) {
  std::vector<BigInt> stack = {n};
  while (!stack.empty()) {
    BigInt r = std::move(stack.back());
    stack.pop_back();
    if (r == 1) continue;
    if (is_probable_prime(r)) {
      out.emplace_back(r, 1);
      continue;
    }
    if (mpz_perfect_square_p(r.get_mpz_t())) {
      const BigInt root = isqrt(r);
      stack.push_back(root);
      stack.push_back(root);
      continue;
    }
    std::uint64_t left = budget.rho_iterations;
    BigInt d;
    if (bit_length(r) <= 62) {
      const std::uint64_t f = rho_u64(to_u64(r), left);
      d = f == 0 ? BigInt(0) : from_u64(f);
    } else if (mpz_odd_p(r.get_mpz_t()) && bit_length(r) <= 126) {
      const u128 f = rho_u128(to_u128(r), left);
      d = f == 0 ? BigInt(0) : from_u128(f);
    } else {
      d = rho_big(r, left);
    }
    if (d == 0) {
      throw FactorizationTimeout("Pollard rho exhausted " + std::to_string(budget.rho_iterations) +
                                 " iterations on a " + std::to_string(bit_length(r)) + "-bit cofactor");
    }
    stack.push_back(d);
    stack.push_back(r / d);
  }
}

void merge_factors(std::vector<std::pair<BigInt, unsigned>>& factors) {
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<BigInt, unsigned>> merged;
  for (auto& f : factors) {
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
    } else {
      merged.push_back(std::move(f));
    }
  }
  factors = std::move(merged);
}

}  // namespace

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

BigInt Factorization::product() const {
  BigInt out = sign;
  for (const auto& [p, e] : factors) {
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    out *= pe;
  }
  return out;
}

bool is_3sos(std::uint64_t n) {
  if (n == 0) return true;
  while (n % 4 == 0) n /= 4;
  return n % 8 != 7;
}

bool is_3sos(const BigInt& n) {
  if (n < 0) return false;
  if (n == 0) return true;
  // Strip the even number of trailing zero bits, i.e. the largest 4^a.
  const std::size_t tz = mpz_scan1(n.get_mpz_t(), 0);
  BigInt odd_part;
  mpz_fdiv_q_2exp(odd_part.get_mpz_t(), n.get_mpz_t(), tz - tz % 2);
  return mpz_fdiv_ui(odd_part.get_mpz_t(), 8) != 7;
}

bool is_2sos(const BigInt& n, const FactorBudget& budget) {
  if (n < 0) return false;
  if (n <= 2) return true;
  BigInt rest = n;
  mpz_fdiv_q_2exp(rest.get_mpz_t(), rest.get_mpz_t(), mpz_scan1(rest.get_mpz_t(), 0));
  for (const auto& [p, e] : strip_small_primes(rest)) {
    if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3 && e % 2 == 1) return false;
  }
  if (rest == 1) return true;
  // A product in which every 3-mod-4 prime has even exponent is 1 mod 4.
  if (mpz_fdiv_ui(rest.get_mpz_t(), 4) == 3) return false;
  if (mpz_perfect_square_p(rest.get_mpz_t())) return true;
  std::vector<std::pair<BigInt, unsigned>> large;
  factor_large(rest, budget, large);
  merge_factors(large);
  for (const auto& [p, e] : large) {
    if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3 && e % 2 == 1) return false;
  }
  return true;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative input");
  if (n < 2) return n;
  // Start from a power of two at or above sqrt(n); Newton then decreases
  // monotonically to the floor.
  BigInt x;
  mpz_setbit(x.get_mpz_t(), (bit_length(n) + 1) / 2);
  while (true) {
    BigInt y = (x + n / x) / 2;
    if (y >= x) return x;
    x = std::move(y);
  }
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  const BigInt r = isqrt(n);
  return r * r == n;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (const std::uint64_t p : kMillerRabinBases) {
    if (n % p == 0) return n == p;
  }
  for (const std::uint64_t a : kMillerRabinBases) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  for (const std::uint64_t p : kMillerRabinBases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  const std::size_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (const std::uint64_t a : kMillerRabinBases) {
    if (!miller_rabin_round(n, n_minus_1, d, s, BigInt(static_cast<unsigned long>(a)))) return false;
  }
  std::mt19937_64 rng(mpz_get_ui(n.get_mpz_t()));
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(static_cast<unsigned long>(rng()));
  for (int round = 0; round < 40; ++round) {
    const BigInt base = gen.get_z_range(n - 3) + 2;
    if (!miller_rabin_round(n, n_minus_1, d, s, base)) return false;
  }
  return true;
}

Factorization factorize(const BigInt& n, const FactorBudget& budget) {
  if (n < 2) throw std::invalid_argument("factorize: input must be at least 2");
  Factorization out;
  BigInt rest = n;
  out.factors = strip_small_primes(rest);
  if (rest != 1) factor_large(rest, budget, out.factors);
  merge_factors(out.factors);
  return out;
}

std::optional<std::size_t> trailing_zeros(const BigInt& n) {
  if (n == 0) return std::nullopt;
  return mpz_scan1(n.get_mpz_t(), 0);
}

std::array<BigInt, 4> four_square_witness(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("four_square_witness: negative input");
  if (bit_length(n) > 65 || (bit_length(n) == 65 && mpz_scan1(n.get_mpz_t(), 0) != 64)) {
    throw std::length_error("four_square_witness: input above 2^64");
  }
  BigInt a = isqrt(n);
  while (!is_3sos(BigInt(n - a * a))) --a;
  const BigInt r3 = n - a * a;
  BigInt b = isqrt(r3);
  while (!is_2sos(BigInt(r3 - b * b))) --b;
  const BigInt r2 = r3 - b * b;
  BigInt c = isqrt(r2);
  while (!is_perfect_square(BigInt(r2 - c * c))) --c;
  return {a, b, c, isqrt(BigInt(r2 - c * c))};
}

DensityResult density_scan(DensityKind kind, std::uint64_t limit) {
  if (limit == 0) throw std::invalid_argument("density_scan: limit must be positive");
  if (limit > 100'000'000) throw std::invalid_argument("density_scan: limit too large (max 10^8)");
  DensityResult out;
  if (kind == DensityKind::ThreeSquares) {
    for (std::uint64_t n = 1; n <= limit; ++n) out.count += is_3sos(n) ? 1 : 0;
    out.ratio = static_cast<double>(out.count) / static_cast<double>(limit);
    return out;
  }
  // Mark n with an odd power of some prime p = 3 mod 4.
  std::vector<bool> composite(limit + 1, false);
  std::vector<bool> bad(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t j = p * p; j <= limit; j += p) composite[j] = true;
    if (p % 4 != 3) continue;
    for (std::uint64_t m = p; m <= limit; m += p) {
      std::uint64_t k = m / p;
      unsigned e = 1;
      while (k % p == 0) {
        k /= p;
        ++e;
      }
      if (e % 2 == 1) bad[m] = true;
    }
  }
  for (std::uint64_t n = 1; n <= limit; ++n) out.count += bad[n] ? 0 : 1;
  const double x = static_cast<double>(limit);
  out.ratio = static_cast<double>(out.count) * std::sqrt(std::log(x)) / x;
  return out;
}

}  // namespace slpkit
