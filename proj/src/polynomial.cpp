#include "slpkit/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace slpkit {

Polynomial::Polynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
  normalize();
}

Polynomial Polynomial::constant(const BigInt& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(const BigInt& c, std::size_t k) {
  std::vector<BigInt> coeffs(k + 1);
  coeffs[k] = c;
  return Polynomial(std::move(coeffs));
}

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<std::size_t> Polynomial::degree() const noexcept {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.size() - 1;
}

std::optional<std::size_t> Polynomial::order() const noexcept {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != 0) return k;
  }
  return std::nullopt;
}

BigInt Polynomial::coefficient(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : BigInt(0);
}

BigInt Polynomial::height() const {
  BigInt h = 0;
  for (const auto& c : coeffs_) {
    if (abs(c) > h) h = abs(c);
  }
  return h;
}

BigInt Polynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class Polynomial::evaluate(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + mpq_class(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<BigInt> out(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::reversed(std::size_t m) const {
  if (coeffs_.size() > m + 1) throw std::invalid_argument("reversed: m below degree");
  std::vector<BigInt> out(m + 1);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[m - k] = coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<BigInt> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<BigInt> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] -= b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(const BigInt& c, const Polynomial& p) {
  std::vector<BigInt> out = p.coeffs_;
  for (auto& v : out) v *= c;
  return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    const BigInt mag = abs(c);
    if (mag != 1 || k == 0) out << mag.get_str();
    if (k >= 1) out << "x";
    if (k >= 2) out << "^" << k;
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------------------

MultiPolynomial MultiPolynomial::constant(std::size_t num_vars, const BigInt& c) {
  MultiPolynomial p(num_vars);
  if (c != 0) p.terms_[Exponents(num_vars, 0)] = c;
  return p;
}

MultiPolynomial MultiPolynomial::variable(std::size_t num_vars, std::size_t k) {
  if (k < 1 || k > num_vars) throw std::out_of_range("variable index out of range");
  MultiPolynomial p(num_vars);
  Exponents e(num_vars, 0);
  e[k - 1] = 1;
  p.terms_[e] = 1;
  return p;
}

std::optional<std::size_t> MultiPolynomial::total_degree() const noexcept {
  std::optional<std::size_t> best;
  for (const auto& [e, c] : terms_) {
    std::size_t d = 0;
    for (auto v : e) d += v;
    if (!best || d > *best) best = d;
  }
  return best;
}

BigInt MultiPolynomial::evaluate(const std::vector<BigInt>& point) const {
  if (point.size() != num_vars_) throw std::invalid_argument("evaluate: wrong point dimension");
  BigInt acc = 0;
  for (const auto& [e, c] : terms_) {
    BigInt term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      BigInt p;
      mpz_pow_ui(p.get_mpz_t(), point[i].get_mpz_t(), e[i]);
      term *= p;
    }
    acc += term;
  }
  return acc;
}

MultiPolynomial operator+(const MultiPolynomial& a, const MultiPolynomial& b) {
  MultiPolynomial out = a;
  for (const auto& [e, c] : b.terms_) {
    BigInt& slot = out.terms_[e];
    slot += c;
    if (slot == 0) out.terms_.erase(e);
  }
  return out;
}

MultiPolynomial operator-(const MultiPolynomial& a, const MultiPolynomial& b) {
  MultiPolynomial out = a;
  for (const auto& [e, c] : b.terms_) {
    BigInt& slot = out.terms_[e];
    slot -= c;
    if (slot == 0) out.terms_.erase(e);
  }
  return out;
}

MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
  MultiPolynomial out(std::max(a.num_vars_, b.num_vars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      MultiPolynomial::Exponents e(out.num_vars_, 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.terms_[e] += ca * cb;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace slpkit
