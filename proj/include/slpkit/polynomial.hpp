#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slpkit/slp.hpp"

namespace slpkit {

// Dense univariate polynomial over Z. coefficients()[k] is the coefficient of
// x^k; the list never carries a zero leading coefficient, so the zero
// polynomial is the empty list.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<BigInt> coefficients);
  static Polynomial constant(const BigInt& c);
  static Polynomial monomial(const BigInt& c, std::size_t k);
  static Polynomial x() { return monomial(1, 1); }

  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // nullopt for the zero polynomial (degree -infinity).
  std::optional<std::size_t> degree() const noexcept;
  // Largest k with x^k | f; nullopt for the zero polynomial (order +infinity).
  std::optional<std::size_t> order() const noexcept;
  BigInt coefficient(std::size_t k) const;
  const BigInt& leading() const { return coeffs_.back(); }
  // Maximum absolute coefficient, H(f).
  BigInt height() const;

  BigInt evaluate(const BigInt& x) const;
  mpq_class evaluate(const mpq_class& x) const;
  Polynomial derivative() const;
  // x^m f(1/x); requires m >= deg f.
  Polynomial reversed(std::size_t m) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const BigInt& c, const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  // "c_d x^d + ... + c_0"; "0" for the zero polynomial.
  std::string to_string() const;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

// Sparse multivariate polynomial over Z keyed by exponent vectors.
class MultiPolynomial {
 public:
  using Exponents = std::vector<std::uint32_t>;

  explicit MultiPolynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}
  static MultiPolynomial constant(std::size_t num_vars, const BigInt& c);
  static MultiPolynomial variable(std::size_t num_vars, std::size_t k);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const std::map<Exponents, BigInt>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<std::size_t> total_degree() const noexcept;
  BigInt evaluate(const std::vector<BigInt>& point) const;

  friend MultiPolynomial operator+(const MultiPolynomial& a, const MultiPolynomial& b);
  friend MultiPolynomial operator-(const MultiPolynomial& a, const MultiPolynomial& b);
  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b);
  friend bool operator==(const MultiPolynomial&, const MultiPolynomial&) = default;

 private:
  std::size_t num_vars_;
  std::map<Exponents, BigInt> terms_;
};

}  // namespace slpkit
