#pragma once

#include <optional>
#include <vector>

#include "slpkit/polynomial.hpp"

namespace slpkit {

// f, f', then negated pseudo-remainders made primitive; signs match the
// classical rational Sturm sequence.
struct SturmChain {
  std::vector<Polynomial> chain;
};

struct PositivityBoundInput {
  std::size_t d = 1;    // degree
  std::size_t tau = 1;  // coefficient bit-size bound
};

SturmChain sturm_chain(const Polynomial& f);
// Sign variations of the chain at x, zeros skipped.
std::size_t sign_variations(const SturmChain& sc, const mpq_class& x);

// Primitive integer polynomial helpers.
BigInt content(const Polynomial& f);
// f / content(f) with positive leading coefficient; zero stays zero.
Polynomial primitive_part(const Polynomial& f);
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);
// Exact quotient a / b over Z; throws std::domain_error when b does not divide a.
Polynomial exact_div(const Polynomial& a, const Polynomial& b);

// Product of the irreducible factors of odd multiplicity, primitive with
// positive leading coefficient. Throws std::invalid_argument on zero.
Polynomial square_free_odd_part(const Polynomial& f);
// Distinct real roots by Sturm's theorem. Throws std::invalid_argument on zero.
std::size_t count_real_roots(const Polynomial& f);
// f(x) >= 0 for every real x; the zero polynomial counts as positive.
bool is_positive_poly(const Polynomial& f);
// g with g^2 = f and non-negative leading coefficient, if one exists in Z[x].
std::optional<Polynomial> is_poly_square(const Polynomial& f);

// Rational lower bound for 3^{d/2} / (2^{(2d-1)tau} (d+1)^{2d-1/2}), the
// minimum of a strictly positive polynomial of degree d whose coefficients
// have at most tau bits. Throws std::invalid_argument when d or tau is 0.
mpq_class min_value_lower_bound(const PositivityBoundInput& inp);

}  // namespace slpkit
