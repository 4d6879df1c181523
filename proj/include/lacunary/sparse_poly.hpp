#pragma once

// Exact univariate sparse polynomials over Q. Zero coefficients are never
// stored, so structural equality is value equality.
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lacunary/errors.hpp"

namespace lacunary {

using Rat = mpq_class;
using BigInt = mpz_class;
using Exponent = std::int64_t;

class SparsePoly {
 public:
  using TermMap = std::map<Exponent, Rat>;

  SparsePoly() = default;
  /// Builds from arbitrary terms; zero coefficients are dropped and
  /// negative exponents rejected.
  explicit SparsePoly(TermMap terms);
  SparsePoly(std::initializer_list<std::pair<const Exponent, Rat>> terms);

  static SparsePoly constant(const Rat& c);
  static SparsePoly monomial(const Rat& c, Exponent e);
  /// The indeterminate x.
  static SparsePoly x() { return monomial(1, 1); }

  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;

  /// Largest exponent. Throws DomainError on the zero polynomial.
  Exponent degree() const;
  /// Smallest exponent. Throws DomainError on the zero polynomial.
  Exponent low_degree() const;
  const Rat& leading_coefficient() const;
  /// Coefficient of x^e (zero when absent).
  Rat coeff(Exponent e) const;

  /// Descending-exponent text in the polynomial grammar, e.g.
  /// "3/2*x^5 - x^2 + 1".
  std::string to_string(char var = 'x') const;

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

 private:
  TermMap terms_;
};

SparsePoly operator+(const SparsePoly& p, const SparsePoly& q);
SparsePoly operator-(const SparsePoly& p, const SparsePoly& q);
SparsePoly operator-(const SparsePoly& p);
SparsePoly operator*(const SparsePoly& p, const SparsePoly& q);
SparsePoly operator*(const Rat& c, const SparsePoly& p);

SparsePoly mul(const SparsePoly& p, const SparsePoly& q);
/// Product with every exponent >= `bound` discarded.
SparsePoly mul_truncated(const SparsePoly& p, const SparsePoly& q, Exponent bound);
/// Repeated squaring; pow(p, 0) == 1.
SparsePoly pow(const SparsePoly& p, std::uint64_t k);
/// g(h(x)).
SparsePoly compose(const SparsePoly& g, const SparsePoly& h);
/// Drops every term with exponent >= bound.
SparsePoly truncate(const SparsePoly& p, Exponent bound);
/// Multiplies by x^k.
SparsePoly shift(const SparsePoly& p, Exponent k);
Rat evaluate(const SparsePoly& p, const Rat& at);

/// Long division by a nonzero divisor: p = q*divisor + r, deg r < deg divisor.
std::pair<SparsePoly, SparsePoly> divmod(const SparsePoly& p, const SparsePoly& divisor);

/// Number of stored exponents > 0.
std::size_t nonconstant_terms(const SparsePoly& f);

/// Reads the grammar
///   poly := term (("+"|"-") term)* ; term := coef | coef "*" mono | mono
///   mono := "x" ["^" uint] ; coef := int | int "/" uint
/// with whitespace ignored and an optional leading sign.
SparsePoly parse_poly(std::string_view text);

/// f(x) = a*x^m*(1 + b_1 y^{n_1} + ... + b_l y^{n_l}) with y = 1/x.
struct Normalization {
  Rat a;
  Exponent m = 0;
  std::vector<Exponent> n;  // strictly increasing, n_0 = 0 implicit
  std::vector<Rat> b;       // nonzero

  std::size_t l() const noexcept { return n.size(); }
};

/// Throws DomainError when f is constant.
Normalization normalize_f(const SparsePoly& f);
/// a*x^m*(1 + sum b_i x^{-n_i}) expanded back into a polynomial in x.
SparsePoly reconstruct(const Normalization& norm);
/// delta_p(y) = 1 + b_1 y^{n_1} + ... + b_p y^{n_p}; p = l gives f~.
SparsePoly delta_p(const Normalization& norm, std::size_t p);

/// h~(y) = y^{deg h} h(1/y). Throws DomainError on zero.
SparsePoly tilde_transform(const SparsePoly& h);

/// One decomposition scenario f = g(h) with its normalization data.
struct Instance {
  SparsePoly f, g, h;
  std::size_t l = 0;  // non-constant terms of f
  Exponent d = 0;     // deg g
  Exponent m = 0;     // deg f
  Normalization norm;
};

/// Computes f = compose(g, h) and every derived field.
Instance make_instance(SparsePoly g, SparsePoly h);

/// Checked exponent arithmetic.
Exponent checked_add(Exponent a, Exponent b);
Exponent checked_mul(Exponent a, Exponent b);

}  // namespace lacunary
