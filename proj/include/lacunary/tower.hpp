#pragma once

// Towers of exponentials over positive integers, compared by value.
// Comparison order: structural identity, exact evaluation (<= 2^20 bits),
// factored form with tower exponents, then outward-rounded MPFR intervals
// on log2(log2(value)). When nothing separates the values the comparison
// throws InconclusiveError.
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lacunary/errors.hpp"

namespace lacunary {

using BigInt = mpz_class;

class Tower {
 public:
  enum class Kind { leaf, sum, product, power };

  /// Leaf; throws DomainError for values < 1.
  Tower(const BigInt& value);  // NOLINT(google-explicit-constructor)
  Tower(long value);           // NOLINT(google-explicit-constructor)

  static Tower sum(std::vector<Tower> terms);
  static Tower product(std::vector<Tower> factors);
  static Tower power(Tower base, Tower exponent);

  Kind kind() const noexcept;
  /// Leaf value; throws DomainError on other kinds.
  const BigInt& value() const;
  /// Operands of a sum or product, or {base, exponent} of a power.
  std::span<const Tower> children() const noexcept;
  const Tower& base() const;
  const Tower& exponent() const;

  /// ASCII rendering, e.g. "8^(4^(6^3))" or "2*16^3*4^3".
  std::string to_string() const;

  friend bool identical(const Tower& a, const Tower& b);

 private:
  struct Node;
  explicit Tower(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Tower operator+(const Tower& a, const Tower& b);
Tower operator*(const Tower& a, const Tower& b);
Tower pow(const Tower& base, const Tower& exponent);

inline constexpr std::uint64_t kExactBits = std::uint64_t{1} << 20;

/// Upper bound on the bit length of the value, nullopt if it does not fit
/// in 64 bits.
std::optional<std::uint64_t> bit_bound(const Tower& t);
/// The value when its bit bound is <= max_bits.
std::optional<BigInt> try_evaluate(const Tower& t, std::uint64_t max_bits = kExactBits);
/// Throws DomainError when the value is larger than max_bits.
BigInt evaluate(const Tower& t, std::uint64_t max_bits = kExactBits);

/// Value = prod base^exponent over the map. Bases are primes below the
/// trial-division limit or an unfactored cofactor.
using FactorForm = std::map<BigInt, Tower>;
std::optional<FactorForm> factor_form(const Tower& t, std::uint64_t exact_bits = kExactBits);

/// E with value == 2^E, when the factored form is a lone base 2 with an
/// exactly evaluable exponent.
std::optional<BigInt> log2_exact(const Tower& t);

enum class CmpMethod { structural, exact, factored, interval };
std::string to_string(CmpMethod method);

struct CmpOptions {
  std::uint64_t exact_bits = kExactBits;
  unsigned start_precision = 64;
  unsigned max_precision = 1U << 14;
  /// Try intervals before exact evaluation (falls back to exact paths when
  /// the intervals cannot separate the values).
  bool interval_first = false;
};

struct CmpOutcome {
  std::strong_ordering order = std::strong_ordering::equal;
  CmpMethod method = CmpMethod::structural;
};

CmpOutcome compare(const Tower& a, const Tower& b, const CmpOptions& opts = {});
std::strong_ordering tower_cmp(const Tower& a, const Tower& b);

/// Outward-rounded enclosure of log2(log2(value)), as doubles for display.
struct LogLogBounds {
  double lo = 0;
  double hi = 0;
};
LogLogBounds loglog2_bounds(const Tower& t, unsigned precision = 128);

/// Number of decimal digits. Exact for values up to 2^22 bits; beyond that
/// only for base^exponent with both sides evaluable, via a certified
/// enclosure of exponent*log10(base). Throws DomainError otherwise.
BigInt digit_count(const Tower& t);

/// "2^k" or "c*2^k" for a positive integer.
std::string render_pow2(const BigInt& e);

}  // namespace lacunary
