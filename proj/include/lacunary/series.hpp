#pragma once

// Truncated series in y with exponents in (1/ram)Z>=0. Coefficients are
// known for k/ram with 0 <= k < trunc_num. Series with different
// ramification are brought to the lcm before comparing.
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lacunary/sparse_poly.hpp"

namespace lacunary {

class TruncSeries {
 public:
  using CoeffMap = std::map<std::int64_t, Rat>;

  /// Keys at or beyond trunc_num and zero coefficients are dropped.
  TruncSeries(std::int64_t ram, std::int64_t trunc_num, CoeffMap coeffs = {});

  std::int64_t ram() const noexcept { return ram_; }
  std::int64_t trunc_num() const noexcept { return trunc_num_; }
  const CoeffMap& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  Rat coeff(std::int64_t key) const;

  /// Same series over ramification `new_ram` (a multiple of ram()).
  TruncSeries rescaled(std::int64_t new_ram) const;
  /// Re-truncates at a smaller window (units of 1/ram).
  TruncSeries truncated(std::int64_t trunc_num) const;

  /// "c0 + c1*y^(k1/rho) + ..." with integral exponents printed plainly.
  std::string to_string() const;

  friend bool operator==(const TruncSeries&, const TruncSeries&) = default;

 private:
  std::int64_t ram_;
  std::int64_t trunc_num_;
  CoeffMap coeffs_;
};

/// Operands are rescaled to a common ramification; the result is known up
/// to the smaller of the two windows.
TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const Rat& c, const TruncSeries& a);

/// Multiplies by y^(k/ram); the window is unchanged.
TruncSeries shift(const TruncSeries& a, std::int64_t k_num);

/// Embeds p with exponent n mapped to key n*ram, dropping n*ram >= trunc_num.
TruncSeries poly_to_series(const SparsePoly& p, std::int64_t ram, std::int64_t trunc_num);

/// The unique u with u(0) = 1 and u^d = delta^s modulo the window. The
/// result lives over `ram` and is truncated at trunc_num (units of 1/ram).
/// Throws DomainError unless delta(0) == 1 and d >= 1.
TruncSeries pow_frac(const SparsePoly& delta, std::int64_t s, std::int64_t d,
                     std::int64_t trunc_num, std::int64_t ram = 1);

/// One summand c * delta_p^(s/d - k) * y^(ypow) of h~.
struct TermShape {
  std::size_t p = 0;
  std::int64_t s = 0;
  std::vector<std::int64_t> h;  // multiplies n_{p+1}, ..., n_l
  std::int64_t k = 0;           // sum of h
  std::optional<Rat> c;         // unknown until solved for
  std::int64_t ypow_num = 0;    // exponent of y in units of 1/d

  friend bool operator==(const TermShape&, const TermShape&) = default;
};

enum class CapMode { strict, nonstrict };

/// Every (s, h) with s in {1-2d,...,1} whose y-exponent
/// h_1 n_{p+1} + ... + h_{l-p} n_l + (1-s) m/d stays below 2 n_l (strict) or
/// at most 2 n_l (nonstrict). Ordered lexicographically in (s, h).
std::vector<TermShape> enumerate_term_shapes(std::size_t l, std::size_t p, std::int64_t d,
                                             std::span<const std::int64_t> n,
                                             CapMode cap = CapMode::strict);

/// (2d+1)(2 n_l/n_{p+1} + 1)^l, the rough count estimate for the enumeration.
Rat shape_count_bound(std::size_t l, std::size_t p, std::int64_t d,
                      std::span<const std::int64_t> n);

/// delta_p^(s/d - k) y^(ypow) with c = 1, over ramification d and truncated
/// at trunc_num (units of 1/d).
TruncSeries term_value(const TermShape& shape, const SparsePoly& delta_p, std::int64_t m,
                       std::int64_t d, std::int64_t trunc_num);

/// {f~^(1/d), y^(m/d), y^(2m/d) f~^(-1/d), y^(3m/d) f~^(-2/d), ...}: every
/// element whose leading exponent is below trunc (integral units).
std::vector<TruncSeries> puiseux_basis(const SparsePoly& f, std::int64_t d, std::int64_t trunc);

/// Nonzero v with sum v_i series_i == 0 over the common window, normalised
/// so its first nonzero entry is 1; nullopt when the rows are independent.
std::optional<std::vector<Rat>> linear_dependence(std::span<const TruncSeries> series);

/// Coefficients c with target == sum c_i basis_i over the common window
/// (free coordinates set to zero), or nullopt.
std::optional<std::vector<Rat>> match_target(const TruncSeries& target,
                                             std::span<const TruncSeries> basis);

}  // namespace lacunary
