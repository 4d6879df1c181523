#pragma once

// Functional decomposition f = g(h) over Q, radical roots delta^e = eta^d,
// and sparse ratio representations.
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lacunary/sparse_poly.hpp"

namespace lacunary {

/// f = g(h) with h monic and h(0) = 0, the unique representative of the
/// ambiguity g(x) -> g(ax+b), h -> (h-b)/a.
struct Decomposition {
  SparsePoly g;
  SparsePoly h;
  Exponent d = 0;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// The decomposition with deg g = d if one exists over Q. Returns nullopt
/// when d does not divide deg f. Throws DomainError on constant f or d < 1.
std::optional<Decomposition> decompose_at_degree(const SparsePoly& f, Exponent d);

/// Every decomposition with deg g >= 2 and deg h >= 2, sorted by d.
std::vector<Decomposition> all_decompositions(const SparsePoly& f);

/// Brings an arbitrary pair to the normalized form (h monic, h(0) = 0)
/// without changing g(h).
Decomposition normalize_pair(const SparsePoly& g, const SparsePoly& h);

/// delta^e = eta^d with e minimal; e always divides d.
struct RadicalRoot {
  SparsePoly delta;
  Exponent d = 0;
  Exponent e = 0;
  SparsePoly eta;
};

/// Throws DomainError unless delta(0) == 1 and d >= 1.
RadicalRoot radical_root(const SparsePoly& delta, Exponent d);

/// The polynomial d-th root of p with root(0) = 1, if p is a perfect d-th
/// power. Requires p(0) == 1.
std::optional<SparsePoly> exact_root(const SparsePoly& p, Exponent d);

/// P/Q together with the counts of stored terms. No minimality claim.
struct RatioRep {
  SparsePoly P;
  SparsePoly Q;
  std::size_t terms_P = 0;
  std::size_t terms_Q = 0;
};

/// One summand c * (eta1/eta2)^exp_num * y^ypow.
struct RatioTerm {
  Rat c;
  std::int64_t exp_num = 0;
  Exponent ypow = 0;
};

/// Brings sum c (eta1/eta2)^j y^ypow, j in {-(M-1), ..., 0, 1}, over the
/// common denominator Q = eta2 * eta1^(M-1). The numerator summand for j is
/// c y^ypow eta1^(j+M-1) eta2^(1-j). No cancellation is attempted.
RatioRep assemble_ratio(std::span<const RatioTerm> terms, const SparsePoly& eta1,
                        const SparsePoly& eta2, std::int64_t M);

struct RatioCheck {
  bool ok = false;
  std::size_t terms_P = 0;
  std::size_t terms_Q = 0;
};

/// target * Q == P exactly.
RatioCheck verify_ratio(const SparsePoly& target, const RatioRep& rep);

}  // namespace lacunary
