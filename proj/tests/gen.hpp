#pragma once

// Hand-rolled generators for the property tests.

#include <cstdint>
#include <random>

#include "lacunary/sparse_poly.hpp"

namespace testgen {

using lacunary::Exponent;
using lacunary::Rat;
using lacunary::SparsePoly;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  bool coin() { return range(0, 1) == 1; }

  Rat rat(std::int64_t bound) {
    std::int64_t num = 0;
    while (num == 0) num = range(-bound, bound);
    Rat r(static_cast<long>(num), static_cast<unsigned long>(range(1, bound)));
    r.canonicalize();
    return r;
  }

  SparsePoly poly(Exponent max_deg, std::int64_t max_terms, std::int64_t bound) {
    SparsePoly::TermMap t;
    const std::int64_t n = range(1, max_terms);
    for (std::int64_t i = 0; i < n; ++i) t[range(0, max_deg)] = rat(bound);
    return SparsePoly(std::move(t));
  }

  /// 1 + sparse tail of positive exponents.
  SparsePoly delta(Exponent max_deg, std::int64_t max_terms, std::int64_t bound) {
    SparsePoly::TermMap t{{0, Rat(1)}};
    const std::int64_t n = range(1, max_terms);
    for (std::int64_t i = 0; i < n; ++i) t[range(1, max_deg)] = rat(bound);
    return SparsePoly(std::move(t));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
