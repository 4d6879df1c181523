#pragma once

// The numeric side of the bound: the quotient recursion, the case 1 and
// exponent chains, the 2L ladder, the final chain to B1(l), and the l = 2
// constants. Every inequality is a ChainStep compared exactly through
// tower_cmp.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lacunary/tower.hpp"

namespace lacunary {

enum class Relation { less, less_equal, equal };
std::string to_string(Relation rel);

struct ChainStep {
  std::string label;
  Tower lhs;
  Relation rel;
  Tower rhs;
  bool ok = false;
  CmpMethod method = CmpMethod::structural;
  std::string detail;  // verdict, or the inconclusive comparison
};

struct ChainReport {
  std::string name;
  std::int64_t l = 0;
  std::vector<ChainStep> steps;

  bool ok() const;
  std::vector<const ChainStep*> failures() const;
};

/// Exact below l = 3; from l = 3 on intervals are tried first.
CmpOptions chain_options(std::int64_t l);

// Quantities

Tower lambda(std::int64_t l, std::int64_t d);  // 2*16^(l+1)*d^3
Tower lemma_base(std::int64_t l);              // 16^(l+2)*l^6
/// lambda(l,d) * prev^(2l)
Tower quotient_step(std::int64_t l, std::int64_t d, const Tower& prev);
/// r applications of quotient_step starting from 1.
Tower quotient_iterate(std::int64_t l, std::int64_t d, std::int64_t r);
/// 1 + 2l(1 + 2l(...)) with r ones: the lambda-exponent of the r-th iterate.
BigInt ladder_exponent(std::int64_t l, std::int64_t r);
/// 16^(l+1) * d^3 * ratio^(2l) * (1 + np)
Tower nl_bound(std::int64_t l, std::int64_t d, const Tower& ratio, const BigInt& np);

/// 2^(3+(4l+8)(3l)^(l-1)) * l^(2+(3l)^l)
Tower M_of(std::int64_t l);
/// 4^(2^(2l) l^(l+1)) * l^(2^(2l+1) l^l), the end of the 2L ladder.
Tower two_L_bound(std::int64_t l);
/// (4l)^((2l)^((3l)^(l+1)))
Tower B1(std::int64_t l);
/// "(4*l)^((2*l)^((3*l)^(l+1)))" with l substituted.
std::string B1_formula(std::int64_t l);

/// x_1 = 2, x_l = L * x_{l-1}^M, evaluated exactly.
BigInt x_recurrence(const BigInt& L, std::uint64_t M, std::int64_t l);
/// L^(1+M+...+M^(l-2)) * 2^(M^(l-1)), evaluated exactly.
BigInt x_closed_form(const BigInt& L, std::uint64_t M, std::int64_t l);

// Chains. Throw DomainError outside the documented ranges.

/// l >= 2, 1 <= d <= 2l(l-1), 1 <= r <= l-1.
ChainReport lemma1_check(std::int64_t l, std::int64_t d, std::int64_t r);
/// l >= 2
ChainReport case1_check(std::int64_t l);
/// l >= 2. The displayed chain for |(s-kd)/e| and, separately, its endpoint.
ChainReport exponent_chain_check(std::int64_t l);
/// l >= 2
ChainReport twoL_chain_check(std::int64_t l);
/// l >= 2. Includes both exponent lemmas and the case 1 closing comparison.
ChainReport final_chain_check(std::int64_t l);

// l = 2

struct L2Report {
  std::map<std::int64_t, std::size_t> shape_counts;         // nonstrict cap
  std::map<std::int64_t, std::size_t> shape_counts_strict;  // for reference
  BigInt rough_estimate;                                    // 3(2d+1), d = 4
  BigInt d1_terms;                                          // d = 1 case
  BigInt L_used;
  BigInt ratio_bound;
  BigInt h1_bound;
  BigInt case1_terms;
  BigInt case2_exp_min;
  BigInt case2_exp_max;
  BigInt denom_exponent;
  BigInt denom_terms;
  BigInt final_bound;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

L2Report l2_pipeline();

}  // namespace lacunary
