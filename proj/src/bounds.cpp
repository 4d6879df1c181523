#include "lacunary/bounds.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "lacunary/series.hpp"

namespace lacunary {

namespace {

BigInt ipow(std::int64_t base, std::uint64_t e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), e);
  return out;
}

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

/// b^e with e == 0 folded to the leaf 1 and e == 1 to b.
Tower tpow(const Tower& b, const Tower& e) {
  if (e.kind() == Tower::Kind::leaf && e.value() == 1) return b;
  return pow(b, e);
}

Tower tpow(const Tower& b, const BigInt& e) {
  if (e == 0) return Tower(1L);
  return tpow(b, Tower(e));
}

Tower tpow(std::int64_t b, const BigInt& e) { return tpow(Tower(big(b)), e); }

/// (3l)^k as a tower (1 when k == 0).
Tower three_l(std::int64_t l, std::int64_t k) {
  return tpow(Tower(big(3 * l)), big(k));
}

BigInt three_l_value(std::int64_t l, std::int64_t k) { return ipow(3 * l, static_cast<std::uint64_t>(k)); }

void require_l(std::int64_t l, std::int64_t min_l, const char* what) {
  if (l < min_l) throw DomainError(std::string(what) + ": l out of range");
  if (l > 64) throw DomainError(std::string(what) + ": l too large");
}

class Chain {
 public:
  Chain(std::string name, std::int64_t l) : report_{std::move(name), l, {}}, opts_(chain_options(l)) {}

  void step(std::string label, const Tower& lhs, Relation rel, const Tower& rhs) {
    ChainStep st{std::move(label), lhs, rel, rhs, false, CmpMethod::structural, {}};
    try {
      const CmpOutcome out = compare(lhs, rhs, opts_);
      st.method = out.method;
      const auto o = out.order;
      switch (rel) {
        case Relation::less:
          st.ok = o < 0;
          break;
        case Relation::less_equal:
          st.ok = o <= 0;
          break;
        case Relation::equal:
          st.ok = o == 0;
          break;
      }
      st.detail = o < 0 ? "lhs < rhs" : o == 0 ? "lhs = rhs" : "lhs > rhs";
    } catch (const InconclusiveError& e) {
      st.ok = false;
      st.detail = e.what();
    }
    report_.steps.push_back(std::move(st));
  }

  ChainReport done() { return std::move(report_); }

 private:
  ChainReport report_;
  CmpOptions opts_;
};

}  // namespace

std::string to_string(Relation rel) {
  switch (rel) {
    case Relation::less:
      return "<";
    case Relation::less_equal:
      return "<=";
    case Relation::equal:
      return "=";
  }
  return "?";
}

bool ChainReport::ok() const {
  return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.ok; });
}

std::vector<const ChainStep*> ChainReport::failures() const {
  std::vector<const ChainStep*> out;
  for (const auto& s : steps) {
    if (!s.ok) out.push_back(&s);
  }
  return out;
}

CmpOptions chain_options(std::int64_t l) {
  CmpOptions opts;
  opts.interval_first = l >= 3;
  return opts;
}

Tower lambda(std::int64_t l, std::int64_t d) {
  if (l < 1 || d < 1) throw DomainError("lambda: need l >= 1 and d >= 1");
  return Tower::product({Tower(2L), pow(Tower(16L), Tower(big(l + 1))), pow(Tower(big(d)), Tower(3L))});
}

Tower lemma_base(std::int64_t l) {
  if (l < 1) throw DomainError("lemma_base: need l >= 1");
  return Tower::product({pow(Tower(16L), Tower(big(l + 2))), tpow(l, 6)});
}

Tower quotient_step(std::int64_t l, std::int64_t d, const Tower& prev) {
  return Tower::product({lambda(l, d), tpow(prev, big(2 * l))});
}

Tower quotient_iterate(std::int64_t l, std::int64_t d, std::int64_t r) {
  if (r < 0) throw DomainError("quotient_iterate: r must be >= 0");
  Tower q(1L);
  for (std::int64_t i = 0; i < r; ++i) q = quotient_step(l, d, q);
  return q;
}

BigInt ladder_exponent(std::int64_t l, std::int64_t r) {
  if (r < 1) throw DomainError("ladder_exponent: r must be >= 1");
  BigInt e = 1;
  for (std::int64_t i = 1; i < r; ++i) e = 1 + 2 * big(l) * e;
  return e;
}

Tower nl_bound(std::int64_t l, std::int64_t d, const Tower& ratio, const BigInt& np) {
  if (np < 0) throw DomainError("nl_bound: n_p must be >= 0");
  return Tower::product({pow(Tower(16L), Tower(big(l + 1))), pow(Tower(big(d)), Tower(3L)),
                         tpow(ratio, big(2 * l)), Tower(BigInt(1 + np))});
}

Tower M_of(std::int64_t l) {
  require_l(l, 2, "M_of");
  const Tower e2 = Tower::sum({Tower(3L), Tower::product({Tower(big(4 * l + 8)), three_l(l, l - 1)})});
  const Tower el = Tower::sum({Tower(2L), three_l(l, l)});
  return Tower::product({pow(Tower(2L), e2), pow(Tower(big(l)), el)});
}

Tower two_L_bound(std::int64_t l) {
  require_l(l, 1, "two_L_bound");
  const Tower e4 = Tower::product({tpow(2, big(2 * l)), tpow(l, big(l + 1))});
  const Tower el = Tower::product({tpow(2, big(2 * l + 1)), tpow(l, big(l))});
  return Tower::product({pow(Tower(4L), e4), tpow(Tower(big(l)), el)});
}

Tower B1(std::int64_t l) {
  require_l(l, 1, "B1");
  return pow(Tower(big(4 * l)), pow(Tower(big(2 * l)), pow(Tower(big(3 * l)), Tower(big(l + 1)))));
}

std::string B1_formula(std::int64_t l) {
  const std::string s = std::to_string(l);
  return "(4*" + s + ")^((2*" + s + ")^((3*" + s + ")^(" + s + "+1)))";
}

BigInt x_recurrence(const BigInt& L, std::uint64_t M, std::int64_t l) {
  if (l < 1) throw DomainError("x_recurrence: l must be >= 1");
  BigInt x = 2;
  for (std::int64_t i = 2; i <= l; ++i) {
    BigInt p;
    mpz_pow_ui(p.get_mpz_t(), x.get_mpz_t(), M);
    x = L * p;
  }
  return x;
}

BigInt x_closed_form(const BigInt& L, std::uint64_t M, std::int64_t l) {
  if (l < 1) throw DomainError("x_closed_form: l must be >= 1");
  BigInt geometric = 0;
  BigInt term = 1;
  for (std::int64_t i = 0; i + 2 <= l; ++i) {
    geometric += term;
    term *= M;
  }
  // term == M^(l-1)
  BigInt a, b;
  mpz_pow_ui(a.get_mpz_t(), L.get_mpz_t(), geometric.get_ui());
  mpz_ui_pow_ui(b.get_mpz_t(), 2, term.get_ui());
  return a * b;
}

ChainReport lemma1_check(std::int64_t l, std::int64_t d, std::int64_t r) {
  require_l(l, 2, "lemma1_check");
  if (d < 1 || d > 2 * l * (l - 1)) throw DomainError("lemma1_check: need 1 <= d <= 2l(l-1)");
  if (r < 1 || r > l - 1) throw DomainError("lemma1_check: need 1 <= r <= l-1");

  Chain c("lemma1", l);
  const Tower lam = lambda(l, d);
  const Tower X = lemma_base(l);
  const BigInt E = three_l_value(l, r - 1);
  const BigInt ladder = ladder_exponent(l, r);
  const Tower iterate = quotient_iterate(l, d, r);
  const std::int64_t dmax = 2 * l * (l - 1);

  c.step("iterate = lambda^(1+2l(1+2l(...)))", iterate, Relation::equal, tpow(lam, ladder));
  c.step("1+2l(1+2l(...)) <= (3l)^(r-1)", Tower(ladder), Relation::less_equal, Tower(E));
  c.step("iterate <= lambda^((3l)^(r-1))", iterate, Relation::less_equal, tpow(lam, E));
  c.step("lambda <= 2*16^(l+1)*(2l(l-1))^3", lam, Relation::less_equal, lambda(l, dmax));
  c.step("2*16^(l+1)*(2l(l-1))^3 <= 16^(l+2)*l^6", lambda(l, dmax), Relation::less_equal, X);
  c.step("lambda^((3l)^(r-1)) <= (16^(l+2)*l^6)^((3l)^(r-1))", tpow(lam, E), Relation::less_equal,
         tpow(X, E));
  return c.done();
}

ChainReport case1_check(std::int64_t l) {
  require_l(l, 2, "case1_check");
  Chain c("case1", l);
  const std::int64_t d = 2 * l * (l - 1);
  const Tower X = lemma_base(l);
  const Tower ratio = tpow(X, three_l_value(l, l - 2));
  const BigInt E = 2 * big(l) * three_l_value(l, l - 2);
  const Tower sixteen = pow(Tower(16L), Tower(big(l + 1)));

  const Tower q0 = nl_bound(l, d, ratio, 0);
  const Tower q1 = Tower::product({sixteen, pow(Tower(big(d)), Tower(3L)), tpow(X, E)});
  const Tower q2 = Tower::product({sixteen, pow(Tower(big(2 * l * l)), Tower(3L)), tpow(X, E)});
  const Tower q3 = tpow(X, BigInt(E + 1));
  const Tower q4 = tpow(X, three_l_value(l, l - 1));

  c.step("n_l <= 16^(l+1) d^3 (n_l/n_1)^(2l) (1+n_0)", q0, Relation::equal, q1);
  c.step("d^3 <= (2l^2)^3", q1, Relation::less_equal, q2);
  c.step("16^(l+1)(2l^2)^3 X^(2l(3l)^(l-2)) < X^(2l(3l)^(l-2)+1)", q2, Relation::less, q3);
  c.step("2l(3l)^(l-2)+1 < (3l)^(l-1)", Tower(BigInt(E + 1)), Relation::less,
         Tower(three_l_value(l, l - 1)));
  c.step("X^(2l(3l)^(l-2)+1) < X^((3l)^(l-1))", q3, Relation::less, q4);
  return c.done();
}

ChainReport exponent_chain_check(std::int64_t l) {
  require_l(l, 2, "exponent_chain_check");
  Chain c("exponent", l);
  const std::int64_t d = 2 * l * (l - 1);
  const Tower L(big(l));
  const Tower R = tpow(lemma_base(l), three_l_value(l, l - 1));
  const Tower R_pow2 = tpow(Tower::product({pow(Tower(2L), Tower(big(4 * (l + 2)))), tpow(l, 6)}),
                           three_l_value(l, l - 1));
  const BigInt big_e = big(4 * l + 8) * three_l_value(l, l - 1);
  const Tower four_l2 = Tower(big(4 * l * l));

  // Every quantity below is the displayed one plus 1, so that "-1" drops out.
  const Tower q0 = Tower::sum({Tower(big(2 * d)), Tower::product({Tower(big(2 * l * d)), R})});
  const Tower q1 = Tower::product({Tower(big(4 * l * (l - 1))), Tower::sum({Tower(1L), L * R})});
  const Tower q2 = Tower::product({four_l2, Tower::sum({Tower(1L), L * R_pow2})});
  const Tower q3 = Tower::product(
      {four_l2, Tower(2L), tpow(2, big_e), tpow(L, three_l_value(l, l))});
  const Tower q4 = M_of(l);

  c.step("2d-1+2l(n_l/n_{p+1})d <= 2*2l(l-1)(1+l*n_l/n_{p+1})-1", q0, Relation::less_equal, q1);
  c.step("... <= 2^2 l^2 (1+l(2^(4(l+2)) l^6)^((3l)^(l-1)))-1", q1, Relation::less_equal, q2);
  c.step("... < 2^2 l^2 (2*2^((4l+8)(3l)^(l-1)) l^((3l)^l))-1", q2, Relation::less, q3);
  c.step("... = 2^(3+(4l+8)(3l)^(l-1)) l^(2+(3l)^l)-1 = M-1", q3, Relation::equal, q4);
  c.step("endpoint: 2d-1+2l(n_l/n_{p+1})d <= M-1", q0, Relation::less_equal, q4);
  return c.done();
}

ChainReport twoL_chain_check(std::int64_t l) {
  require_l(l, 2, "twoL_chain_check");
  Chain c("twoL", l);
  const std::int64_t d = 2 * l * (l - 1);
  const Tower L(big(l));
  const BigInt E = three_l_value(l, l - 1);
  const BigInt El = three_l_value(l, l);
  const Tower R = tpow(lemma_base(l), E);
  const Tower R_pow2 = tpow(Tower::product({pow(Tower(2L), Tower(big(4 * (l + 2)))), tpow(l, 6)}), E);
  const BigInt core = 2 * big(l) * big(l + 2) * E;  // 2l(l+2)(3l)^(l-1)

  const Tower t0 = Tower::product(
      {Tower(2L), Tower(big(2 * d + 1)), tpow(Tower::sum({Tower(1L), Tower(2L) * R}), big(l))});
  const Tower t1 = Tower::product({Tower(2L), Tower(big(4 * l * (l - 1) + 1)),
                                   tpow(Tower::sum({Tower(1L), Tower(2L) * R_pow2}), big(l))});
  const Tower t2 = Tower::product({Tower(8L), tpow(L, BigInt(2)), tpow(2, BigInt(2 * big(l) + 2 * core)),
                                   tpow(L, BigInt(2 * El))});
  const Tower t3 = Tower::product({tpow(2, BigInt(3 + 2 * big(l) + 2 * core)), tpow(L, BigInt(2 * El + 2))});
  // 4^(1.5+...) carried as 8 * 4^(...)
  const Tower t4 = Tower::product({Tower(8L), tpow(4, BigInt(big(l) + core)), tpow(L, BigInt(2 * El + 2))});
  const Tower t5 = Tower::product(
      {tpow(4, BigInt(E * (2 * big(l) * l + 4 * l + 1))), tpow(L, BigInt(2 * (El + 1)))});
  const Rat e6 = Rat(E) * Rat(ipow(4, l), ipow(3, l)) * 3 * l * l;
  if (e6.get_den() != 1) throw DomainError("twoL_chain_check: non-integral exponent");
  const Tower t6 = Tower::product({tpow(4, e6.get_num()), tpow(L, BigInt(2 * ipow(4 * l, l)))});
  const Tower t7 = two_L_bound(l);

  c.step("2L <= 2(2d+1)(1+2n_l/n_{p+1})^l  (d = 2l(l-1))", t0, Relation::less_equal, t1);
  c.step("... < 2^3 l^2 2^(2l+4l(l+2)(3l)^(l-1)) l^(2(3l)^l)", t1, Relation::less, t2);
  c.step("... = 2^(3+2l+4l(l+2)(3l)^(l-1)) l^(2(3l)^l+2)", t2, Relation::equal, t3);
  c.step("... = 4^(1.5+l+2l(l+2)(3l)^(l-1)) l^(2(3l)^l+2)", t3, Relation::equal, t4);
  c.step("... < 4^((3l)^(l-1)(2l^2+4l+1)) l^(2((3l)^l+1))", t4, Relation::less, t5);
  c.step("... < 4^((3l)^(l-1)(4/3)^l 3l^2) l^(2(4l)^l)", t5, Relation::less, t6);
  c.step("... = 4^(2^(2l) l^(l+1)) l^(2^(2l+1) l^l)", t6, Relation::equal, t7);
  return c.done();
}

ChainReport final_chain_check(std::int64_t l) {
  require_l(l, 2, "final_chain_check");
  Chain c("final", l);
  const Tower L(big(l));
  const BigInt E = three_l_value(l, l - 1);
  const BigInt El = three_l_value(l, l);
  const BigInt Etop = three_l_value(l, l + 1);
  const BigInt A = E * (4 * big(l) * l + 4 * l - 8);
  const BigInt C = El * (l - 1);

  const Tower twoL = two_L_bound(l);
  const Tower f0 = tpow(twoL, tpow(M_of(l), big(l - 1)));
  const Tower m_pow = Tower::product(
      {tpow(2, BigInt((3 + big(4 * l + 8) * E) * (l - 1))), tpow(L, BigInt((2 + El) * (l - 1)))});
  const Tower f1 = tpow(twoL, m_pow);
  const Tower f2 = Tower::product(
      {pow(Tower(4L), Tower::product({tpow(2, BigInt(A + 5 * l - 3)), tpow(L, BigInt(C + 3 * l - 1))})),
       tpow(L, Tower::product({tpow(2, BigInt(A + 5 * l - 2)), tpow(L, BigInt(C + 3 * l - 2))}))});
  const Tower top = Tower::product({tpow(2, Etop), tpow(L, Etop)});
  const Tower f3 = Tower::product({pow(Tower(4L), top), tpow(L, top)});
  const Tower b1 = B1(l);

  c.step("(2L)^(M^(l-1)) <= (4^(2^(2l) l^(l+1)) l^(2^(2l+1) l^l))^(2^((3+(4l+8)(3l)^(l-1))(l-1)) "
         "l^((2+(3l)^l)(l-1)))",
         f0, Relation::less_equal, f1);
  c.step("... = 4^(2^(A+5l-3) l^(C+3l-1)) l^(2^(A+5l-2) l^(C+3l-2)), A = (3l)^(l-1)(4l^2+4l-8), "
         "C = (3l)^l(l-1)",
         f1, Relation::equal, f2);
  c.step("(3l)^(l-1)(4l^2+4l-8)+5l-2 < (3l)^(l+1)", Tower(BigInt(A + 5 * l - 2)), Relation::less,
         tpow(3 * l, big(l + 1)));
  c.step("(3l)^l(l-1)+3l-1 < (3l)^(l+1)", Tower(BigInt(C + 3 * l - 1)), Relation::less,
         tpow(3 * l, big(l + 1)));
  c.step("... <= 4^(2^((3l)^(l+1)) l^((3l)^(l+1))) l^(2^((3l)^(l+1)) l^((3l)^(l+1)))", f2,
         Relation::less_equal, f3);
  c.step("... = (4l)^((2l)^((3l)^(l+1)))", f3, Relation::equal, b1);
  c.step("case 1: (16^(l+2) l^6)^((3l)^(l-1)) <= B1(l)", tpow(lemma_base(l), E), Relation::less_equal, b1);
  return c.done();
}

L2Report l2_pipeline() {
  L2Report r;
  const std::int64_t l = 2;
  const std::int64_t d_max = 2 * l * (l - 1);
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) r.failures.push_back(what);
  };

  // t_i exponents: ((1-s)/d + h_1) n_2 <= 2 n_2; the count does not depend on n.
  for (std::int64_t d = 2; d <= d_max; ++d) {
    const std::array<std::int64_t, 2> n{1, d};
    r.shape_counts[d] = enumerate_term_shapes(l, 1, d, n, CapMode::nonstrict).size();
    r.shape_counts_strict[d] = enumerate_term_shapes(l, 1, d, n, CapMode::strict).size();
  }
  r.rough_estimate = 3 * (2 * big(d_max) + 1);
  r.d1_terms = big(l + 1);

  r.L_used = 17;
  for (const auto& [d, count] : r.shape_counts) {
    check(BigInt(static_cast<unsigned long>(count)) <= r.L_used,
          "shape count for d = " + std::to_string(d) + " exceeds L");
  }
  check(r.L_used <= r.rough_estimate, "L above the rough estimate");

  // n_2 <= L(L+1) d (1+n_1) <= L(L+1) d_max 2 n_1
  r.ratio_bound = r.L_used * (r.L_used + 1) * d_max * 2;
  // h_1 <= n_2/(2 n_1)
  r.h1_bound = r.ratio_bound / 2;
  // h_1 in {0..h1_bound} plus gamma_0 y^(m/d)
  r.case1_terms = r.h1_bound + 1 + 1;

  bool first = true;
  for (std::int64_t d = 2; d <= d_max; ++d) {
    for (std::int64_t s = 1 - 2 * d; s <= 1; ++s) {
      for (std::int64_t k = 0; k <= 2; ++k) {
        for (std::int64_t e = 1; e <= d; ++e) {
          if (d % e != 0 || s % e != 0) continue;
          const BigInt v = big((s - k * d) / e);
          if (first || v < r.case2_exp_min) r.case2_exp_min = v;
          if (first || v > r.case2_exp_max) r.case2_exp_max = v;
          first = false;
        }
      }
    }
  }
  // common denominator eta_{p,1}^(M-1) eta_{p,2}, both factors with <= 2 terms
  r.denom_exponent = -r.case2_exp_min;
  const BigInt eta_terms = 2;
  BigInt eta1_pow;
  mpz_pow_ui(eta1_pow.get_mpz_t(), eta_terms.get_mpz_t(), r.denom_exponent.get_ui());
  r.denom_terms = eta1_pow * eta_terms;
  r.final_bound = r.L_used * r.denom_terms;

  check(r.rough_estimate == 27, "rough estimate != 27");
  check(r.d1_terms == 3, "d = 1 term count != 3");
  check(r.ratio_bound == 2448, "ratio bound != 2448");
  check(r.h1_bound == 1224, "h_1 bound != 1224");
  check(r.case1_terms == 1226, "case 1 term count != 1226");
  check(r.case2_exp_max == 1, "largest (s-kd)/e != 1");
  check(r.case2_exp_min == -15, "smallest (s-kd)/e != -15");
  check(r.denom_terms == ipow(2, 16), "denominator terms != 2^16");
  check(r.final_bound == 1114112, "final bound != 1114112");
  return r;
}

}  // namespace lacunary
