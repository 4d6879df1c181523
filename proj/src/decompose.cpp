#include "lacunary/decompose.hpp"

#include "lacunary/series.hpp"

namespace lacunary {

Decomposition normalize_pair(const SparsePoly& g, const SparsePoly& h) {
  if (h.is_constant()) throw DomainError("normalize_pair: h must be non-constant");
  // h = a*H + b with H monic, H(0) = 0; then g(h) = g(a*H + b).
  const Rat a = h.leading_coefficient();
  const Rat b = h.coeff(0);
  const SparsePoly monic = (1 / a) * (h - SparsePoly::constant(b));
  const SparsePoly inner = a * SparsePoly::x() + SparsePoly::constant(b);
  SparsePoly outer = compose(g, inner);
  const Exponent d = outer.is_zero() ? 0 : outer.degree();
  return Decomposition{std::move(outer), monic, d};
}

std::optional<SparsePoly> exact_root(const SparsePoly& p, Exponent d) {
  if (d < 1) throw DomainError("exact_root: d must be positive");
  if (p.coeff(0) != 1) throw DomainError("exact_root: p(0) must be 1");
  const Exponent deg = p.degree();
  if (deg % d != 0) return std::nullopt;
  const Exponent r = deg / d;
  const TruncSeries u = pow_frac(p, 1, d, r + 1);
  SparsePoly::TermMap terms;
  for (const auto& [k, c] : u.coeffs()) terms.emplace(k, c);
  SparsePoly candidate(std::move(terms));
  if (pow(candidate, static_cast<std::uint64_t>(d)) != p) return std::nullopt;
  return candidate;
}

std::optional<Decomposition> decompose_at_degree(const SparsePoly& f, Exponent d) {
  if (f.is_constant()) throw DomainError("decompose_at_degree: f must be non-constant");
  if (d < 1) throw DomainError("decompose_at_degree: d must be positive");
  const Exponent n = f.degree();
  if (n % d != 0) return std::nullopt;
  const Exponent r = n / d;

  // The top r coefficients of f fix h: reversed, h~ is the d-th root of f~
  // modulo y^(r+1).
  const Rat lead = f.leading_coefficient();
  const SparsePoly reversed = tilde_transform((1 / lead) * f);
  const TruncSeries root = pow_frac(reversed, 1, d, r + 1);
  SparsePoly::TermMap h_terms;
  for (const auto& [k, c] : root.coeffs()) {
    if (k < r) h_terms.emplace(r - k, c);
  }
  const SparsePoly h(std::move(h_terms));

  // h-adic expansion of f; every digit must be a constant.
  SparsePoly::TermMap g_terms;
  SparsePoly rest = f;
  for (Exponent i = 0; !rest.is_zero(); ++i) {
    if (i > d) return std::nullopt;
    auto [quot, rem] = divmod(rest, h);
    if (!rem.is_constant()) return std::nullopt;
    g_terms.emplace(i, rem.coeff(0));
    rest = std::move(quot);
  }
  SparsePoly g(std::move(g_terms));
  if (g.is_zero() || g.degree() != d || compose(g, h) != f) return std::nullopt;
  return Decomposition{std::move(g), h, d};
}

std::vector<Decomposition> all_decompositions(const SparsePoly& f) {
  if (f.is_constant()) throw DomainError("all_decompositions: f must be non-constant");
  const Exponent n = f.degree();
  std::vector<Decomposition> out;
  for (Exponent d = 2; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    if (auto dec = decompose_at_degree(f, d)) out.push_back(std::move(*dec));
  }
  return out;
}

RadicalRoot radical_root(const SparsePoly& delta, Exponent d) {
  if (d < 1) throw DomainError("radical_root: d must be positive");
  if (delta.coeff(0) != 1) throw DomainError("radical_root: delta(0) must be 1");
  for (Exponent e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    const SparsePoly power = pow(delta, static_cast<std::uint64_t>(e));
    if (auto eta = exact_root(power, d)) return RadicalRoot{delta, d, e, std::move(*eta)};
  }
  // e = d always admits eta = delta, so this is unreachable for valid input.
  throw DomainError("no radical root");
}

RatioRep assemble_ratio(std::span<const RatioTerm> terms, const SparsePoly& eta1,
                        const SparsePoly& eta2, std::int64_t M) {
  if (M < 1) throw DomainError("assemble_ratio: M must be positive");
  if (eta2.is_zero()) throw DomainError("assemble_ratio: eta2 is zero");
  if (eta1.is_zero() && M > 1) throw DomainError("assemble_ratio: eta1 is zero");
  for (const auto& t : terms) {
    if (t.exp_num > 1 || t.exp_num < -(M - 1)) throw DomainError("assemble_ratio: exponent out of range");
  }
  const auto up = static_cast<std::uint64_t>(M - 1);
  // Powers eta1^0..eta1^M and eta2^0..eta2^M.
  std::vector<SparsePoly> p1{SparsePoly::constant(1)}, p2{SparsePoly::constant(1)};
  for (std::int64_t i = 1; i <= M; ++i) {
    p1.push_back(p1.back() * eta1);
    p2.push_back(p2.back() * eta2);
  }
  RatioRep rep;
  rep.Q = eta2 * p1[up];
  for (const auto& t : terms) {
    const auto i1 = static_cast<std::size_t>(t.exp_num + M - 1);
    const auto i2 = static_cast<std::size_t>(1 - t.exp_num);
    rep.P = rep.P + shift(t.c * (p1[i1] * p2[i2]), t.ypow);
  }
  rep.terms_P = rep.P.term_count();
  rep.terms_Q = rep.Q.term_count();
  return rep;
}

RatioCheck verify_ratio(const SparsePoly& target, const RatioRep& rep) {
  if (rep.Q.is_zero()) throw DomainError("verify_ratio: Q is zero");
  return RatioCheck{target * rep.Q == rep.P, rep.P.term_count(), rep.Q.term_count()};
}

}  // namespace lacunary
