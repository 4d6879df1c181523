#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <tuple>

#include "gen.hpp"
#include "lacunary/series.hpp"

using namespace lacunary;

namespace {

SparsePoly P(const char* s) { return parse_poly(s); }

TruncSeries S(std::int64_t ram, std::int64_t trunc, TruncSeries::CoeffMap m) {
  return TruncSeries(ram, trunc, std::move(m));
}

TruncSeries series_pow(const TruncSeries& a, std::int64_t k) {
  TruncSeries out(a.ram(), a.trunc_num(), {{0, Rat(1)}});
  for (std::int64_t i = 0; i < k; ++i) out = out * a;
  return out;
}

// C(alpha, j) via the falling factorial.
Rat binom(const Rat& alpha, std::int64_t j) {
  Rat out = 1;
  for (std::int64_t i = 0; i < j; ++i) out = out * (alpha - i) / (i + 1);
  return out;
}

// sum_j C(s/d, j) (delta - 1)^j truncated below y^T.
SparsePoly binomial_oracle(const SparsePoly& delta, std::int64_t s, std::int64_t d, std::int64_t T) {
  const SparsePoly tail = delta - SparsePoly::constant(1);
  SparsePoly acc;
  SparsePoly term = SparsePoly::constant(1);
  for (std::int64_t j = 0; !term.is_zero(); ++j) {
    acc = acc + binom(Rat(s, d), j) * term;
    term = mul_truncated(term, tail, T);
  }
  return truncate(acc, T);
}

// Brute-force count of (s, h) with h_1 n_{p+1} + ... + h_{l-p} n_l + (1-s) m/d
// under 2 n_l, multiplied through by d. Entries of h are bounded by 2 n_l / n_{p+1}.
std::set<std::pair<std::int64_t, std::vector<std::int64_t>>> shape_oracle(
    std::size_t l, std::size_t p, std::int64_t d, const std::vector<std::int64_t>& n, bool strict) {
  std::set<std::pair<std::int64_t, std::vector<std::int64_t>>> out;
  const std::int64_t m = n[l - 1];
  const std::size_t width = l - p;
  const std::int64_t hmax = 2 * m / n[p];
  std::vector<std::int64_t> h(width, 0);
  for (std::int64_t s = 1 - 2 * d; s <= 1; ++s) {
    // odometer over [0, hmax]^width
    std::fill(h.begin(), h.end(), 0);
    while (true) {
      std::int64_t y = (1 - s) * m;
      for (std::size_t j = 0; j < width; ++j) y += h[j] * n[p + j] * d;
      const std::int64_t cap = 2 * m * d;
      if (strict ? y < cap : y <= cap) out.insert({s, h});
      std::size_t j = 0;
      while (j < width && h[j] == hmax) h[j++] = 0;
      if (j == width) break;
      ++h[j];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("poly_to_series examples") {
  CHECK(poly_to_series(P("1+x"), 2, 6) == S(2, 6, {{0, 1}, {2, 1}}));
  CHECK(poly_to_series(P("x^5"), 1, 3).is_zero());
  CHECK(poly_to_series(P("1+2*x^3"), 1, 10) == S(1, 10, {{0, 1}, {3, 2}}));
}

TEST_CASE("TruncSeries basics") {
  const TruncSeries a = S(2, 6, {{0, 1}, {1, Rat(1, 2)}, {7, 3}});
  CHECK(a.coeffs().size() == 2);
  CHECK(a.rescaled(4) == S(4, 12, {{0, 1}, {2, Rat(1, 2)}}));
  CHECK_THROWS_AS(a.rescaled(3), DomainError);
  CHECK(a.to_string() == "1 + 1/2*y^(1/2) + O(y^3)");
  // mixed ramification: window is the smaller one
  const TruncSeries b = S(3, 6, {{1, 1}});
  const TruncSeries sum = a + b;
  CHECK(sum.ram() == 6);
  CHECK(sum.trunc_num() == 12);
  CHECK(sum.coeff(2) == 1);
  CHECK(sum.coeff(3) == Rat(1, 2));
}

TEST_CASE("pow_frac examples") {
  CHECK(pow_frac(P("1+x"), 1, 2, 3) == S(1, 3, {{0, 1}, {1, Rat(1, 2)}, {2, Rat(-1, 8)}}));
  CHECK(pow_frac(P("1+x+7*x^4"), 0, 3, 9) == S(1, 9, {{0, 1}}));
  CHECK(pow_frac(P("1+2*x+x^2"), 1, 2, 5) == S(1, 5, {{0, 1}, {1, 1}}));
  CHECK_THROWS_AS(pow_frac(P("2+x"), 1, 2, 5), DomainError);
  CHECK_THROWS_AS(pow_frac(P("1+x"), 1, 0, 5), DomainError);
  // over ramification 3 the exponents live at multiples of 3
  const TruncSeries r = pow_frac(P("1+x"), 1, 2, 7, 3);
  CHECK(r.ram() == 3);
  CHECK(r.coeff(3) == Rat(1, 2));
  CHECK(r.coeff(6) == Rat(-1, 8));
  CHECK(r.coeffs().size() == 3);
}

TEST_CASE("property: pow_frac matches the binomial series") {
  testgen::Gen gen(0x5e1);
  for (int trial = 0; trial < 120; ++trial) {
    const SparsePoly delta = gen.delta(6, 3, 6);
    const std::int64_t s = gen.range(-5, 5);
    const std::int64_t d = gen.range(1, 5);
    const std::int64_t T = gen.range(1, 14);
    CHECK(pow_frac(delta, s, d, T) == poly_to_series(binomial_oracle(delta, s, d, T), 1, T));
  }
}

TEST_CASE("property: root and inverse identities") {
  testgen::Gen gen(0x5e2);
  for (int trial = 0; trial < 250; ++trial) {
    const SparsePoly delta = gen.delta(5, 3, 5);
    const std::int64_t s = gen.range(-5, 5);
    const std::int64_t d = gen.range(2, 5);
    const std::int64_t T = gen.range(1, 16);
    const TruncSeries u = pow_frac(delta, s, d, T);
    const TruncSeries one(1, T, {{0, Rat(1)}});
    const TruncSeries ds = poly_to_series(delta, 1, T);
    // u^d == delta^s, written without negative powers
    if (s >= 0) {
      CHECK(series_pow(u, d) == series_pow(ds, s));
    } else {
      CHECK(series_pow(u, d) * series_pow(ds, -s) == one);
    }
    CHECK(u * pow_frac(delta, -s, d, T) == one);
    CHECK(pow_frac(delta, d, d, T) == ds);
  }
}

TEST_CASE("enumerate_term_shapes: l = 2 counts against brute force") {
  const std::vector<std::int64_t> n{1, 12};
  const std::int64_t nonstrict[] = {9, 12, 15};
  const std::int64_t strict[] = {6, 9, 12};
  for (std::int64_t d = 2; d <= 4; ++d) {
    const auto ns = enumerate_term_shapes(2, 1, d, n, CapMode::nonstrict);
    const auto st = enumerate_term_shapes(2, 1, d, n, CapMode::strict);
    CHECK(ns.size() == shape_oracle(2, 1, d, n, false).size());
    CHECK(st.size() == shape_oracle(2, 1, d, n, true).size());
    CHECK(static_cast<std::int64_t>(ns.size()) == nonstrict[d - 2]);
    CHECK(static_cast<std::int64_t>(st.size()) == strict[d - 2]);
    CHECK(ns.size() <= 17);
  }
  // the counts do not depend on n
  CHECK(enumerate_term_shapes(2, 1, 2, std::vector<std::int64_t>{5, 8}, CapMode::nonstrict).size() == 9);
}

TEST_CASE("enumerate_term_shapes: l = 1") {
  const std::vector<std::int64_t> n{7};
  const auto shapes = enumerate_term_shapes(1, 0, 1, n, CapMode::strict);
  // h_1 + (1 - s) < 2 with s in {-1, 0, 1}
  std::set<std::pair<std::int64_t, std::int64_t>> want{{0, 0}, {1, 0}, {1, 1}};
  std::set<std::pair<std::int64_t, std::int64_t>> got;
  for (const auto& t : shapes) got.insert({t.s, t.h[0]});
  CHECK(got == want);
  CHECK_THROWS_AS(enumerate_term_shapes(1, 0, 2, n), DomainError);
  CHECK_THROWS_AS(enumerate_term_shapes(2, 2, 1, std::vector<std::int64_t>{1, 2}), DomainError);
  CHECK_THROWS_AS(enumerate_term_shapes(2, 0, 1, std::vector<std::int64_t>{2, 2}), DomainError);
}

TEST_CASE("property: enumeration matches brute force and respects the count bound") {
  testgen::Gen gen(0x5e3);
  int brute = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t l = static_cast<std::size_t>(gen.range(1, 4));
    const std::int64_t d = gen.range(1, std::max<std::int64_t>(1, 2 * static_cast<std::int64_t>(l * (l - 1))));
    std::vector<std::int64_t> n;
    std::int64_t last = 0;
    for (std::size_t i = 0; i + 1 < l; ++i) n.push_back(last += gen.range(1, 6));
    // n_l: next multiple of d above last
    n.push_back((last / d + 1 + gen.range(0, 2)) * d);
    const std::size_t p = static_cast<std::size_t>(gen.range(0, static_cast<std::int64_t>(l) - 1));
    const bool strict = gen.coin();
    const auto shapes = enumerate_term_shapes(l, p, d, n, strict ? CapMode::strict : CapMode::nonstrict);
    std::set<std::pair<std::int64_t, std::vector<std::int64_t>>> got;
    for (const auto& t : shapes) {
      got.insert({t.s, t.h});
      std::int64_t k = 0;
      std::int64_t y = (1 - t.s) * n.back();
      for (std::size_t j = 0; j < t.h.size(); ++j) {
        k += t.h[j];
        y += t.h[j] * n[p + j] * d;
      }
      CHECK(t.k == k);
      CHECK(t.ypow_num == y);
      CHECK(t.p == p);
    }
    CHECK(got.size() == shapes.size());
    // the brute-force oracle is only affordable on small boxes
    double box = static_cast<double>(2 * d + 1);
    for (std::size_t j = p; j < l; ++j) box *= static_cast<double>(2 * n.back() / n[p] + 1);
    if (box < 2e5) {
      ++brute;
      CHECK(got == shape_oracle(l, p, d, n, strict));
    }
    CHECK(std::is_sorted(shapes.begin(), shapes.end(), [](const TermShape& a, const TermShape& b) {
      return std::tie(a.s, a.h) < std::tie(b.s, b.h);
    }));
    CHECK(Rat(static_cast<long>(shapes.size())) <= shape_count_bound(l, p, d, n));
  }
  CHECK(brute > 100);
}

TEST_CASE("term_value examples") {
  const SparsePoly delta = P("1 + 3*x^2");
  const std::int64_t d = 2, m = 4, T = 40;  // window y^20 over ramification 2
  TermShape base{0, 1, {0}, 0, std::nullopt, 0};
  CHECK(term_value(base, delta, m, d, T) == pow_frac(delta, 1, d, T, d));

  TermShape low{0, 1 - 2 * d, {0}, 0, std::nullopt, 2 * d * m};
  const TruncSeries v = term_value(low, delta, m, d, T);
  // undo the shift and multiply by delta^((2d-1)/d)
  TruncSeries unshifted(d, T);
  {
    TruncSeries::CoeffMap c;
    for (const auto& [k, x] : v.coeffs()) c.emplace(k - 2 * d * m, x);
    unshifted = TruncSeries(d, T - 2 * d * m, c);
  }
  const TruncSeries prod = unshifted * pow_frac(delta, 2 * d - 1, d, T - 2 * d * m, d);
  CHECK(prod == TruncSeries(d, T - 2 * d * m, {{0, Rat(1)}}));

  TermShape far{0, 1, {5}, 5, std::nullopt, 40};
  CHECK(term_value(far, delta, m, d, T).is_zero());

  TermShape scaled = base;
  scaled.c = Rat(7, 2);
  CHECK(term_value(scaled, delta, m, d, T) == Rat(7, 2) * pow_frac(delta, 1, d, T, d));

  // k feeds the exponent s/d - k
  TermShape withk{0, 1, {1}, 1, std::nullopt, 8};
  CHECK(term_value(withk, delta, m, d, T) == shift(pow_frac(delta, 1 - d, d, T, d), 8));
}

TEST_CASE("puiseux_basis examples") {
  // f = (x^3 + 5)^2
  const SparsePoly f = P("x^6 + 10*x^3 + 25");
  const auto basis = puiseux_basis(f, 2, 4);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0] == poly_to_series(P("1 + 5*x^3"), 1, 4));
  CHECK(basis[1] == poly_to_series(P("x^3"), 1, 4));

  const auto mono = puiseux_basis(P("x^6"), 3, 7);
  REQUIRE(mono.size() == 4);
  for (std::size_t j = 0; j < mono.size(); ++j) {
    CHECK(mono[j] == TruncSeries(1, 7, {{static_cast<std::int64_t>(2 * j), Rat(1)}}));
  }

  const auto quartic = puiseux_basis(P("x^4 + 1"), 2, 3);
  REQUIRE(quartic.size() == 2);
  CHECK(quartic[0] == TruncSeries(1, 3, {{0, Rat(1)}}));
  CHECK(quartic[1] == TruncSeries(1, 3, {{2, Rat(1)}}));

  CHECK_THROWS_AS(puiseux_basis(P("x^5+1"), 2, 4), DomainError);
}

TEST_CASE("linear_dependence examples") {
  const std::vector<TruncSeries> dep{S(1, 4, {{0, 1}, {1, 1}}), S(1, 4, {{1, 1}}), S(1, 4, {{0, 1}})};
  const auto v = linear_dependence(dep);
  REQUIRE(v);
  CHECK(*v == std::vector<Rat>{1, -1, -1});

  const std::vector<TruncSeries> indep{S(1, 4, {{0, 1}}), S(1, 4, {{1, 1}}), S(1, 4, {{2, 1}})};
  CHECK_FALSE(linear_dependence(indep));

  // h~ = f~^(1/2) for f = (x^3 + c)^2
  const SparsePoly f = P("x^6 - 4*x^3 + 4");
  std::vector<TruncSeries> rows{poly_to_series(P("1 - 2*x^3"), 1, 12)};
  for (auto& b : puiseux_basis(f, 2, 12)) rows.push_back(b);
  const auto k = linear_dependence(rows);
  REQUIRE(k);
  CHECK((*k)[0] == 1);
  CHECK((*k)[1] == -1);
  for (std::size_t i = 2; i < k->size(); ++i) CHECK((*k)[i] == 0);
}

TEST_CASE("property: kernel vectors re-verify and survive shorter windows") {
  testgen::Gen gen(0x5e4);
  int dependent = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t T = gen.range(2, 8);
    const std::size_t count = static_cast<std::size_t>(gen.range(1, 6));
    std::vector<TruncSeries> rows;
    for (std::size_t i = 0; i < count; ++i) {
      if (i >= 2 && gen.coin()) {
        // force a dependence now and then
        rows.push_back(gen.rat(4) * rows[0] + gen.rat(4) * rows[i - 1]);
        continue;
      }
      rows.push_back(poly_to_series(gen.poly(T, 3, 4), 1, T));
    }
    const auto v = linear_dependence(rows);
    if (!v) continue;
    ++dependent;
    bool nonzero = false;
    for (const auto& x : *v) nonzero = nonzero || x != 0;
    CHECK(nonzero);
    for (std::int64_t t = T; t >= 0; --t) {
      TruncSeries sum(1, t);
      for (std::size_t i = 0; i < rows.size(); ++i) sum = sum + (*v)[i] * rows[i].truncated(t);
      CHECK(sum.is_zero());
    }
  }
  CHECK(dependent > 20);
}

TEST_CASE("match_target examples") {
  const std::vector<TruncSeries> basis{S(1, 5, {{0, 1}, {2, 3}}), S(1, 5, {{1, 1}}), S(1, 5, {{3, 1}})};
  const auto first = match_target(basis[0], basis);
  REQUIRE(first);
  CHECK(*first == std::vector<Rat>{1, 0, 0});

  const auto zero = match_target(TruncSeries(1, 5), basis);
  REQUIRE(zero);
  CHECK(*zero == std::vector<Rat>{0, 0, 0});

  CHECK_FALSE(match_target(S(1, 5, {{4, 1}}), basis));

  // worked instance: h = x^3 + c, f = h^2, d = 2, window y^(2 n_l) = y^12
  for (long c : {1L, -3L, 7L}) {
    const SparsePoly h = P("x^3") + SparsePoly::constant(c);
    const SparsePoly f = mul(h, h);
    const auto pb = puiseux_basis(f, 2, 12);
    REQUIRE(pb.size() == 4);
    const auto gamma = match_target(poly_to_series(tilde_transform(h), 1, 12), pb);
    REQUIRE(gamma);
    CHECK(*gamma == std::vector<Rat>{1, 0, 0, 0});
  }
}
