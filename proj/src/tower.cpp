#include "lacunary/tower.hpp"

#include <algorithm>
#include <limits>

#include <mpfr.h>

namespace lacunary {

struct Tower::Node {
  Kind kind;
  BigInt value;
  std::vector<Tower> kids;
};

Tower::Tower(const BigInt& value)
    : node_(std::make_shared<const Node>(Node{Kind::leaf, value, {}})) {
  if (value < 1) throw DomainError("tower leaves must be >= 1");
}

Tower::Tower(long value) : Tower(BigInt(value)) {}

Tower Tower::sum(std::vector<Tower> terms) {
  if (terms.empty()) throw DomainError("empty tower sum");
  if (terms.size() == 1) return terms.front();
  return Tower(std::make_shared<const Node>(Node{Kind::sum, 0, std::move(terms)}));
}

Tower Tower::product(std::vector<Tower> factors) {
  if (factors.empty()) return Tower(1L);
  if (factors.size() == 1) return factors.front();
  return Tower(std::make_shared<const Node>(Node{Kind::product, 0, std::move(factors)}));
}

Tower Tower::power(Tower base, Tower exponent) {
  return Tower(std::make_shared<const Node>(
      Node{Kind::power, 0, std::vector<Tower>{std::move(base), std::move(exponent)}}));
}

Tower::Kind Tower::kind() const noexcept { return node_->kind; }

const BigInt& Tower::value() const {
  if (node_->kind != Kind::leaf) throw DomainError("value() on a non-leaf tower");
  return node_->value;
}

std::span<const Tower> Tower::children() const noexcept { return node_->kids; }

const Tower& Tower::base() const {
  if (node_->kind != Kind::power) throw DomainError("base() on a non-power tower");
  return node_->kids[0];
}

const Tower& Tower::exponent() const {
  if (node_->kind != Kind::power) throw DomainError("exponent() on a non-power tower");
  return node_->kids[1];
}

std::string Tower::to_string() const {
  switch (node_->kind) {
    case Kind::leaf:
      return node_->value.get_str();
    case Kind::sum: {
      std::string out;
      for (const auto& k : node_->kids) {
        if (!out.empty()) out += "+";
        out += k.to_string();
      }
      return out;
    }
    case Kind::product: {
      std::string out;
      for (const auto& k : node_->kids) {
        if (!out.empty()) out += "*";
        out += k.kind() == Kind::sum ? "(" + k.to_string() + ")" : k.to_string();
      }
      return out;
    }
    case Kind::power: {
      const Tower& b = node_->kids[0];
      const Tower& e = node_->kids[1];
      std::string out = b.kind() == Kind::leaf ? b.to_string() : "(" + b.to_string() + ")";
      out += "^";
      out += e.kind() == Kind::leaf ? e.to_string() : "(" + e.to_string() + ")";
      return out;
    }
  }
  return {};
}

bool identical(const Tower& a, const Tower& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Tower::Kind::leaf) return a.value() == b.value();
  const auto ka = a.children();
  const auto kb = b.children();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (!identical(ka[i], kb[i])) return false;
  }
  return true;
}

Tower operator+(const Tower& a, const Tower& b) { return Tower::sum({a, b}); }
Tower operator*(const Tower& a, const Tower& b) { return Tower::product({a, b}); }
Tower pow(const Tower& base, const Tower& exponent) { return Tower::power(base, exponent); }

// ---------------------------------------------------------------------------
// Exact evaluation

std::optional<std::uint64_t> bit_bound(const Tower& t) {
  switch (t.kind()) {
    case Tower::Kind::leaf:
      return mpz_sizeinbase(t.value().get_mpz_t(), 2);
    case Tower::Kind::sum: {
      std::uint64_t widest = 0;
      for (const auto& k : t.children()) {
        auto b = bit_bound(k);
        if (!b) return std::nullopt;
        widest = std::max(widest, *b);
      }
      std::uint64_t extra = 0;
      while ((std::uint64_t{1} << extra) < t.children().size()) ++extra;
      return widest + extra;
    }
    case Tower::Kind::product: {
      std::uint64_t total = 0;
      for (const auto& k : t.children()) {
        auto b = bit_bound(k);
        if (!b || __builtin_add_overflow(total, *b, &total)) return std::nullopt;
      }
      return total;
    }
    case Tower::Kind::power: {
      auto bb = bit_bound(t.base());
      if (!bb) return std::nullopt;
      if (*bb <= 1) return 1;  // base == 1
      auto e = try_evaluate(t.exponent(), 63);
      if (!e) return std::nullopt;
      std::uint64_t total;
      if (t.base().kind() == Tower::Kind::leaf &&
          mpz_scan1(t.base().value().get_mpz_t(), 0) == *bb - 1) {
        // 2^k leaf: exact length
        if (__builtin_mul_overflow(*bb - 1, e->get_ui(), &total)) return std::nullopt;
        return total + 1;
      }
      if (__builtin_mul_overflow(*bb, e->get_ui(), &total)) return std::nullopt;
      return total;
    }
  }
  return std::nullopt;
}

namespace {

BigInt eval_unchecked(const Tower& t) {
  switch (t.kind()) {
    case Tower::Kind::leaf:
      return t.value();
    case Tower::Kind::sum: {
      BigInt acc = 0;
      for (const auto& k : t.children()) acc += eval_unchecked(k);
      return acc;
    }
    case Tower::Kind::product: {
      BigInt acc = 1;
      for (const auto& k : t.children()) acc *= eval_unchecked(k);
      return acc;
    }
    case Tower::Kind::power: {
      const BigInt b = eval_unchecked(t.base());
      if (b == 1) return b;
      const BigInt e = eval_unchecked(t.exponent());
      BigInt out;
      mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e.get_ui());
      return out;
    }
  }
  return 0;
}

}  // namespace

std::optional<BigInt> try_evaluate(const Tower& t, std::uint64_t max_bits) {
  auto bits = bit_bound(t);
  if (!bits || *bits > max_bits) return std::nullopt;
  return eval_unchecked(t);
}

BigInt evaluate(const Tower& t, std::uint64_t max_bits) {
  auto v = try_evaluate(t, max_bits);
  if (!v) throw DomainError("tower too large to evaluate exactly: " + t.to_string());
  return *v;
}

// ---------------------------------------------------------------------------
// Factored form

namespace {

FactorForm factor_small(BigInt v) {
  FactorForm out;
  if (v <= 1) return out;
  const unsigned long limit = mpz_sizeinbase(v.get_mpz_t(), 2) <= 256 ? 65536UL : 1000UL;
  auto take = [&](unsigned long p) {
    long count = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
      ++count;
    }
    if (count > 0) out.emplace(BigInt(p), Tower(count));
  };
  take(2);
  for (unsigned long p = 3; p <= limit && BigInt(p) * p <= v; p += 2) take(p);
  if (v > 1) {
    auto [it, fresh] = out.emplace(v, Tower(1L));
    if (!fresh) it->second = it->second + Tower(1L);
  }
  return out;
}

}  // namespace

std::optional<FactorForm> factor_form(const Tower& t, std::uint64_t exact_bits) {
  switch (t.kind()) {
    case Tower::Kind::leaf:
      return factor_small(t.value());
    case Tower::Kind::sum: {
      auto v = try_evaluate(t, exact_bits);
      if (!v) return std::nullopt;
      return factor_small(*v);
    }
    case Tower::Kind::product: {
      FactorForm out;
      for (const auto& k : t.children()) {
        auto part = factor_form(k, exact_bits);
        if (!part) return std::nullopt;
        for (auto& [p, e] : *part) {
          auto [it, fresh] = out.emplace(p, e);
          if (!fresh) it->second = it->second + e;
        }
      }
      return out;
    }
    case Tower::Kind::power: {
      auto inner = factor_form(t.base(), exact_bits);
      if (!inner) return std::nullopt;
      for (auto& [p, e] : *inner) e = e * t.exponent();
      return inner;
    }
  }
  return std::nullopt;
}

std::optional<BigInt> log2_exact(const Tower& t) {
  auto ff = factor_form(t);
  if (!ff) return std::nullopt;
  if (ff->empty()) return BigInt(0);
  if (ff->size() != 1 || ff->begin()->first != 2) return std::nullopt;
  return try_evaluate(ff->begin()->second);
}

std::string render_pow2(const BigInt& e) {
  if (e <= 0) return e == 0 ? "2^0" : "-";
  const auto k = mpz_scan1(e.get_mpz_t(), 0);
  BigInt odd = e >> k;
  if (odd == 1) return "2^" + std::to_string(k);
  if (k == 0) return odd.get_str();
  return odd.get_str() + "*2^" + std::to_string(k);
}

// ---------------------------------------------------------------------------
// Interval engine on log2(log2(value))

namespace {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

 private:
  mpfr_t v_;
};

struct Enclosure {
  Real lo;
  Real hi;
};

Real minus_infinity(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_inf(r.get(), -1);
  return r;
}

// log2(sum 2^x_i) with every operation rounded in direction `rnd`.
Real log_sum_exp(const std::vector<Real>& xs, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  const Real* top = &xs.front();
  for (const auto& x : xs) {
    if (mpfr_greater_p(x.get(), top->get())) top = &x;
  }
  Real m = *top;
  if (mpfr_inf_p(m.get())) return m;
  Real acc(prec), t(prec);
  mpfr_set_zero(acc.get(), 1);
  for (const auto& x : xs) {
    mpfr_sub(t.get(), x.get(), m.get(), rnd);
    mpfr_exp2(t.get(), t.get(), rnd);
    mpfr_add(acc.get(), acc.get(), t.get(), rnd);
  }
  mpfr_log2(acc.get(), acc.get(), rnd);
  mpfr_add(acc.get(), acc.get(), m.get(), rnd);
  return acc;
}

Enclosure loglog(const Tower& t, mpfr_prec_t prec) {
  switch (t.kind()) {
    case Tower::Kind::leaf: {
      if (t.value() == 1) return {minus_infinity(prec), minus_infinity(prec)};
      Real lo(prec), hi(prec);
      mpfr_set_z(lo.get(), t.value().get_mpz_t(), MPFR_RNDD);
      mpfr_log2(lo.get(), lo.get(), MPFR_RNDD);
      mpfr_log2(lo.get(), lo.get(), MPFR_RNDD);
      mpfr_set_z(hi.get(), t.value().get_mpz_t(), MPFR_RNDU);
      mpfr_log2(hi.get(), hi.get(), MPFR_RNDU);
      mpfr_log2(hi.get(), hi.get(), MPFR_RNDU);
      return {std::move(lo), std::move(hi)};
    }
    case Tower::Kind::product: {
      std::vector<Real> los, his;
      for (const auto& k : t.children()) {
        auto e = loglog(k, prec);
        los.push_back(std::move(e.lo));
        his.push_back(std::move(e.hi));
      }
      return {log_sum_exp(los, prec, MPFR_RNDD), log_sum_exp(his, prec, MPFR_RNDU)};
    }
    case Tower::Kind::sum: {
      // log2 of each term, then log2 of their log-sum-exp.
      std::vector<Real> los, his;
      for (const auto& k : t.children()) {
        auto e = loglog(k, prec);
        mpfr_exp2(e.lo.get(), e.lo.get(), MPFR_RNDD);
        mpfr_exp2(e.hi.get(), e.hi.get(), MPFR_RNDU);
        los.push_back(std::move(e.lo));
        his.push_back(std::move(e.hi));
      }
      Real lo = log_sum_exp(los, prec, MPFR_RNDD);
      Real hi = log_sum_exp(his, prec, MPFR_RNDU);
      mpfr_log2(lo.get(), lo.get(), MPFR_RNDD);
      mpfr_log2(hi.get(), hi.get(), MPFR_RNDU);
      return {std::move(lo), std::move(hi)};
    }
    case Tower::Kind::power: {
      // log2 log2 (b^e) = log2 e + log2 log2 b = 2^(loglog e) + loglog b
      Enclosure b = loglog(t.base(), prec);
      if (mpfr_inf_p(b.hi.get()) && mpfr_sgn(b.hi.get()) < 0) return b;
      Enclosure e = loglog(t.exponent(), prec);
      mpfr_exp2(e.lo.get(), e.lo.get(), MPFR_RNDD);
      mpfr_exp2(e.hi.get(), e.hi.get(), MPFR_RNDU);
      mpfr_add(e.lo.get(), e.lo.get(), b.lo.get(), MPFR_RNDD);
      mpfr_add(e.hi.get(), e.hi.get(), b.hi.get(), MPFR_RNDU);
      return e;
    }
  }
  return {minus_infinity(prec), minus_infinity(prec)};
}

void widen_exponent_range() {
  mpfr_set_emax(mpfr_get_emax_max());
  mpfr_set_emin(mpfr_get_emin_min());
}

std::optional<std::strong_ordering> interval_verdict(const Tower& a, const Tower& b, mpfr_prec_t prec) {
  widen_exponent_range();
  const Enclosure ea = loglog(a, prec);
  const Enclosure eb = loglog(b, prec);
  for (const Real* r : {&ea.lo, &ea.hi, &eb.lo, &eb.hi}) {
    if (mpfr_nan_p(r->get())) return std::nullopt;
  }
  if (mpfr_less_p(ea.hi.get(), eb.lo.get())) return std::strong_ordering::less;
  if (mpfr_greater_p(ea.lo.get(), eb.hi.get())) return std::strong_ordering::greater;
  return std::nullopt;
}

std::optional<CmpOutcome> try_intervals(const Tower& a, const Tower& b, const CmpOptions& opts,
                                        unsigned max_precision) {
  for (unsigned prec = opts.start_precision; prec <= max_precision; prec *= 2) {
    if (auto v = interval_verdict(a, b, prec)) return CmpOutcome{*v, CmpMethod::interval};
  }
  return std::nullopt;
}

std::optional<CmpOutcome> try_exact(const Tower& a, const Tower& b, const CmpOptions& opts) {
  auto ba = bit_bound(a);
  auto bb = bit_bound(b);
  if (!ba || !bb || *ba > opts.exact_bits || *bb > opts.exact_bits) return std::nullopt;
  const BigInt va = eval_unchecked(a);
  const BigInt vb = eval_unchecked(b);
  return CmpOutcome{cmp(va, vb) <=> 0, CmpMethod::exact};
}

std::optional<std::strong_ordering> quiet_compare(const Tower& a, const Tower& b, const CmpOptions& opts);

std::optional<CmpOutcome> try_factored(const Tower& a, const Tower& b, const CmpOptions& opts) {
  auto fa = factor_form(a, opts.exact_bits);
  auto fb = factor_form(b, opts.exact_bits);
  if (!fa || !fb) return std::nullopt;
  // A single shared base: compare exponents one log level down.
  if (fa->size() == 1 && fb->size() == 1 && fa->begin()->first == fb->begin()->first) {
    if (auto v = quiet_compare(fa->begin()->second, fb->begin()->second, opts)) {
      return CmpOutcome{*v, CmpMethod::factored};
    }
    return std::nullopt;
  }
  // Base-wise dominance; a missing base has exponent 0, below any tower.
  bool all_le = true;
  bool all_ge = true;
  bool any_diff = false;
  auto ia = fa->begin();
  auto ib = fb->begin();
  while (ia != fa->end() || ib != fb->end()) {
    std::strong_ordering here = std::strong_ordering::equal;
    if (ib == fb->end() || (ia != fa->end() && ia->first < ib->first)) {
      here = std::strong_ordering::greater;
      ++ia;
    } else if (ia == fa->end() || ib->first < ia->first) {
      here = std::strong_ordering::less;
      ++ib;
    } else {
      auto v = quiet_compare(ia->second, ib->second, opts);
      if (!v) return std::nullopt;
      here = *v;
      ++ia;
      ++ib;
    }
    if (here == std::strong_ordering::less) all_ge = false;
    if (here == std::strong_ordering::greater) all_le = false;
    if (here != std::strong_ordering::equal) any_diff = true;
  }
  if (!any_diff) return CmpOutcome{std::strong_ordering::equal, CmpMethod::factored};
  if (all_le) return CmpOutcome{std::strong_ordering::less, CmpMethod::factored};
  if (all_ge) return CmpOutcome{std::strong_ordering::greater, CmpMethod::factored};
  return std::nullopt;
}

std::optional<CmpOutcome> compare_impl(const Tower& a, const Tower& b, const CmpOptions& opts) {
  if (identical(a, b)) return CmpOutcome{std::strong_ordering::equal, CmpMethod::structural};
  if (opts.interval_first) {
    if (auto v = try_intervals(a, b, opts, std::min(opts.max_precision, 1024U))) return v;
  }
  if (auto v = try_exact(a, b, opts)) return v;
  if (auto v = try_factored(a, b, opts)) return v;
  return try_intervals(a, b, opts, opts.max_precision);
}

std::optional<std::strong_ordering> quiet_compare(const Tower& a, const Tower& b, const CmpOptions& opts) {
  CmpOptions inner = opts;
  inner.interval_first = false;
  auto v = compare_impl(a, b, inner);
  if (!v) return std::nullopt;
  return v->order;
}

}  // namespace

std::string to_string(CmpMethod method) {
  switch (method) {
    case CmpMethod::structural:
      return "structural";
    case CmpMethod::exact:
      return "exact";
    case CmpMethod::factored:
      return "factored";
    case CmpMethod::interval:
      return "interval";
  }
  return "?";
}

CmpOutcome compare(const Tower& a, const Tower& b, const CmpOptions& opts) {
  if (auto v = compare_impl(a, b, opts)) return *v;
  throw InconclusiveError("inconclusive tower comparison: " + a.to_string() + " vs " + b.to_string());
}

std::strong_ordering tower_cmp(const Tower& a, const Tower& b) { return compare(a, b).order; }

LogLogBounds loglog2_bounds(const Tower& t, unsigned precision) {
  widen_exponent_range();
  const Enclosure e = loglog(t, precision);
  return {mpfr_get_d(e.lo.get(), MPFR_RNDD), mpfr_get_d(e.hi.get(), MPFR_RNDU)};
}

BigInt digit_count(const Tower& t) {
  if (auto v = try_evaluate(t, std::uint64_t{1} << 22)) {
    if (*v < 1) return 1;
    auto n = mpz_sizeinbase(v->get_mpz_t(), 10);
    BigInt floor_pow;
    mpz_ui_pow_ui(floor_pow.get_mpz_t(), 10, n - 1);
    if (*v < floor_pow) --n;
    return BigInt(static_cast<unsigned long>(n));
  }
  if (t.kind() != Tower::Kind::power) throw DomainError("digit_count: unsupported tower form");
  auto base = try_evaluate(t.base());
  auto exp = try_evaluate(t.exponent());
  if (!base || !exp) throw DomainError("digit_count: base or exponent not evaluable");

  BigInt rest = *base;
  unsigned long tens = 0;
  while (rest > 1 && mpz_divisible_ui_p(rest.get_mpz_t(), 10) != 0) {
    rest /= 10;
    ++tens;
  }
  if (rest == 1) return *exp * tens + 1;

  widen_exponent_range();
  const auto exp_bits = static_cast<unsigned>(mpz_sizeinbase(exp->get_mpz_t(), 2));
  for (unsigned prec = exp_bits + 64; prec <= exp_bits + (1U << 16); prec *= 2) {
    Real lo(prec), hi(prec);
    mpfr_set_z(lo.get(), base->get_mpz_t(), MPFR_RNDD);
    mpfr_log10(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_mul_z(lo.get(), lo.get(), exp->get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi.get(), base->get_mpz_t(), MPFR_RNDU);
    mpfr_log10(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_mul_z(hi.get(), hi.get(), exp->get_mpz_t(), MPFR_RNDU);
    BigInt flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
    if (flo == fhi) return flo + 1;
  }
  throw InconclusiveError("digit_count: refinement cap reached");
}

}  // namespace lacunary
