#include "lacunary/sparse_poly.hpp"

#include <limits>
#include <sstream>

namespace lacunary {

Exponent checked_add(Exponent a, Exponent b) {
  Exponent out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("exponent overflow");
  return out;
}

Exponent checked_mul(Exponent a, Exponent b) {
  Exponent out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("exponent overflow");
  return out;
}

SparsePoly::SparsePoly(TermMap terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first < 0) throw DomainError("negative exponent");
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      it->second.canonicalize();
      ++it;
    }
  }
}

SparsePoly::SparsePoly(std::initializer_list<std::pair<const Exponent, Rat>> terms)
    : SparsePoly(TermMap(terms)) {}

SparsePoly SparsePoly::constant(const Rat& c) { return SparsePoly(TermMap{{0, c}}); }

SparsePoly SparsePoly::monomial(const Rat& c, Exponent e) { return SparsePoly(TermMap{{e, c}}); }

bool SparsePoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Exponent SparsePoly::degree() const {
  if (terms_.empty()) throw DomainError("degree of the zero polynomial");
  return terms_.rbegin()->first;
}

Exponent SparsePoly::low_degree() const {
  if (terms_.empty()) throw DomainError("low degree of the zero polynomial");
  return terms_.begin()->first;
}

const Rat& SparsePoly::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("leading coefficient of the zero polynomial");
  return terms_.rbegin()->second;
}

Rat SparsePoly::coeff(Exponent e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

std::string SparsePoly::to_string(char var) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    Rat mag = abs(c);
    if (e == 0) {
      out << mag.get_str();
      continue;
    }
    if (mag != 1) out << mag.get_str() << '*';
    out << var;
    if (e != 1) out << '^' << e;
  }
  return out.str();
}

SparsePoly operator+(const SparsePoly& p, const SparsePoly& q) {
  SparsePoly::TermMap out = p.terms();
  for (const auto& [e, c] : q.terms()) out[e] += c;
  return SparsePoly(std::move(out));
}

SparsePoly operator-(const SparsePoly& p) {
  SparsePoly::TermMap out = p.terms();
  for (auto& [e, c] : out) c = -c;
  return SparsePoly(std::move(out));
}

SparsePoly operator-(const SparsePoly& p, const SparsePoly& q) {
  SparsePoly::TermMap out = p.terms();
  for (const auto& [e, c] : q.terms()) out[e] -= c;
  return SparsePoly(std::move(out));
}

SparsePoly operator*(const Rat& c, const SparsePoly& p) {
  if (c == 0) return {};
  SparsePoly::TermMap out = p.terms();
  for (auto& [e, v] : out) v *= c;
  return SparsePoly(std::move(out));
}

namespace {

SparsePoly product(const SparsePoly& p, const SparsePoly& q, std::optional<Exponent> bound) {
  SparsePoly::TermMap out;
  for (const auto& [ep, cp] : p.terms()) {
    if (bound && ep >= *bound) break;
    for (const auto& [eq, cq] : q.terms()) {
      const Exponent e = checked_add(ep, eq);
      if (bound && e >= *bound) break;
      out[e] += cp * cq;
    }
  }
  return SparsePoly(std::move(out));
}

}  // namespace

SparsePoly mul_truncated(const SparsePoly& p, const SparsePoly& q, Exponent bound) {
  return product(p, q, bound);
}

SparsePoly mul(const SparsePoly& p, const SparsePoly& q) { return product(p, q, std::nullopt); }

SparsePoly operator*(const SparsePoly& p, const SparsePoly& q) { return mul(p, q); }

SparsePoly pow(const SparsePoly& p, std::uint64_t k) {
  if (!p.is_zero() && k > 0 &&
      p.degree() > 0 &&
      k > static_cast<std::uint64_t>(std::numeric_limits<Exponent>::max() / p.degree())) {
    throw OverflowError("exponent overflow");
  }
  SparsePoly result = SparsePoly::constant(1);
  SparsePoly base = p;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

SparsePoly compose(const SparsePoly& g, const SparsePoly& h) {
  if (g.is_zero()) return {};
  const auto& terms = g.terms();
  auto it = terms.rbegin();
  SparsePoly result = SparsePoly::constant(it->second);
  Exponent prev = it->first;
  for (++it; it != terms.rend(); ++it) {
    result = result * pow(h, static_cast<std::uint64_t>(prev - it->first)) +
             SparsePoly::constant(it->second);
    prev = it->first;
  }
  return result * pow(h, static_cast<std::uint64_t>(prev));
}

SparsePoly truncate(const SparsePoly& p, Exponent bound) {
  SparsePoly::TermMap out;
  for (const auto& [e, c] : p.terms()) {
    if (e >= bound) break;
    out.emplace(e, c);
  }
  return SparsePoly(std::move(out));
}

SparsePoly shift(const SparsePoly& p, Exponent k) {
  SparsePoly::TermMap out;
  for (const auto& [e, c] : p.terms()) out.emplace(checked_add(e, k), c);
  return SparsePoly(std::move(out));
}

Rat evaluate(const SparsePoly& p, const Rat& at) {
  Rat acc = 0;
  for (const auto& [e, c] : p.terms()) {
    Rat power;
    mpz_pow_ui(power.get_num_mpz_t(), at.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(power.get_den_mpz_t(), at.get_den_mpz_t(), static_cast<unsigned long>(e));
    acc += c * power;
  }
  return acc;
}

std::pair<SparsePoly, SparsePoly> divmod(const SparsePoly& p, const SparsePoly& divisor) {
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  const Exponent dd = divisor.degree();
  const Rat& lead = divisor.leading_coefficient();
  SparsePoly::TermMap quot;
  SparsePoly rem = p;
  while (!rem.is_zero() && rem.degree() >= dd) {
    const Exponent shift_by = rem.degree() - dd;
    const Rat factor = rem.leading_coefficient() / lead;
    quot[shift_by] = factor;
    rem = rem - factor * shift(divisor, shift_by);
  }
  return {SparsePoly(std::move(quot)), rem};
}

std::size_t nonconstant_terms(const SparsePoly& f) {
  std::size_t count = f.term_count();
  if (count > 0 && f.terms().begin()->first == 0) --count;
  return count;
}

Normalization normalize_f(const SparsePoly& f) {
  if (f.is_constant()) throw DomainError("normalize_f needs a non-constant polynomial");
  Normalization norm;
  norm.a = f.leading_coefficient();
  norm.m = f.degree();
  const auto& terms = f.terms();
  for (auto it = std::next(terms.rbegin()); it != terms.rend(); ++it) {
    norm.n.push_back(norm.m - it->first);
    norm.b.push_back(it->second / norm.a);
  }
  return norm;
}

SparsePoly reconstruct(const Normalization& norm) {
  SparsePoly::TermMap out{{norm.m, norm.a}};
  for (std::size_t i = 0; i < norm.n.size(); ++i) {
    out[norm.m - norm.n[i]] += norm.a * norm.b[i];
  }
  return SparsePoly(std::move(out));
}

SparsePoly delta_p(const Normalization& norm, std::size_t p) {
  if (p > norm.l()) throw DomainError("delta_p: p exceeds l");
  SparsePoly::TermMap out{{0, Rat(1)}};
  for (std::size_t i = 0; i < p; ++i) out[norm.n[i]] += norm.b[i];
  return SparsePoly(std::move(out));
}

SparsePoly tilde_transform(const SparsePoly& h) {
  if (h.is_zero()) throw DomainError("tilde transform of the zero polynomial");
  const Exponent deg = h.degree();
  SparsePoly::TermMap out;
  for (const auto& [e, c] : h.terms()) out.emplace(deg - e, c);
  return SparsePoly(std::move(out));
}

Instance make_instance(SparsePoly g, SparsePoly h) {
  Instance inst;
  inst.f = compose(g, h);
  inst.g = std::move(g);
  inst.h = std::move(h);
  inst.l = nonconstant_terms(inst.f);
  inst.d = inst.g.is_zero() ? 0 : inst.g.degree();
  if (!inst.f.is_constant()) {
    inst.m = inst.f.degree();
    inst.norm = normalize_f(inst.f);
  }
  return inst;
}

}  // namespace lacunary
