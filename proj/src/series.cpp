#include "lacunary/series.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "lacunary/linalg.hpp"

namespace lacunary {

TruncSeries::TruncSeries(std::int64_t ram, std::int64_t trunc_num, CoeffMap coeffs)
    : ram_(ram), trunc_num_(trunc_num), coeffs_(std::move(coeffs)) {
  if (ram_ < 1) throw DomainError("ramification must be positive");
  if (trunc_num_ < 0) throw DomainError("truncation must be non-negative");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->first < 0) throw DomainError("negative series exponent");
    if (it->first >= trunc_num_ || it->second == 0) {
      it = coeffs_.erase(it);
    } else {
      it->second.canonicalize();
      ++it;
    }
  }
}

Rat TruncSeries::coeff(std::int64_t key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

TruncSeries TruncSeries::rescaled(std::int64_t new_ram) const {
  if (new_ram % ram_ != 0) throw DomainError("rescale target is not a multiple of the ramification");
  const std::int64_t factor = new_ram / ram_;
  CoeffMap out;
  for (const auto& [k, c] : coeffs_) out.emplace(checked_mul(k, factor), c);
  return TruncSeries(new_ram, checked_mul(trunc_num_, factor), std::move(out));
}

TruncSeries TruncSeries::truncated(std::int64_t trunc_num) const {
  return TruncSeries(ram_, std::min(trunc_num, trunc_num_), coeffs_);
}

std::string TruncSeries::to_string() const {
  std::ostringstream out;
  if (coeffs_.empty()) {
    out << "0";
  } else {
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
      const bool negative = sgn(c) < 0;
      if (first) {
        if (negative) out << '-';
      } else {
        out << (negative ? " - " : " + ");
      }
      first = false;
      const Rat mag = abs(c);
      if (k == 0) {
        out << mag.get_str();
        continue;
      }
      if (mag != 1) out << mag.get_str() << '*';
      const std::int64_t g = std::gcd(k, ram_);
      if (ram_ / g == 1) {
        out << "y";
        if (k / g != 1) out << '^' << k / g;
      } else {
        out << "y^(" << k / g << '/' << ram_ / g << ')';
      }
    }
  }
  const std::int64_t g = std::gcd(trunc_num_, ram_);
  out << " + O(y^";
  if (ram_ / g == 1) {
    out << trunc_num_ / g << ')';
  } else {
    out << '(' << trunc_num_ / g << '/' << ram_ / g << "))";
  }
  return out.str();
}

namespace {

std::pair<TruncSeries, TruncSeries> common(const TruncSeries& a, const TruncSeries& b) {
  const std::int64_t ram = std::lcm(a.ram(), b.ram());
  TruncSeries ra = a.rescaled(ram);
  TruncSeries rb = b.rescaled(ram);
  const std::int64_t trunc = std::min(ra.trunc_num(), rb.trunc_num());
  return {ra.truncated(trunc), rb.truncated(trunc)};
}

}  // namespace

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  auto [ra, rb] = common(a, b);
  TruncSeries::CoeffMap out = ra.coeffs();
  for (const auto& [k, c] : rb.coeffs()) out[k] += c;
  return TruncSeries(ra.ram(), ra.trunc_num(), std::move(out));
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + Rat(-1) * b; }

TruncSeries operator*(const Rat& c, const TruncSeries& a) {
  TruncSeries::CoeffMap out = a.coeffs();
  for (auto& [k, v] : out) v *= c;
  return TruncSeries(a.ram(), a.trunc_num(), std::move(out));
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  auto [ra, rb] = common(a, b);
  const std::int64_t trunc = ra.trunc_num();
  TruncSeries::CoeffMap out;
  for (const auto& [ka, ca] : ra.coeffs()) {
    for (const auto& [kb, cb] : rb.coeffs()) {
      if (ka + kb >= trunc) break;
      out[ka + kb] += ca * cb;
    }
  }
  return TruncSeries(ra.ram(), trunc, std::move(out));
}

TruncSeries shift(const TruncSeries& a, std::int64_t k_num) {
  if (k_num < 0) throw DomainError("negative shift");
  TruncSeries::CoeffMap out;
  for (const auto& [k, c] : a.coeffs()) {
    const std::int64_t key = checked_add(k, k_num);
    if (key >= a.trunc_num()) break;
    out.emplace(key, c);
  }
  return TruncSeries(a.ram(), a.trunc_num(), std::move(out));
}

TruncSeries poly_to_series(const SparsePoly& p, std::int64_t ram, std::int64_t trunc_num) {
  TruncSeries::CoeffMap out;
  for (const auto& [e, c] : p.terms()) {
    if (e >= (trunc_num + ram - 1) / ram) break;
    out.emplace(checked_mul(e, ram), c);
  }
  return TruncSeries(ram, trunc_num, std::move(out));
}

TruncSeries pow_frac(const SparsePoly& delta, std::int64_t s, std::int64_t d,
                     std::int64_t trunc_num, std::int64_t ram) {
  if (d < 1) throw DomainError("pow_frac: d must be positive");
  if (ram < 1) throw DomainError("pow_frac: ramification must be positive");
  if (delta.coeff(0) != 1) throw DomainError("pow_frac: delta(0) must be 1");
  // Integral exponents n with n*ram < trunc_num.
  const std::int64_t len = trunc_num <= 0 ? 0 : (trunc_num + ram - 1) / ram;
  Rat alpha(s, d);
  alpha.canonicalize();
  std::vector<Rat> u(static_cast<std::size_t>(len), Rat(0));
  if (len > 0) u[0] = 1;
  // k u_k = sum_{j=1}^{k} (alpha j - (k - j)) a_j u_{k-j}
  for (std::int64_t k = 1; k < len; ++k) {
    Rat acc = 0;
    for (const auto& [j, a] : delta.terms()) {
      if (j == 0) continue;
      if (j > k) break;
      const Rat& prev = u[static_cast<std::size_t>(k - j)];
      if (prev == 0) continue;
      acc += (alpha * j - (k - j)) * a * prev;
    }
    if (acc != 0) u[static_cast<std::size_t>(k)] = acc / k;
  }
  TruncSeries::CoeffMap out;
  for (std::int64_t n = 0; n < len; ++n) {
    if (u[static_cast<std::size_t>(n)] != 0) out.emplace(n * ram, std::move(u[static_cast<std::size_t>(n)]));
  }
  return TruncSeries(ram, trunc_num, std::move(out));
}

namespace {

void validate_n(std::size_t l, std::size_t p, std::int64_t d, std::span<const std::int64_t> n) {
  if (l == 0 || n.size() != l) throw DomainError("term shapes need n = (n_1, ..., n_l) with l >= 1");
  if (p >= l) throw DomainError("term shapes need 0 <= p <= l-1");
  if (d < 1) throw DomainError("term shapes need d >= 1");
  for (std::size_t i = 0; i < l; ++i) {
    if (n[i] <= 0 || (i > 0 && n[i] <= n[i - 1])) {
      throw DomainError("n must be strictly increasing positive integers");
    }
  }
  if (n[l - 1] % d != 0) throw DomainError("d must divide n_l");
}

}  // namespace

std::vector<TermShape> enumerate_term_shapes(std::size_t l, std::size_t p, std::int64_t d,
                                             std::span<const std::int64_t> n, CapMode cap) {
  validate_n(l, p, d, n);
  const std::int64_t m = n[l - 1];
  const std::int64_t cap_num = checked_mul(checked_mul(2, m), d);
  const std::size_t width = l - p;
  std::vector<std::int64_t> weights(width);
  for (std::size_t j = 0; j < width; ++j) weights[j] = checked_mul(n[p + j], d);
  auto fits = [&](std::int64_t ypow) { return cap == CapMode::strict ? ypow < cap_num : ypow <= cap_num; };

  std::vector<TermShape> out;
  std::vector<std::int64_t> h(width, 0);
  for (std::int64_t s = 1 - 2 * d; s <= 1; ++s) {
    const std::int64_t base = checked_mul(1 - s, m);
    if (!fits(base)) continue;
    // Depth-first over h in lexicographic order.
    auto recurse = [&](auto&& self, std::size_t j, std::int64_t ypow, std::int64_t k) -> void {
      if (j == width) {
        out.push_back(TermShape{p, s, h, k, std::nullopt, ypow});
        return;
      }
      for (std::int64_t hj = 0;; ++hj) {
        const std::int64_t next = checked_add(ypow, checked_mul(hj, weights[j]));
        if (!fits(next)) break;
        h[j] = hj;
        self(self, j + 1, next, k + hj);
      }
      h[j] = 0;
    };
    recurse(recurse, 0, base, 0);
  }
  return out;
}

Rat shape_count_bound(std::size_t l, std::size_t p, std::int64_t d, std::span<const std::int64_t> n) {
  validate_n(l, p, d, n);
  Rat ratio(n[l - 1], n[p]);
  ratio.canonicalize();
  const Rat per_index = 2 * ratio + 1;
  Rat bound = 2 * d + 1;
  for (std::size_t i = 0; i < l; ++i) bound *= per_index;
  return bound;
}

TruncSeries term_value(const TermShape& shape, const SparsePoly& delta_p, std::int64_t m,
                       std::int64_t d, std::int64_t trunc_num) {
  if (shape.ypow_num < checked_mul(1 - shape.s, m)) {
    throw DomainError("term shape exponent is inconsistent with (s, m)");
  }
  if (shape.ypow_num >= trunc_num) return TruncSeries(d, trunc_num);
  const std::int64_t exponent = shape.s - checked_mul(shape.k, d);
  TruncSeries value = shift(pow_frac(delta_p, exponent, d, trunc_num, d), shape.ypow_num);
  if (shape.c) value = *shape.c * value;
  return value;
}

std::vector<TruncSeries> puiseux_basis(const SparsePoly& f, std::int64_t d, std::int64_t trunc) {
  if (d < 1) throw DomainError("puiseux_basis: d must be positive");
  const Normalization norm = normalize_f(f);
  if (norm.m % d != 0) throw DomainError("puiseux_basis: d must divide deg f");
  const SparsePoly f_tilde = delta_p(norm, norm.l());
  const std::int64_t step = norm.m / d;
  std::vector<TruncSeries> basis;
  for (std::int64_t j = -1;; ++j) {
    const std::int64_t lead = checked_mul(j + 1, step);
    if (lead >= trunc) break;
    basis.push_back(shift(pow_frac(f_tilde, -j, d, trunc), lead));
  }
  return basis;
}

namespace {

struct Aligned {
  std::vector<TruncSeries> series;
  std::vector<std::int64_t> keys;  // union of keys below the common window
};

Aligned align(std::span<const TruncSeries> series) {
  std::int64_t ram = 1;
  for (const auto& s : series) ram = std::lcm(ram, s.ram());
  Aligned out;
  std::int64_t trunc = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : series) {
    out.series.push_back(s.rescaled(ram));
    trunc = std::min(trunc, out.series.back().trunc_num());
  }
  std::set<std::int64_t> keys;
  for (auto& s : out.series) {
    s = s.truncated(trunc);
    for (const auto& [k, c] : s.coeffs()) keys.insert(k);
  }
  out.keys.assign(keys.begin(), keys.end());
  return out;
}

linalg::Matrix column_matrix(const Aligned& aligned, std::size_t cols) {
  linalg::Matrix a(aligned.keys.size(), std::vector<Rat>(cols, Rat(0)));
  for (std::size_t r = 0; r < aligned.keys.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = aligned.series[c].coeff(aligned.keys[r]);
  }
  return a;
}

}  // namespace

std::optional<std::vector<Rat>> linear_dependence(std::span<const TruncSeries> series) {
  if (series.empty()) throw DomainError("linear_dependence needs at least one series");
  const Aligned aligned = align(series);
  return linalg::kernel_vector(column_matrix(aligned, series.size()), series.size());
}

std::optional<std::vector<Rat>> match_target(const TruncSeries& target,
                                             std::span<const TruncSeries> basis) {
  std::vector<TruncSeries> all(basis.begin(), basis.end());
  all.push_back(target);
  const Aligned aligned = align(all);
  const std::size_t cols = basis.size();
  linalg::Matrix a = column_matrix(aligned, cols);
  std::vector<Rat> rhs;
  rhs.reserve(aligned.keys.size());
  for (std::int64_t key : aligned.keys) rhs.push_back(aligned.series.back().coeff(key));
  return linalg::solve(std::move(a), cols, rhs);
}

}  // namespace lacunary
