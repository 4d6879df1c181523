#include "lacunary/harness.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <condition_variable>
#include <mutex>
#include <random>
#include <thread>

#include "lacunary/bounds.hpp"
#include "lacunary/decompose.hpp"
#include "lacunary/series.hpp"
#include "lacunary/tower.hpp"

namespace lacunary {

namespace {

// Portable bounded draw; std::uniform_int_distribution differs between
// standard libraries and would break the pinned regression file.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

Rat draw_rat(std::mt19937_64& rng, std::int64_t bound) {
  std::int64_t num = draw(rng, -bound, bound - 1);
  if (num >= 0) ++num;  // skip zero
  const std::int64_t den = draw(rng, 1, bound);
  Rat r(static_cast<long>(num), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

}  // namespace

void TrialConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (max_deg_g < 1 || max_deg_h < 1 || max_terms_h < 1 || coeff_bound < 1) {
    throw DomainError("caps must be >= 1");
  }
  if (max_deg_g > 64 || max_deg_h > 64) throw DomainError("degree caps above 64 are not supported");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index) {
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Instance gen_instance(std::uint64_t seed, const TrialConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  const std::int64_t C = cfg.coeff_bound;

  const std::int64_t deg_h = draw(rng, 2, std::max<std::int64_t>(2, cfg.max_deg_h));
  const std::int64_t support = draw(rng, 1, std::min(cfg.max_terms_h, deg_h));
  SparsePoly::TermMap h_terms{{deg_h, Rat(1)}};
  std::vector<Exponent> lower;
  for (Exponent e = 1; e < deg_h; ++e) lower.push_back(e);
  for (std::int64_t i = 1; i < support; ++i) {
    const auto pick = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(lower.size()) - 1));
    h_terms.emplace(lower[pick], draw_rat(rng, C));
    lower.erase(lower.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  const std::int64_t deg_g = draw(rng, 2, std::max<std::int64_t>(2, cfg.max_deg_g));
  SparsePoly::TermMap g_terms{{deg_g, draw_rat(rng, C)}, {0, draw_rat(rng, C)}};
  for (Exponent e = 1; e < deg_g; ++e) {
    if (draw(rng, 0, 1) == 1) g_terms.emplace(e, draw_rat(rng, C));
  }
  return make_instance(SparsePoly(std::move(g_terms)), SparsePoly(std::move(h_terms)));
}

bool deg_bound_applicable(const SparsePoly& h) { return nonconstant_terms(h) != 1; }

bool structural_match(const SparsePoly& f_in, std::int64_t d, const SparsePoly& h) {
  const SparsePoly f = f_in.coeff(0) == 0 ? f_in + SparsePoly::constant(1) : f_in;
  const Normalization norm = normalize_f(f);
  const std::size_t l = norm.l();
  if (l == 0 || norm.m % d != 0) return false;
  const std::int64_t trunc = checked_mul(checked_mul(2, norm.n.back()), d);
  const TruncSeries target = poly_to_series(tilde_transform(h), d, trunc);

  const std::size_t p = l - 1;
  const SparsePoly delta = delta_p(norm, p);
  std::vector<TruncSeries> basis;
  for (const auto& shape : enumerate_term_shapes(l, p, d, norm.n, CapMode::strict)) {
    basis.push_back(term_value(shape, delta, norm.m, d, trunc));
  }
  return match_target(target, basis).has_value();
}

TrialRecord run_trial(std::size_t trial_index, const TrialConfig& cfg) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.seed = trial_seed(cfg.master_seed, trial_index);
  try {
    const Instance inst = gen_instance(rec.seed, cfg);
    rec.g = inst.g.to_string();
    rec.h = inst.h.to_string();
    rec.f = inst.f.to_string();
    rec.l = inst.l;
    rec.d = inst.d;
    rec.deg_bound_applicable = deg_bound_applicable(inst.h);
    const auto l = static_cast<std::int64_t>(inst.l);
    rec.deg_bound_ok = inst.d <= 2 * l * (l - 1);

    const auto found = decompose_at_degree(inst.f, inst.d);
    rec.decomposition_recovered = found && *found == normalize_pair(inst.g, inst.h);

    rec.structural_match = structural_match(inst.f, inst.d, inst.h);

    rec.terms_h = inst.h.term_count();
    // h/1: numerator terms_h, denominator 1
    const Tower bound = B1(std::max<std::int64_t>(l, 1));
    rec.b1_satisfied = tower_cmp(Tower(BigInt(static_cast<unsigned long>(rec.terms_h))), bound) <= 0 &&
                       tower_cmp(Tower(1L), bound) <= 0;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

void run_trials(const TrialConfig& cfg, const std::function<void(const TrialRecord&)>& sink) {
  cfg.validate();
  if (cfg.threads == 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) sink(run_trial(i, cfg));
    return;
  }
  std::vector<std::optional<TrialRecord>> slots(cfg.trials);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) {
      TrialRecord rec = run_trial(i, cfg);
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(rec);
      }
      ready.notify_one();
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = std::min<std::size_t>(cfg.threads, cfg.trials);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    TrialRecord rec;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      rec = std::move(*slots[i]);
      slots[i].reset();
    }
    sink(rec);
  }
  for (auto& t : pool) t.join();
}

std::vector<TrialRecord> run_trials(const TrialConfig& cfg) {
  std::vector<TrialRecord> out;
  run_trials(cfg, [&](const TrialRecord& r) { out.push_back(r); });
  return out;
}

nlohmann::ordered_json to_json(const TrialRecord& rec) {
  nlohmann::ordered_json j;
  j["trial_index"] = rec.trial_index;
  j["seed"] = rec.seed;
  j["g"] = rec.g;
  j["h"] = rec.h;
  j["f"] = rec.f;
  j["l"] = rec.l;
  j["d"] = rec.d;
  j["deg_bound_applicable"] = rec.deg_bound_applicable;
  j["deg_bound_ok"] = rec.deg_bound_ok;
  j["decomposition_recovered"] = rec.decomposition_recovered;
  j["structural_match"] = rec.structural_match;
  j["terms_h"] = rec.terms_h;
  j["b1_satisfied"] = rec.b1_satisfied;
  if (rec.error) j["error"] = *rec.error;
  return j;
}

std::string to_jsonl(const TrialRecord& rec) { return to_json(rec).dump() + "\n"; }

bool VerifySummary::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

namespace {

CheckResult from_chain(const ChainReport& r, std::string name) {
  CheckResult c{std::move(name), r.ok(), {}};
  for (const ChainStep* s : r.failures()) {
    if (!c.detail.empty()) c.detail += "; ";
    c.detail += s->label + " [" + s->detail + "]";
  }
  return c;
}

template <typename F>
CheckResult guarded(std::string name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return CheckResult{std::move(name), false, e.what()};
  }
}

}  // namespace

VerifySummary verify_all(std::int64_t l_max) {
  if (l_max < 2) throw DomainError("verify_all: l_max must be >= 2");
  VerifySummary out;
  auto add = [&](CheckResult c) { out.checks.push_back(std::move(c)); };

  for (std::int64_t l = 2; l <= l_max; ++l) {
    const std::string tag = " l=" + std::to_string(l);
    add(guarded("lemma1" + tag, [&] {
      CheckResult c{"lemma1" + tag, true, {}};
      for (std::int64_t d = 1; d <= 2 * l * (l - 1); ++d) {
        for (std::int64_t r = 1; r <= l - 1; ++r) {
          const auto rep = lemma1_check(l, d, r);
          if (!rep.ok()) {
            c.ok = false;
            c.detail += "d=" + std::to_string(d) + " r=" + std::to_string(r) + ": " +
                        from_chain(rep, "").detail + "; ";
          }
        }
      }
      return c;
    }));
    add(guarded("case1" + tag, [&] { return from_chain(case1_check(l), "case1" + tag); }));
    add(guarded("exponent_chain" + tag, [&] { return from_chain(exponent_chain_check(l), "exponent_chain" + tag); }));
    add(guarded("twoL_chain" + tag, [&] { return from_chain(twoL_chain_check(l), "twoL_chain" + tag); }));
    add(guarded("final_chain" + tag, [&] { return from_chain(final_chain_check(l), "final_chain" + tag); }));
  }

  add(guarded("l2_pipeline", [] {
    const L2Report r = l2_pipeline();
    CheckResult c{"l2_pipeline", r.ok(), {}};
    for (const auto& f : r.failures) c.detail += f + "; ";
    if (c.ok) c.detail = "final bound " + r.final_bound.get_str();
    return c;
  }));
  add(guarded("B1(1) = 4^512", [] {
    const bool ok = tower_cmp(B1(1), pow(Tower(4L), Tower(512L))) == 0;
    return CheckResult{"B1(1) = 4^512", ok, B1(1).to_string()};
  }));
  add(guarded("B1(2) = 2^(3*2^432)", [] {
    const auto e = log2_exact(B1(2));
    BigInt want;
    mpz_ui_pow_ui(want.get_mpz_t(), 2, 432);
    want *= 3;
    const bool ok = e && *e == want;
    return CheckResult{"B1(2) = 2^(3*2^432)", ok, e ? "log2 = " + render_pow2(*e) : "not a power of 2"};
  }));
  add(guarded("2^(3*2^432) > 10^(2^431)", [] {
    const Tower a = pow(Tower(2L), Tower(3L) * pow(Tower(2L), Tower(432L)));
    const Tower b = pow(Tower(10L), pow(Tower(2L), Tower(431L)));
    const CmpOutcome o = compare(a, b);
    return CheckResult{"2^(3*2^432) > 10^(2^431)", o.order > 0, "via " + to_string(o.method)};
  }));
  add(guarded("digits(2^431) = 130", [] {
    const BigInt n = digit_count(pow(Tower(2L), Tower(431L)));
    return CheckResult{"digits(2^431) = 130", n == 130, n.get_str()};
  }));
  return out;
}

}  // namespace lacunary
