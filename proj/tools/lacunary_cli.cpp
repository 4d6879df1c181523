#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lacunary/bounds.hpp"
#include "lacunary/decompose.hpp"
#include "lacunary/harness.hpp"
#include "lacunary/series.hpp"
#include "lacunary/tower.hpp"

using namespace lacunary;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Exact value if small, else "2^k" when a power of two, else the tower text.
std::string describe(const Tower& t) {
  if (auto v = try_evaluate(t, 256)) return v->get_str();
  if (auto e = log2_exact(t)) return "2^(" + render_pow2(*e) + ")";
  return t.to_string();
}

std::string log2_form(const Tower& t) {
  if (auto e = log2_exact(t)) return render_pow2(*e);
  return "";
}

int cmd_bounds(std::int64_t l, bool as_json) {
  if (l < 1) throw DomainError("--l must be >= 1");
  const Tower b1 = B1(l);
  json j;
  j["l"] = l;
  j["b1_formula"] = B1_formula(l);
  j["b1_tower"] = b1.to_string();
  j["b1_log2"] = log2_form(b1);
  const auto bounds = loglog2_bounds(b1);
  j["b1_loglog2"] = {bounds.lo, bounds.hi};
  if (l == 1) j["b1_text_minimum"] = 2;
  if (l >= 2) {
    const std::int64_t d = 2 * l * (l - 1);
    j["d_max"] = d;
    j["lambda"] = describe(lambda(l, d));
    j["lemma_base"] = describe(lemma_base(l));
    j["M"] = M_of(l).to_string();
    j["M_log2"] = log2_form(M_of(l));
    j["two_L_bound"] = two_L_bound(l).to_string();
    j["two_L_bound_log2"] = log2_form(two_L_bound(l));
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "B1(" << l << ") = " << j["b1_formula"].get<std::string>() << "\n"
            << "      = " << j["b1_tower"].get<std::string>() << "\n";
  if (!j["b1_log2"].get<std::string>().empty()) {
    std::cout << "      = 2^(" << j["b1_log2"].get<std::string>() << ")\n";
  }
  std::cout << "log2 log2 B1 in [" << bounds.lo << ", " << bounds.hi << "]\n";
  if (l == 1) std::cout << "the l = 1 case also allows B1(1) = 2\n";
  if (l >= 2) {
    std::cout << "d <= 2l(l-1) = " << j["d_max"] << "\n"
              << "lambda = " << j["lambda"].get<std::string>() << "\n"
              << "16^(l+2)*l^6 = " << j["lemma_base"].get<std::string>() << "\n"
              << "M = " << j["M"].get<std::string>();
    if (!j["M_log2"].get<std::string>().empty()) std::cout << " = 2^(" << j["M_log2"].get<std::string>() << ")";
    std::cout << "\n2L <= " << j["two_L_bound"].get<std::string>();
    if (!j["two_L_bound_log2"].get<std::string>().empty()) {
      std::cout << " = 2^(" << j["two_L_bound_log2"].get<std::string>() << ")";
    }
    std::cout << "\n";
  }
  return kOk;
}

int cmd_verify_chains(std::int64_t l_max) {
  const VerifySummary summary = verify_all(l_max);
  for (const auto& c : summary.checks) {
    std::cout << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
  }
  std::cout << (summary.ok() ? "all checks passed" : "some checks failed") << "\n";
  return summary.ok() ? kOk : kCheckFailed;
}

int cmd_verify_l2(bool as_json) {
  const L2Report r = l2_pipeline();
  json counts = json::object();
  for (const auto& [d, c] : r.shape_counts) counts[std::to_string(d)] = c;
  json strict = json::object();
  for (const auto& [d, c] : r.shape_counts_strict) strict[std::to_string(d)] = c;
  json j;
  j["shape_counts"] = counts;
  j["shape_counts_strict"] = strict;
  j["rough_estimate"] = r.rough_estimate.get_si();
  j["d1_terms"] = r.d1_terms.get_si();
  j["L_used"] = r.L_used.get_si();
  j["ratio_bound"] = r.ratio_bound.get_si();
  j["h1_bound"] = r.h1_bound.get_si();
  j["case1_terms"] = r.case1_terms.get_si();
  j["case2_exp_min"] = r.case2_exp_min.get_si();
  j["case2_exp_max"] = r.case2_exp_max.get_si();
  j["denom_terms"] = r.denom_terms.get_si();
  j["final_bound"] = r.final_bound.get_si();
  j["ok"] = r.ok();
  j["failures"] = r.failures;
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "shape counts (cap <= 2n_2):";
    for (const auto& [d, c] : r.shape_counts) std::cout << " d=" << d << ":" << c;
    std::cout << "\nshape counts (cap < 2n_2):";
    for (const auto& [d, c] : r.shape_counts_strict) std::cout << " d=" << d << ":" << c;
    std::cout << "\nrough estimate 3(2d+1) = " << r.rough_estimate << "\n"
              << "L = " << r.L_used << "\n"
              << "n_2/n_1 <= " << r.L_used << "*" << r.L_used + 1 << "*4*2 = " << r.ratio_bound << "\n"
              << "h_1 <= " << r.h1_bound << "\n"
              << "case 1 terms <= " << r.case1_terms << "\n"
              << "(s-kd)/e in {" << r.case2_exp_max << ", ..., " << r.case2_exp_min << "}\n"
              << "denominator terms <= " << r.denom_terms << "\n"
              << "numerator terms <= " << r.L_used << "*" << r.denom_terms << " = " << r.final_bound << "\n"
              << "d = 1: at most " << r.d1_terms << " terms\n";
    for (const auto& f : r.failures) std::cout << "FAIL " << f << "\n";
  }
  return r.ok() ? kOk : kCheckFailed;
}

int cmd_decompose(const std::string& text, std::optional<std::int64_t> degree) {
  const SparsePoly f = parse_poly(text);
  if (f.is_constant()) throw ParseError("cannot decompose a constant", 0);
  std::vector<Decomposition> found;
  if (degree) {
    if (*degree < 1) throw DomainError("--degree must be >= 1");
    if (auto dec = decompose_at_degree(f, *degree)) found.push_back(*dec);
  } else {
    found = all_decompositions(f);
  }
  if (found.empty()) {
    std::cout << "no decomposition";
    if (degree) std::cout << " with deg g = " << *degree;
    std::cout << "\n";
    return kOk;
  }
  for (const auto& dec : found) {
    std::cout << "d = " << dec.d << "\n  g = " << dec.g.to_string() << "\n  h = " << dec.h.to_string() << "\n";
  }
  return kOk;
}

int cmd_expand(const std::string& text, std::int64_t d, std::int64_t order) {
  const SparsePoly f = parse_poly(text);
  if (f.is_constant()) throw ParseError("cannot expand a constant", 0);
  if (order < 1) throw DomainError("--order must be >= 1");
  const auto basis = puiseux_basis(f, d, order);
  std::cout << "f~ = " << delta_p(normalize_f(f), normalize_f(f).l()).to_string('y') << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::cout << "basis[" << static_cast<std::int64_t>(i) - 1 << "] = " << basis[i].to_string() << "\n";
  }
  if (auto dec = decompose_at_degree(f, d)) {
    const TruncSeries target = poly_to_series(tilde_transform(dec->h), d, order * d);
    std::cout << "h = " << dec->h.to_string() << "\nh~ = " << target.to_string() << "\n";
    if (auto gamma = match_target(target, basis)) {
      for (std::size_t i = 0; i < gamma->size(); ++i) {
        std::cout << "gamma_" << static_cast<std::int64_t>(i) - 1 << " = " << (*gamma)[i].get_str() << "\n";
      }
    } else {
      std::cout << "h~ is not in the span of the basis at this order\n";
    }
  } else {
    std::cout << "no decomposition with deg g = " << d << "\n";
  }
  return kOk;
}

int cmd_fuzz(const TrialConfig& cfg, const std::string& out_path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw DomainError("cannot open " + out_path);
    out = &file;
  }
  std::size_t errors = 0, not_recovered = 0, deg_violations = 0, no_match = 0, b1_fail = 0;
  run_trials(cfg, [&](const TrialRecord& r) {
    *out << to_jsonl(r);
    if (r.error) {
      ++errors;
      return;
    }
    if (!r.decomposition_recovered) ++not_recovered;
    if (r.deg_bound_applicable && !r.deg_bound_ok) ++deg_violations;
    if (!r.structural_match) ++no_match;
    if (!r.b1_satisfied) ++b1_fail;
  });
  std::ostream& report = out_path.empty() ? std::cerr : std::cout;
  report << "trials " << cfg.trials << ", errors " << errors << ", not recovered " << not_recovered
         << ", degree-bound violations " << deg_violations << ", structural misses " << no_match
         << ", B1 failures " << b1_fail << "\n";
  return errors + not_recovered + deg_violations + no_match + b1_fail == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse polynomial decomposition and term-count bounds"};
  app.require_subcommand(1);

  std::int64_t l = 2;
  bool json_out = false;
  auto* bounds = app.add_subcommand("bounds", "Print B1(l) and the constants of the proof");
  bounds->add_option("--l", l, "number of non-constant terms")->required();
  bounds->add_flag("--json", json_out, "JSON output");

  std::int64_t l_max = 4;
  auto* chains = app.add_subcommand("verify-chains", "Check every inequality chain for l = 2..l_max");
  chains->add_option("--l-max", l_max, "largest l")->required();

  bool l2_json = false;
  auto* l2 = app.add_subcommand("verify-l2", "Recompute the l = 2 constants");
  l2->add_flag("--json", l2_json, "JSON output");

  std::string poly;
  std::optional<std::int64_t> degree;
  auto* dec = app.add_subcommand("decompose", "Decompose f = g(h)");
  dec->add_option("--poly", poly, "polynomial in x")->required();
  dec->add_option("--degree", degree, "deg g");

  std::string f_text;
  std::int64_t d = 2, order = 1;
  auto* expand = app.add_subcommand("expand", "Puiseux basis of f at degree d");
  expand->add_option("--f", f_text, "polynomial in x")->required();
  expand->add_option("--d", d, "deg g")->required();
  expand->add_option("--order", order, "truncation order in y")->required();

  TrialConfig cfg;
  std::string out_path;
  auto* fuzz = app.add_subcommand("fuzz", "Random decomposition trials as JSONL");
  fuzz->add_option("--trials", cfg.trials)->required();
  fuzz->add_option("--seed", cfg.master_seed)->required();
  fuzz->add_option("--max-deg-g", cfg.max_deg_g)->required();
  fuzz->add_option("--max-deg-h", cfg.max_deg_h)->required();
  fuzz->add_option("--max-terms-h", cfg.max_terms_h)->required();
  fuzz->add_option("--coeff-bound", cfg.coeff_bound)->required();
  fuzz->add_option("--out", out_path, "JSONL file (default stdout)");
  fuzz->add_option("--threads", cfg.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*bounds) return cmd_bounds(l, json_out);
    if (*chains) return cmd_verify_chains(l_max);
    if (*l2) return cmd_verify_l2(l2_json);
    if (*dec) return cmd_decompose(poly, degree);
    if (*expand) return cmd_expand(f_text, d, order);
    if (*fuzz) {
      cfg.validate();
      return cmd_fuzz(cfg, out_path);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.position() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
