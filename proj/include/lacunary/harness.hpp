#pragma once

// Random decomposition instances, the per-trial verification record and
// the aggregate bound checks behind the CLI.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacunary/sparse_poly.hpp"

namespace lacunary {

struct TrialConfig {
  std::uint64_t master_seed = 0;
  std::size_t trials = 1;
  std::int64_t max_deg_g = 2;
  std::int64_t max_deg_h = 2;
  std::int64_t max_terms_h = 1;
  std::int64_t coeff_bound = 1;
  unsigned threads = 1;

  /// Throws DomainError when a cap or the trial count is below 1.
  void validate() const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  std::string g, h, f;
  std::size_t l = 0;
  std::int64_t d = 0;
  bool deg_bound_applicable = false;
  bool deg_bound_ok = false;
  bool decomposition_recovered = false;
  bool structural_match = false;
  std::size_t terms_h = 0;
  bool b1_satisfied = false;
  std::optional<std::string> error;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// SplitMix64 finaliser of master + golden_gamma * (index + 1).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

/// h monic with h(0) = 0, g with g(0) != 0, f = g(h). Degree caps below 2
/// are raised to 2.
Instance gen_instance(std::uint64_t seed, const TrialConfig& cfg);

/// h is not a x^k + b: exactly one non-constant term.
bool deg_bound_applicable(const SparsePoly& h);

/// Whether h~ lies in the span of the p = l-1 term shapes of f modulo
/// y^(2 n_l). f with f(0) = 0 is shifted by 1 first.
bool structural_match(const SparsePoly& f, std::int64_t d, const SparsePoly& h);

TrialRecord run_trial(std::size_t trial_index, const TrialConfig& cfg);

/// Runs every trial (on cfg.threads workers) and hands records to `sink`
/// in trial_index order.
void run_trials(const TrialConfig& cfg, const std::function<void(const TrialRecord&)>& sink);
std::vector<TrialRecord> run_trials(const TrialConfig& cfg);

nlohmann::ordered_json to_json(const TrialRecord& rec);
std::string to_jsonl(const TrialRecord& rec);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Every bound check for l in {2, ..., l_max}, the l = 2 pipeline, and the
/// B1 / digit identities.
VerifySummary verify_all(std::int64_t l_max);

}  // namespace lacunary
