#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "opmean/identities.hpp"
#include "opmean/inequalities.hpp"
#include "opmean/representing_function.hpp"

namespace opmean {

inline constexpr std::uint64_t kDefaultSeed = 20250101;

struct Tolerances {
  double identity = kIdentityTolerance;
  double loewner = kLoewnerTolerance;
  double eigen = kEigenTolerance;
  double scalar = kScalarTolerance;
  EqualityThresholds equality;

  /// Names: identity, loewner, eigen, scalar, equal_gap, strict_gap,
  /// distinct_distance, same_distance. InvalidArgument for anything else.
  void set(const std::string& name, double value);
};

/// Suite names accepted by run_trials.
const std::vector<std::string>& all_suites();
/// The suites run when none are named (everything but example33).
const std::vector<std::string>& default_suites();

struct TrialConfig {
  std::uint64_t seed = kDefaultSeed;
  int trials = 200;
  int dim_lo = 1;
  int dim_hi = 8;
  std::vector<std::string> suites = default_suites();
  Tolerances tol;
  /// When set, every trial uses this mean; otherwise trials cycle through
  /// geometric, harmonic and a Dirac/geometric mixture with mu in {0.1, ..., 0.9}.
  std::optional<std::string> mean_spec;

  void validate() const;
};

struct TrialRecord {
  std::string check_id;
  int trial = 0;
  std::uint64_t seed = 0;  // per-trial generator seed
  int dim = 0;
  std::string mean_spec;
  double slack = 0.0;
  double gap = 0.0;
  std::string verdict;  // pass, fail, expected_failure, error, or an equality verdict
  bool failed = false;
  bool numerical_error = false;
  std::optional<nlohmann::ordered_json> witness;
  std::optional<nlohmann::ordered_json> matrix;
  std::optional<std::string> message;

  nlohmann::ordered_json to_json() const;
};

struct CheckSummary {
  std::string check_id;
  int trials = 0;
  double min_slack = 0.0;
  int failures = 0;
};

struct TrialReport {
  std::vector<TrialRecord> records;  // ordered by (check_id, trial)
  std::vector<CheckSummary> summary;  // ordered by check_id
  int failures = 0;
  int numerical_errors = 0;

  std::string jsonl() const;
  std::string summary_csv() const;
};

/// Reference implementation: trials run one after another.
TrialReport run_trials_serial(const TrialConfig& config);
/// Same trials under OpenMP; the report is identical to the serial one.
TrialReport run_trials_parallel(const TrialConfig& config);

/// The mean used by trial index i when no mean_spec is configured.
struct FamilyMember {
  std::string spec;
  RepresentingFunction f;
};
std::vector<FamilyMember> default_family();

}  // namespace opmean
