#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "opmean/errors.hpp"
#include "opmean/random_matrices.hpp"
#include "opmean/trials.hpp"

using namespace opmean;

namespace {

TrialConfig small_config(std::uint64_t seed = 11) {
  TrialConfig c;
  c.seed = seed;
  c.trials = 12;
  c.dim_hi = 4;
  return c;
}

}  // namespace

TEST_CASE("parallel report equals the serial reference byte for byte") {
  auto c = small_config();
  c.suites = all_suites();
  const auto serial = run_trials_serial(c);
  const auto parallel = run_trials_parallel(c);
  CHECK(serial.jsonl() == parallel.jsonl());
  CHECK(serial.summary_csv() == parallel.summary_csv());
  CHECK(serial.failures == parallel.failures);
  CHECK(serial.failures == 0);
}

TEST_CASE("reports are deterministic in the seed") {
  const auto a = run_trials_parallel(small_config(5)).jsonl();
  const auto b = run_trials_parallel(small_config(5)).jsonl();
  const auto c = run_trials_parallel(small_config(6)).jsonl();
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("per-trial seeds are distinct and reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(kDefaultSeed, i));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(kDefaultSeed, 3) == trial_seed(kDefaultSeed, 3));
  CHECK(trial_seed(1, 3) != trial_seed(2, 3));
}

TEST_CASE("records are ordered and the summary counts them") {
  const auto r = run_trials_serial(small_config());
  for (std::size_t k = 1; k < r.records.size(); ++k) {
    const auto& p = r.records[k - 1];
    const auto& q = r.records[k];
    CHECK((p.check_id < q.check_id || (p.check_id == q.check_id && p.trial <= q.trial)));
  }
  int total = 0;
  for (const auto& s : r.summary) {
    total += s.trials;
    CHECK(s.failures == 0);
  }
  CHECK(total == static_cast<int>(r.records.size()));

  std::istringstream csv(r.summary_csv());
  std::string line;
  std::getline(csv, line);
  CHECK(line == "check_id,trials,min_slack,failures");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == static_cast<int>(r.summary.size()));
}

TEST_CASE("JSON lines carry the record fields") {
  auto c = small_config();
  c.suites = {"thm31"};
  const auto r = run_trials_serial(c);
  std::istringstream in(r.jsonl());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"seed", "trial", "dim", "mean_spec", "check_id", "slack", "gap", "verdict"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["dim"].get<int>() >= 1);
    CHECK(j["dim"].get<int>() <= 4);
    ++n;
  }
  CHECK(n == 12);
}

TEST_CASE("zero tolerance exposes roundoff failures") {
  auto c = small_config();
  c.trials = 40;
  c.suites = {"identities", "thm31"};
  c.tol.set("identity", 0.0);
  c.tol.set("loewner", 0.0);
  const auto r = run_trials_parallel(c);
  CHECK(r.failures > 0);
  // Identity residuals are essentially never exactly zero.
  bool identity_failed = false;
  for (const auto& s : r.summary) identity_failed = identity_failed || (s.check_id == "thm24" && s.failures > 0);
  CHECK(identity_failed);
  for (const auto& rec : r.records) {
    if (rec.failed) CHECK(rec.slack < 0.0);
  }
}

TEST_CASE("fixed mean spec is used in every trial") {
  auto c = small_config();
  c.suites = {"identities"};
  c.mean_spec = "geometric:0.3";
  for (const auto& rec : run_trials_serial(c).records) CHECK(rec.mean_spec == "geometric:0.3");
}

TEST_CASE("default family cycles through three kinds and nine weights") {
  const auto fam = default_family();
  CHECK(fam.size() == 27);
  CHECK(fam[0].spec == "geometric:0.1");
  CHECK(fam[1].spec == "harmonic:0.1");
  CHECK(fam[2].spec == "mixture:0.1");
  CHECK(fam[2].f.measure() != nullptr);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    CHECK(fam[k].f.mu() == doctest::Approx(0.1 * (k / 3 + 1)).epsilon(1e-9));
  }
}

TEST_CASE("configuration validation") {
  auto c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = small_config();
  c.dim_lo = 5;
  c.dim_hi = 2;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = small_config();
  c.suites = {"nonsense"};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  Tolerances t;
  CHECK_THROWS_AS(t.set("bogus", 1.0), InvalidArgument);
  t.set("strict_gap", 1e-7);
  CHECK(t.equality.strict_gap == 1e-7);
}
