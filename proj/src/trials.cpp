#include "opmean/trials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>

#include "opmean/errors.hpp"
#include "opmean/identities.hpp"
#include "opmean/matrix_io.hpp"
#include "opmean/mean_spec.hpp"
#include "opmean/measure.hpp"

#ifdef OPMEAN_HAVE_OPENMP
#include <omp.h>
#endif

namespace opmean {

void Tolerances::set(const std::string& name, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidArgument("tolerance " + name + " must be finite and nonnegative");
  }
  if (name == "identity") {
    identity = value;
  } else if (name == "loewner") {
    loewner = value;
  } else if (name == "eigen") {
    eigen = value;
  } else if (name == "scalar") {
    scalar = value;
  } else if (name == "equal_gap") {
    equality.equal_gap = value;
  } else if (name == "strict_gap") {
    equality.strict_gap = value;
  } else if (name == "distinct_distance") {
    equality.distinct_distance = value;
  } else if (name == "same_distance") {
    equality.same_distance = value;
  } else {
    throw InvalidArgument("unknown tolerance name \"" + name + "\"");
  }
}

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"identities", "thm31",  "thm39",   "thm311",
                                              "prop35",     "scalar", "equality", "example33"};
  return names;
}

const std::vector<std::string>& default_suites() {
  static const std::vector<std::string> names{"identities", "thm31",  "thm39",   "thm311",
                                              "prop35",     "scalar", "equality"};
  return names;
}

void TrialConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (dim_lo < 1 || dim_hi > 64 || dim_lo > dim_hi) {
    throw InvalidArgument("dims must satisfy 1 <= lo <= hi <= 64");
  }
  if (suites.empty()) throw InvalidArgument("no suite selected");
  for (const auto& s : suites) {
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end()) {
      throw InvalidArgument("unknown suite \"" + s + "\"");
    }
  }
}

nlohmann::ordered_json TrialRecord::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["trial"] = trial;
  j["dim"] = dim;
  j["mean_spec"] = mean_spec;
  j["check_id"] = check_id;
  j["slack"] = slack;
  j["gap"] = gap;
  j["verdict"] = verdict;
  if (witness) j["witness"] = *witness;
  if (matrix) j["matrix"] = *matrix;
  if (message) j["message"] = *message;
  return j;
}

std::string TrialReport::jsonl() const {
  std::string out;
  for (const auto& r : records) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

std::string TrialReport::summary_csv() const {
  std::string out = "check_id,trials,min_slack,failures\n";
  char buf[64];
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof buf, "%.17g", s.min_slack);
    out += s.check_id + "," + std::to_string(s.trials) + "," + buf + "," +
           std::to_string(s.failures) + "\n";
  }
  return out;
}

std::vector<FamilyMember> default_family() {
  std::vector<FamilyMember> out;
  for (int k = 1; k <= 9; ++k) {
    const double mu = 0.1 * k;
    char tag[16];
    std::snprintf(tag, sizeof tag, "%.1f", mu);
    out.push_back({std::string("geometric:") + tag, named_mean(MeanKind::geometric, mu)});
    out.push_back({std::string("harmonic:") + tag, named_mean(MeanKind::harmonic, mu)});
    // 1/2 delta_mu + 1/2 (geometric mu density)
    auto m = std::make_shared<const BorelMeasure>(
        std::vector<Atom>{{mu, 0.5}}, Density{GeometricDensity{mu, 0.5}});
    out.push_back({std::string("mixture:") + tag, f_from_measure(m)});
  }
  return out;
}

namespace {

nlohmann::ordered_json vector_json(const CVector& v) {
  auto arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

class Context {
 public:
  explicit Context(const TrialConfig& config) : config_(config), family_(default_family()) {
    if (config.mean_spec) {
      fixed_.emplace(FamilyMember{*config.mean_spec, parse_mean_spec(*config.mean_spec)});
    }
  }

  const TrialConfig& config() const { return config_; }
  const FamilyMember& member(int i) const {
    return fixed_ ? *fixed_ : family_[static_cast<std::size_t>(i) % family_.size()];
  }
  const FamilyMember& partner(int i) const {
    return family_[static_cast<std::size_t>(i + 1) % family_.size()];
  }

 private:
  const TrialConfig& config_;
  std::vector<FamilyMember> family_;
  std::optional<FamilyMember> fixed_;
};

struct Task {
  std::size_t suite;
  int trial;
};

class Recorder {
 public:
  Recorder(std::vector<TrialRecord>& out, int trial, std::uint64_t seed, int dim, std::string spec)
      : out_(out), trial_(trial), seed_(seed), dim_(dim), spec_(std::move(spec)) {}

  TrialRecord& add(std::string id, double slack, double gap, bool passed,
                   std::string verdict = {}) {
    TrialRecord r;
    r.check_id = std::move(id);
    r.trial = trial_;
    r.seed = seed_;
    r.dim = dim_;
    r.mean_spec = spec_;
    r.slack = slack;
    r.gap = gap;
    r.failed = !passed;
    r.verdict = verdict.empty() ? (passed ? "pass" : "fail") : std::move(verdict);
    out_.push_back(std::move(r));
    return out_.back();
  }

  void identity(std::string id, const IdentityResidual& r) {
    add(std::move(id), -r.relative(), r.residual_fro, r.passes);
  }

  void order(std::string id, const OrderComparison& c, double gap) {
    auto& rec = add(std::move(id), c.min_eigenvalue_of_difference, gap, c.holds);
    if (c.witness_vector) rec.witness = vector_json(*c.witness_vector);
  }

  void eigen(std::string id, const EigSeqComparison& c) {
    add(std::move(id), -c.max_violation, c.max_gap, c.holds);
  }

  void set_dim(int dim) { dim_ = dim; }

 private:
  std::vector<TrialRecord>& out_;
  int trial_;
  std::uint64_t seed_;
  int dim_;
  std::string spec_;
};

int draw_dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

void run_identities(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto& cfg = ctx.config();
  const int n = draw_dim(rng, cfg.dim_lo, cfg.dim_hi);
  rec.set_dim(n);
  const HermitianMatrix a = random_pd(rng, n);
  const HermitianMatrix b = random_pd(rng, n);
  const RepresentingFunction& f = ctx.member(i).f;
  const double mu = f.mu();
  const double tol = cfg.tol.identity;
  rec.identity("thm24", thm24_residual(f, a, b, tol));
  rec.identity("transpose_identity", transpose_identity_residual(f, a, b, tol));
  const auto sharp = sharp_conjugation_residuals(f, a, b, tol);
  rec.identity("sharp_adjoint_transpose", sharp.adjoint_transpose);
  rec.identity("sharp_harmonic_adjoint", sharp.harmonic_adjoint);
  rec.identity("sharp_transpose_arithmetic", sharp.transpose_arith);
  rec.identity("dual_difference",
               dual_difference_residual(f, named_mean(MeanKind::geometric, mu), a, b, tol));
  rec.identity("cor_geometric", cor_geometric_residual(mu, a, b, tol));
  rec.identity("cor_geometric_half", cor_geometric_residual(0.5, a, b, tol));
  rec.identity("cor_harmonic", cor_harmonic_residual(mu, a, b, tol));
}

MatrixPair band_pair(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const int n = draw_dim(rng, ctx.config().dim_lo, ctx.config().dim_hi);
  rec.set_dim(n);
  constexpr PairMode modes[] = {PairMode::independent, PairMode::perturbation,
                                PairMode::commuting};
  return random_band_pair(rng, n, modes[i % 3]);
}

void run_thm31(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto pair = band_pair(ctx, rng, rec, i);
  const auto& tol = ctx.config().tol;
  const auto r = thm31_additive(ctx.member(i).f, pair.a, pair.b, tol.loewner, tol.equality);
  rec.order("thm31", r.order, r.equality.inequality_gap);
}

void run_thm39(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto pair = band_pair(ctx, rng, rec, i);
  const auto r = thm39_eigen(ctx.member(i).f, pair.a, pair.b, ctx.config().tol.eigen);
  rec.eigen("thm39_reciprocal", r.first);
  rec.eigen("thm39_adjoint", r.second);
}

void run_thm311(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto pair = band_pair(ctx, rng, rec, i);
  const auto r = thm311_eigen(ctx.member(i).f, pair.a, pair.b, ctx.config().tol.eigen);
  rec.eigen("thm311_ratio", r.first);
  rec.eigen("thm311_adjoint", r.second);
}

void run_prop35(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto& cfg = ctx.config();
  const int n = draw_dim(rng, cfg.dim_lo, cfg.dim_hi);
  rec.set_dim(n);
  const HermitianMatrix a = random_pd(rng, n);
  const HermitianMatrix b = random_pd(rng, n);
  const RepresentingFunction& f = ctx.member(i).f;
  const auto general = prop35_sandwich(f, ctx.partner(i).f, a, b, cfg.tol.loewner);
  rec.order("prop35_left", general.left, general.left_gap);
  rec.order("prop35_right", general.right, general.right_gap);
  const auto arith = f22_sandwich(f, a, b, cfg.tol.loewner);
  rec.order("f22_left", arith.left, arith.left_gap);
  rec.order("f22_right", arith.right, arith.right_gap);
}

void run_scalar(const Context& ctx, Rng& rng, Recorder& rec, int) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const int n = 2 + static_cast<int>(rng() % 9);
  rec.set_dim(n);
  ScalarMeansInput input;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    input.xs.push_back(0.5 * (1.0 - unit(rng)));
    input.weights.push_back(expo(rng));
    total += input.weights.back();
  }
  for (double& w : input.weights) w /= total;
  const auto suite = scalar_kyfan_suite(input, ctx.config().tol.scalar);
  for (const auto& c : suite.checks) {
    rec.add(std::string("scalar_") + c.id, c.slack, std::abs(c.slack), c.holds);
  }
}

void run_equality(const Context& ctx, Rng& rng, Recorder& rec, int i) {
  const auto& cfg = ctx.config();
  const auto& thr = cfg.tol.equality;
  const RepresentingFunction& f = ctx.member(i).f;
  const auto pair = band_pair(ctx, rng, rec, i);

  const auto same = thm31_additive(f, pair.a, pair.a, cfg.tol.loewner, thr);
  rec.add("equality_same", thr.equal_gap - same.equality.inequality_gap,
          same.equality.inequality_gap, same.equality.verdict != Verdict::inconsistent,
          to_string(same.equality.verdict));

  const auto diff = thm31_additive(f, pair.a, pair.b, cfg.tol.loewner, thr);
  const double slack = diff.equality.input_distance >= thr.distinct_distance && !f.is_linear()
                           ? diff.equality.inequality_gap - thr.strict_gap
                           : 0.0;
  rec.add("equality_distinct", slack, diff.equality.inequality_gap,
          diff.equality.verdict != Verdict::inconsistent, to_string(diff.equality.verdict));

  if (i == 0) {
    const auto c = remark37_crossing(0.3, 0.7, 2, thr);
    rec.set_dim(2);
    rec.add("equality_crossing",
            thr.equal_gap - std::max(c.sandwich.left_gap, c.sandwich.right_gap), c.sandwich.gap,
            c.equality_observed, to_string(c.verdict.verdict));
  }
}

void run_example33(const Context&, Rng&, Recorder& rec, int) {
  const auto r = reproduce_example33();
  rec.set_dim(2);
  for (std::size_t k = 0; k < r.displays.size(); ++k) {
    const auto& d = r.displays[k];
    auto& out = rec.add("example33_display_" + std::to_string(k + 1),
                        kExample33EntryTolerance - d.max_entry_error, d.min_eigenvalue,
                        d.matches && d.indefinite);
    out.matrix = matrix_to_json(d.computed);
  }
  for (const auto& c : r.controls) {
    auto& out = rec.add("example33_loewner_" + c.id, c.loewner.min_eigenvalue_of_difference,
                        -c.loewner.min_eigenvalue_of_difference, !c.loewner.holds,
                        c.loewner.holds ? "fail" : "expected_failure");
    if (c.loewner.witness_vector) out.witness = vector_json(*c.loewner.witness_vector);
    rec.eigen("example33_eigen_" + c.id, c.eigen);
  }
  rec.add("example33_order", 0.0, 0.0, r.b_leq_a && r.a_leq_half);
}

using SuiteFn = void (*)(const Context&, Rng&, Recorder&, int);

SuiteFn suite_fn(const std::string& name) {
  static const std::map<std::string, SuiteFn> table{
      {"identities", run_identities}, {"thm31", run_thm31},         {"thm39", run_thm39},
      {"thm311", run_thm311},         {"prop35", run_prop35},       {"scalar", run_scalar},
      {"equality", run_equality},     {"example33", run_example33},
  };
  return table.at(name);
}

std::vector<TrialRecord> run_task(const Context& ctx, const Task& task) {
  const std::string& suite = ctx.config().suites[task.suite];
  const auto suite_pos = static_cast<std::uint64_t>(
      std::find(all_suites().begin(), all_suites().end(), suite) - all_suites().begin());
  const std::uint64_t seed = trial_seed(trial_seed(ctx.config().seed, 1000 + suite_pos),
                                        static_cast<std::uint64_t>(task.trial));
  const std::string spec =
      suite == "scalar" || suite == "example33" ? std::string() : ctx.member(task.trial).spec;
  std::vector<TrialRecord> out;
  Recorder rec(out, task.trial, seed, 0, spec);
  try {
    Rng rng(seed);
    suite_fn(suite)(ctx, rng, rec, task.trial);
  } catch (const Error& e) {
    out.clear();
    auto& r = rec.add(suite + "_error", -std::numeric_limits<double>::infinity(), 0.0, false,
                      "error");
    r.message = e.what();
    r.numerical_error = dynamic_cast<const NumericalFailure*>(&e) != nullptr;
  }
  return out;
}

std::vector<Task> make_tasks(const TrialConfig& config) {
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.suites.size(); ++s) {
    const int count = config.suites[s] == "example33" ? 1 : config.trials;
    for (int i = 0; i < count; ++i) tasks.push_back({s, i});
  }
  return tasks;
}

TrialReport assemble(std::vector<std::vector<TrialRecord>> per_task) {
  TrialReport report;
  for (auto& v : per_task) {
    for (auto& r : v) report.records.push_back(std::move(r));
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const TrialRecord& x, const TrialRecord& y) {
                     if (x.check_id != y.check_id) return x.check_id < y.check_id;
                     return x.trial < y.trial;
                   });
  for (const auto& r : report.records) {
    if (report.summary.empty() || report.summary.back().check_id != r.check_id) {
      report.summary.push_back({r.check_id, 0, std::numeric_limits<double>::infinity(), 0});
    }
    auto& s = report.summary.back();
    ++s.trials;
    s.min_slack = std::min(s.min_slack, r.slack);
    if (r.failed) {
      ++s.failures;
      ++report.failures;
    }
    if (r.numerical_error) ++report.numerical_errors;
  }
  return report;
}

}  // namespace

TrialReport run_trials_serial(const TrialConfig& config) {
  config.validate();
  const Context ctx(config);
  const auto tasks = make_tasks(config);
  std::vector<std::vector<TrialRecord>> results(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) results[k] = run_task(ctx, tasks[k]);
  return assemble(std::move(results));
}

TrialReport run_trials_parallel(const TrialConfig& config) {
  config.validate();
  const Context ctx(config);
  const auto tasks = make_tasks(config);
  std::vector<std::vector<TrialRecord>> results(tasks.size());
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#ifdef OPMEAN_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    results[static_cast<std::size_t>(k)] = run_task(ctx, tasks[static_cast<std::size_t>(k)]);
  }
  return assemble(std::move(results));
}

}  // namespace opmean
