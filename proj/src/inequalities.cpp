#include "opmean/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opmean/errors.hpp"

namespace opmean {

void ScalarMeansInput::validate() const {
  if (xs.size() < 2) throw InvalidArgument("scalar means need at least two values");
  if (xs.size() != weights.size()) throw InvalidArgument("xs and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && xs[i] <= 0.5)) throw InvalidArgument("each x_i must lie in (0, 1/2]");
    if (!(weights[i] >= 0.0)) throw InvalidArgument("weights must be nonnegative");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("weights must sum to 1");
}

namespace {

// Means written as c (1 + delta) with c = x_1, so that differences of means
// come out without cancellation and equal inputs give exactly equal means.
struct Deviations {
  double c = 0.0;
  double alpha = 0.0;  // A / c - 1
  double gamma = 0.0;  // G / c - 1
  double eta = 0.0;    // H / c - 1
};

Deviations deviations(const ScalarMeansInput& input, bool primed) {
  const double x1 = input.xs.front();
  Deviations d;
  d.c = primed ? 1.0 - x1 : x1;
  double total = 0.0, lin = 0.0, log_sum = 0.0, recip = 0.0;
  for (std::size_t i = 0; i < input.xs.size(); ++i) {
    const double w = input.weights[i];
    const double dev = primed ? (x1 - input.xs[i]) / d.c : (input.xs[i] - x1) / d.c;
    total += w;
    lin += w * dev;
    log_sum += w * std::log1p(dev);
    recip += w * dev / (1.0 + dev);
  }
  d.alpha = lin / total;
  d.gamma = std::expm1(log_sum / total);
  const double s = recip / total;
  d.eta = s / (1.0 - s);
  return d;
}

}  // namespace

ScalarMeans scalar_means(const ScalarMeansInput& input) {
  input.validate();
  const Deviations u = deviations(input, false);
  const Deviations p = deviations(input, true);
  return {u.c * (1.0 + u.alpha), u.c * (1.0 + u.gamma), u.c * (1.0 + u.eta),
          p.c * (1.0 + p.alpha), p.c * (1.0 + p.gamma), p.c * (1.0 + p.eta)};
}

ScalarSuite scalar_kyfan_suite(const ScalarMeansInput& input, double tol) {
  ScalarSuite s;
  s.means = scalar_means(input);
  const Deviations u = deviations(input, false);
  const Deviations p = deviations(input, true);
  // Each side is offset + excess; the slack compares excesses directly.
  auto check = [tol](const char* id, double offset, double lhs, double rhs) {
    return ScalarCheck{id, offset + lhs, offset + rhs, rhs - lhs, rhs - lhs >= -tol};
  };
  auto additive = [](const Deviations& d, double hi, double lo) { return d.c * (hi - lo); };
  auto reciprocal = [](const Deviations& d, double hi, double lo) {
    return (hi - lo) / (d.c * (1.0 + hi) * (1.0 + lo));
  };
  auto ratio = [](double hi, double lo) { return (hi - lo) / (1.0 + lo); };
  s.checks = {
      check("additive_A_G", 0.0, additive(p, p.alpha, p.gamma), additive(u, u.alpha, u.gamma)),
      check("additive_A_H", 0.0, additive(p, p.alpha, p.eta), additive(u, u.alpha, u.eta)),
      check("reciprocal_G_A", 0.0, reciprocal(p, p.alpha, p.gamma), reciprocal(u, u.alpha, u.gamma)),
      check("reciprocal_H_G", 0.0, reciprocal(p, p.gamma, p.eta), reciprocal(u, u.gamma, u.eta)),
      check("reciprocal_H_A", 0.0, reciprocal(p, p.alpha, p.eta), reciprocal(u, u.alpha, u.eta)),
      check("ratio_A_G", 1.0, ratio(p.alpha, p.gamma), ratio(u.alpha, u.gamma)),
      check("ratio_G_H", 1.0, ratio(p.gamma, p.eta), ratio(u.gamma, u.eta)),
      check("ratio_A_H", 1.0, ratio(p.alpha, p.eta), ratio(u.alpha, u.eta)),
  };
  s.all_hold = true;
  s.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& c : s.checks) {
    s.all_hold = s.all_hold && c.holds;
    s.min_slack = std::min(s.min_slack, c.slack);
    s.max_abs_slack = std::max(s.max_abs_slack, std::abs(c.slack));
  }
  return s;
}

Lemma34Result lemma34_check(double u, double v, double a, double tol) {
  if (!(u > 0.0 && v > 0.0)) throw InvalidArgument("lemma34_check needs u, v > 0");
  if (!(a < 0.0)) throw InvalidArgument("lemma34_check needs a < 0");
  Lemma34Result r;
  r.lower = a * std::pow(v, a - 1.0) * (u - v);
  r.middle = std::pow(u, a) - std::pow(v, a);
  r.upper = a * std::pow(u, a - 1.0) * (u - v);
  r.slack_lower = r.middle - r.lower;
  r.slack_upper = r.upper - r.middle;
  const double scale = std::max({1.0, std::abs(r.lower), std::abs(r.upper)});
  r.holds = r.slack_lower >= -tol * scale && r.slack_upper >= -tol * scale;
  const double equal_tol = std::max(tol, 1e-12) * scale;
  r.equality = r.slack_lower <= equal_tol && r.slack_upper <= equal_tol;
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::equality_consistent:
      return "equality_consistent";
    case Verdict::strict_consistent:
      return "strict_consistent";
    case Verdict::inconsistent:
      return "inconsistent";
  }
  return "?";
}

EqualityVerdict classify_equality(double distance, double gap, const EqualityThresholds& t,
                                  bool strict) {
  EqualityVerdict v{distance, gap, Verdict::strict_consistent};
  const bool looks_equal = gap <= t.equal_gap;
  if (distance <= t.same_distance) {
    v.verdict = looks_equal ? Verdict::equality_consistent : Verdict::inconsistent;
  } else if (!strict) {
    v.verdict = looks_equal ? Verdict::equality_consistent : Verdict::strict_consistent;
  } else if (distance >= t.distinct_distance) {
    v.verdict = gap >= t.strict_gap ? Verdict::strict_consistent : Verdict::inconsistent;
  } else {
    v.verdict = looks_equal ? Verdict::equality_consistent : Verdict::strict_consistent;
  }
  return v;
}

Thm31Result thm31_additive(const RepresentingFunction& f, const HermitianMatrix& a,
                           const HermitianMatrix& b, double tol,
                           const EqualityThresholds& thresholds) {
  require_same_dim(a, b);
  const auto pa = ComplementPair::make(a);
  const auto pb = ComplementPair::make(b);
  const double mu = f.mu();
  HermitianMatrix lhs = weighted_arithmetic(pa.a_prime, pb.a_prime, mu) -
                        evaluate_mean(f, pa.a_prime, pb.a_prime);
  HermitianMatrix rhs = weighted_arithmetic(a, b, mu) - evaluate_mean(f, a, b);
  OrderComparison order = loewner_leq(lhs, rhs, tol);
  const double gap = distance(rhs, lhs);
  return {std::move(lhs), std::move(rhs), std::move(order),
          classify_equality(distance(a, b), gap, thresholds, !f.is_linear())};
}

SandwichResult prop35_sandwich(const RepresentingFunction& sigma, const RepresentingFunction& tau,
                               const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  const HermitianMatrix s = evaluate_mean(sigma, a, b);
  const HermitianMatrix t = evaluate_mean(tau, a, b);
  const HermitianMatrix s_inv = inv_pd(s);
  const HermitianMatrix t_inv = inv_pd(t);
  const HermitianMatrix middle = s_inv - t_inv;
  const HermitianMatrix diff = t - s;
  const HermitianMatrix left = sandwich(t_inv, diff);
  const HermitianMatrix right = sandwich(s_inv, diff);
  SandwichResult r{loewner_leq(left, middle, tol), loewner_leq(middle, right, tol)};
  r.left_gap = distance(middle, left);
  r.right_gap = distance(right, middle);
  r.gap = std::min(r.left_gap, r.right_gap);
  return r;
}

SandwichResult f22_sandwich(const RepresentingFunction& f, const HermitianMatrix& a,
                            const HermitianMatrix& b, double tol) {
  return prop35_sandwich(f, named_mean(MeanKind::arithmetic, f.mu()), a, b, tol);
}

EigSeqComparison compare_eigenvalues(const HermitianMatrix& lhs, const HermitianMatrix& rhs,
                                     double tol) {
  require_same_dim(lhs, rhs);
  EigSeqComparison c{eigvals_desc(lhs), eigvals_desc(rhs)};
  c.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.lhs_eigs.size(); ++j) {
    const double d = c.lhs_eigs[j] - c.rhs_eigs[j];
    c.max_violation = std::max(c.max_violation, d);
    c.max_gap = std::max(c.max_gap, std::abs(d));
  }
  c.holds = c.max_violation <= tol;
  return c;
}

namespace {

template <class Expr>
EigSeqComparison complement_eigen(const Expr& expr, const HermitianMatrix& a,
                                  const HermitianMatrix& b, double tol) {
  require_same_dim(a, b);
  const auto pa = ComplementPair::make(a);
  const auto pb = ComplementPair::make(b);
  return compare_eigenvalues(expr(pa.a_prime, pb.a_prime), expr(a, b), tol);
}

}  // namespace

EigPair thm39_eigen(const RepresentingFunction& f, const HermitianMatrix& a,
                    const HermitianMatrix& b, double tol) {
  const double mu = f.mu();
  auto first = [&](const HermitianMatrix& x, const HermitianMatrix& y) {
    return inv_pd(evaluate_mean(f, x, y)) - inv_pd(weighted_arithmetic(x, y, mu));
  };
  auto second = [&](const HermitianMatrix& x, const HermitianMatrix& y) {
    return inv_pd(weighted_harmonic(x, y, mu)) - inv_pd(adjoint_mean(f, x, y));
  };
  return {complement_eigen(first, a, b, tol), complement_eigen(second, a, b, tol)};
}

EigPair thm311_eigen(const RepresentingFunction& f, const HermitianMatrix& a,
                     const HermitianMatrix& b, double tol) {
  const double mu = f.mu();
  auto first = [&](const HermitianMatrix& x, const HermitianMatrix& y) {
    return sandwich(inv_sqrt_pd(evaluate_mean(f, x, y)), weighted_arithmetic(x, y, mu));
  };
  auto second = [&](const HermitianMatrix& x, const HermitianMatrix& y) {
    return sandwich(inv_sqrt_pd(weighted_harmonic(x, y, mu)), adjoint_mean(f, x, y));
  };
  return {complement_eigen(first, a, b, tol), complement_eigen(second, a, b, tol)};
}

CrossingCase remark37_crossing(double r, double s, int dim,
                               const EqualityThresholds& thresholds) {
  CrossingCase c;
  c.r = r;
  c.s = s;
  const RepresentingFunction f = barbour(barbour(scaled_power(2.0, r)));
  const RepresentingFunction g = barbour(barbour(scaled_power(2.0, s)));
  c.f_at_t0 = f(c.t0);
  c.g_at_t0 = g(c.t0);
  const HermitianMatrix a = HermitianMatrix::identity(dim) * (1.0 / c.t0);
  const HermitianMatrix b = HermitianMatrix::identity(dim);
  c.distance = distance(a, b);
  c.sandwich = prop35_sandwich(f, g, a, b);
  c.verdict = classify_equality(c.distance, c.sandwich.gap, thresholds, false);
  c.equality_observed = std::max(c.sandwich.left_gap, c.sandwich.right_gap) <= thresholds.equal_gap;
  return c;
}

EqualitySuiteSummary equality_condition_suite(const RepresentingFunction& f, int trials,
                                              std::uint64_t seed, int max_dim,
                                              const EqualityThresholds& thresholds) {
  if (trials < 1) throw InvalidArgument("equality_condition_suite needs at least one trial");
  if (max_dim < 1) throw InvalidArgument("equality_condition_suite needs max_dim >= 1");
  EqualitySuiteSummary sum;
  sum.min_distinct_gap = std::numeric_limits<double>::infinity();
  constexpr PairMode modes[] = {PairMode::independent, PairMode::perturbation,
                                PairMode::commuting};
  for (int i = 0; i < trials; ++i) {
    Rng rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim));
    const HermitianMatrix a = random_band_matrix(rng, n);
    const auto same = thm31_additive(f, a, a, kLoewnerTolerance, thresholds);
    ++sum.equal_trials;
    sum.max_equal_gap = std::max(sum.max_equal_gap, same.equality.inequality_gap);
    if (same.equality.verdict == Verdict::inconsistent) ++sum.inconsistent;

    const auto pair = random_band_pair(rng, n, modes[i % 3]);
    const auto diff = thm31_additive(f, pair.a, pair.b, kLoewnerTolerance, thresholds);
    if (diff.equality.input_distance >= thresholds.distinct_distance) {
      ++sum.distinct_trials;
      sum.min_distinct_gap = std::min(sum.min_distinct_gap, diff.equality.inequality_gap);
    } else {
      ++sum.intermediate_trials;
    }
    if (diff.equality.verdict == Verdict::inconsistent) ++sum.inconsistent;
  }
  sum.crossing = remark37_crossing(0.3, 0.7, 2, thresholds);
  sum.passes = sum.inconsistent == 0 && sum.crossing.equality_observed &&
               sum.crossing.verdict.verdict == Verdict::equality_consistent;
  return sum;
}

}  // namespace opmean
