#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "opmean/errors.hpp"
#include "opmean/inequalities.hpp"
#include "opmean/mean.hpp"
#include "opmean/measure.hpp"
#include "opmean/random_matrices.hpp"
#include "support.hpp"

using namespace opmean;
using namespace opmean::testing;

namespace {

ScalarMeansInput random_input(Rng& rng, int n) {
  std::uniform_real_distribution<double> ux(1e-3, 0.5);
  std::uniform_real_distribution<double> uw(0.0, 1.0);
  ScalarMeansInput in;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    in.xs.push_back(ux(rng));
    in.weights.push_back(uw(rng));
    total += in.weights.back();
  }
  for (double& w : in.weights) w /= total;
  return in;
}

struct LongMeans {
  long double a = 0, g = 0, h = 0, ap = 0, gp = 0, hp = 0;
};

LongMeans brute_means(const ScalarMeansInput& in) {
  LongMeans m;
  long double lg = 0, lgp = 0, ih = 0, ihp = 0;
  for (std::size_t i = 0; i < in.xs.size(); ++i) {
    const long double x = in.xs[i], xp = 1.0L - x, w = in.weights[i];
    m.a += w * x;
    m.ap += w * xp;
    lg += w * std::log(x);
    lgp += w * std::log(xp);
    ih += w / x;
    ihp += w / xp;
  }
  m.g = std::exp(lg);
  m.gp = std::exp(lgp);
  m.h = 1.0L / ih;
  m.hp = 1.0L / ihp;
  return m;
}

const HermitianMatrix kExampleA = HermitianMatrix::from_rows({{1.0 / 5, -1.0 / 10}, {-1.0 / 10, 1.0 / 3}});
const HermitianMatrix kExampleB = HermitianMatrix::from_rows({{2.0 / 15, -1.0 / 10}, {-1.0 / 10, 1.0 / 3}});

std::vector<RepresentingFunction> nonlinear_means() {
  std::vector<RepresentingFunction> out;
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    out.push_back(named_mean(MeanKind::geometric, mu));
    out.push_back(named_mean(MeanKind::harmonic, mu));
    out.push_back(f_from_measure(BorelMeasure({{mu, 0.5}}, GeometricDensity{mu, 0.5})));
  }
  return out;
}

}  // namespace

TEST_CASE("scalar suite examples") {
  const auto eq = scalar_kyfan_suite({{0.25, 0.25}, {0.3, 0.7}});
  for (const auto& c : eq.checks) CHECK(std::abs(c.slack) <= 1e-15);
  CHECK(eq.all_hold);

  const auto s = scalar_kyfan_suite({{0.2, 0.4}, {0.5, 0.5}});
  const auto& add = s.checks[0];
  CHECK(std::string(add.id) == "additive_A_G");
  CHECK(add.rhs == doctest::Approx(0.3 - std::sqrt(0.08)).epsilon(1e-14));
  CHECK(add.lhs == doctest::Approx(0.7 - std::sqrt(0.48)).epsilon(1e-14));
  CHECK(add.slack == doctest::Approx(0.009977).epsilon(1e-4));
  CHECK(s.all_hold);
  const std::vector<std::string> ids = {"additive_A_G",   "additive_A_H",   "reciprocal_G_A", "reciprocal_H_G",
                                        "reciprocal_H_A", "ratio_A_G",      "ratio_G_H",      "ratio_A_H"};
  for (std::size_t k = 0; k < ids.size(); ++k) CHECK(s.checks[k].id == ids[k]);
}

TEST_CASE("scalar input validation") {
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2}, {1.0}}), InvalidArgument);
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2, 0.6}, {0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2, 0.0}, {0.5, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2, 0.3}, {0.5, 0.6}}), InvalidArgument);
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2, 0.3}, {1.5, -0.5}}), InvalidArgument);
  CHECK_THROWS_AS(scalar_kyfan_suite({{0.2, 0.3}, {1.0}}), InvalidArgument);
}

TEST_CASE("scalar means against a long double oracle") {
  Rng rng(401);
  for (int trial = 0; trial < 500; ++trial) {
    const auto in = random_input(rng, 2 + trial % 9);
    const auto m = scalar_means(in);
    const auto o = brute_means(in);
    CHECK(m.a == doctest::Approx(double(o.a)).epsilon(1e-14));
    CHECK(m.g == doctest::Approx(double(o.g)).epsilon(1e-13));
    CHECK(m.h == doctest::Approx(double(o.h)).epsilon(1e-13));
    CHECK(m.a_prime == doctest::Approx(double(o.ap)).epsilon(1e-14));
    CHECK(m.g_prime == doctest::Approx(double(o.gp)).epsilon(1e-13));
    CHECK(m.h_prime == doctest::Approx(double(o.hp)).epsilon(1e-13));
  }
}

TEST_CASE("property: the eight scalar inequalities on 10^4 seeded inputs") {
  Rng rng(20250101);
  std::uniform_int_distribution<int> un(2, 10);
  double worst = 1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto s = scalar_kyfan_suite(random_input(rng, un(rng)));
    worst = std::min(worst, s.min_slack);
    CHECK(s.all_hold);
  }
  CHECK(worst >= -1e-14);
}

TEST_CASE("property: scalar equality iff all x_i equal") {
  Rng rng(409);
  std::uniform_real_distribution<double> u(std::log(1e-9), std::log(0.5));
  std::uniform_real_distribution<double> uw(0.1, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + trial % 9;
    ScalarMeansInput in;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      in.weights.push_back(uw(rng));
      total += in.weights.back();
    }
    for (double& w : in.weights) w /= total;
    const double x = std::exp(u(rng));
    in.xs.assign(n, x);
    for (const auto& c : scalar_kyfan_suite(in).checks) CHECK(std::abs(c.slack) <= 1e-12);

    // Spread points: pairwise gaps >= 0.01 and every weight >= 0.1.
    const int m = 2 + trial % 4;
    ScalarMeansInput spread;
    std::uniform_real_distribution<double> start(0.01, 0.5 - 0.01 * (m - 1) - 1e-9);
    double pos = start(rng);
    for (int i = 0; i < m; ++i) {
      spread.xs.push_back(pos);
      std::uniform_real_distribution<double> step(0.01, std::max(0.01, (0.5 - pos) / (m - i)));
      pos = std::min(0.5, pos + step(rng));
    }
    spread.weights.assign(m, 1.0 / m);
    bool separated = true;
    for (int i = 0; i + 1 < m; ++i) separated = separated && spread.xs[i + 1] - spread.xs[i] >= 0.01;
    if (!separated) continue;
    for (const auto& c : scalar_kyfan_suite(spread).checks) CHECK(c.slack >= 1e-10);
  }
}

TEST_CASE("lemma34_check examples and grid") {
  const auto eq = lemma34_check(2.0, 2.0, -1.0);
  CHECK(eq.slack_lower == 0.0);
  CHECK(eq.slack_upper == 0.0);
  CHECK(eq.equality);
  CHECK(eq.holds);

  const auto r = lemma34_check(1.0, 2.0, -1.0);
  CHECK(r.lower == doctest::Approx(0.25));
  CHECK(r.middle == doctest::Approx(0.5));
  CHECK(r.upper == doctest::Approx(1.0));
  CHECK(r.holds);
  CHECK_FALSE(r.equality);

  for (double u = 0.05; u < 5.0; u *= 1.37) {
    for (double v = 0.05; v < 5.0; v *= 1.41) {
      for (double a : {-3.0, -1.0, -0.5, -0.01}) {
        const auto c = lemma34_check(u, v, a);
        CHECK(c.holds);
        CHECK(c.equality == (u == v));
      }
    }
    const auto same = lemma34_check(u, u, -2.0);
    CHECK(same.equality);
  }
  CHECK_THROWS_AS(lemma34_check(1.0, 2.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(lemma34_check(-1.0, 2.0, -1.0), InvalidArgument);
}

TEST_CASE("equality verdict classification") {
  const EqualityThresholds t;
  CHECK(classify_equality(0.0, 0.0, t).verdict == Verdict::equality_consistent);
  CHECK(classify_equality(0.0, 1e-6, t).verdict == Verdict::inconsistent);
  CHECK(classify_equality(0.5, 1e-6, t).verdict == Verdict::strict_consistent);
  CHECK(classify_equality(0.5, 1e-9, t).verdict == Verdict::inconsistent);
  CHECK(classify_equality(0.5, 1e-12, t, false).verdict == Verdict::equality_consistent);
  CHECK(classify_equality(1e-3, 1e-9, t).verdict != Verdict::inconsistent);
  CHECK(std::string(to_string(Verdict::strict_consistent)) == "strict_consistent");
}

TEST_CASE("strictness threshold calibration on scalar closed forms") {
  // a nabla_mu b - a #_mu b for scalars; gap = rhs - lhs of the additive complement inequality.
  auto defect = [](double a, double b, double mu) {
    return (1 - mu) * a + mu * b - std::pow(a, 1 - mu) * std::pow(b, mu);
  };
  double min_gap = 1.0;
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double a = 0.005; a <= 0.5; a += 0.005) {
      for (double b = 0.005; b <= 0.5; b += 0.005) {
        if (std::abs(a - b) < 0.01 - 1e-12) continue;
        const double gap = defect(a, b, mu) - defect(1 - a, 1 - b, mu);
        min_gap = std::min(min_gap, gap);
      }
    }
  }
  CHECK(min_gap >= 1e-8);

  const auto f = named_mean(MeanKind::geometric, 0.5);
  for (auto [a, b] : {std::pair{0.49, 0.5}, std::pair{0.05, 0.45}, std::pair{0.2, 0.3}}) {
    const auto r = thm31_additive(f, HermitianMatrix::diagonal({a}), HermitianMatrix::diagonal({b}));
    const double closed = defect(a, b, 0.5) - defect(1 - a, 1 - b, 0.5);
    CHECK(r.equality.inequality_gap == doctest::Approx(closed).epsilon(1e-9));
    CHECK(r.equality.verdict == Verdict::strict_consistent);
  }
}

TEST_CASE("thm31_additive examples") {
  const auto a = HermitianMatrix::identity(3) * 0.3;
  for (const auto& f : nonlinear_means()) {
    const auto r = thm31_additive(f, a, a);
    CHECK(r.order.holds);
    CHECK(r.equality.inequality_gap <= 1e-11);
    CHECK(r.equality.verdict == Verdict::equality_consistent);
  }
  const auto ex = thm31_additive(named_mean(MeanKind::geometric, 0.5), kExampleA, kExampleB);
  CHECK(ex.order.holds);
  CHECK_THROWS_AS(thm31_additive(named_mean(MeanKind::geometric, 0.5), HermitianMatrix::identity(2) * 0.6,
                                 HermitianMatrix::identity(2) * 0.3),
                  PreconditionViolated);
}

TEST_CASE("property: thm31_additive on random band pairs") {
  Rng rng(419);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 8;
    const auto pair = random_band_pair(rng, n, static_cast<PairMode>(trial % 3));
    for (const auto& f : nonlinear_means()) {
      const auto r = thm31_additive(f, pair.a, pair.b);
      CHECK(r.order.min_eigenvalue_of_difference >= -1e-10);
      CHECK(r.equality.verdict != Verdict::inconsistent);
      if (distance(pair.a, pair.b) >= 0.01) CHECK(r.equality.inequality_gap >= 1e-8);
    }
  }
}

TEST_CASE("prop35 sandwich") {
  Rng rng(421);
  const auto a = random_pd(rng, 3);
  const auto sharp = named_mean(MeanKind::geometric, 0.5);
  const auto arith = named_mean(MeanKind::arithmetic, 0.5);
  const auto eq = prop35_sandwich(sharp, arith, a, a);
  CHECK(eq.left.holds);
  CHECK(eq.right.holds);
  CHECK(eq.gap <= 1e-12);

  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    const auto x = random_pd(rng, n);
    const auto y = random_pd(rng, n);
    const auto r = prop35_sandwich(sharp, arith, x, y);
    CHECK(r.left.min_eigenvalue_of_difference >= -1e-10);
    CHECK(r.right.min_eigenvalue_of_difference >= -1e-10);
    for (const auto& f : nonlinear_means()) {
      const auto c = f22_sandwich(f, x, y);
      CHECK(c.left.holds);
      CHECK(c.right.holds);
      const auto same = prop35_sandwich(f, named_mean(MeanKind::arithmetic, f.mu()), x, y);
      CHECK(same.left_gap == doctest::Approx(c.left_gap));
    }
  }
}

TEST_CASE("prop35 on commuting pairs matches the scalar inequality") {
  // With u = a sigma b, v = a tau b and exponent -1 the scalar inequality reads
  // v^{-2}(v - u) <= u^{-1} - v^{-1} <= u^{-2}(v - u).
  Rng rng(431);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const auto sigma = named_mean(MeanKind::geometric, 0.3);
  const auto tau = named_mean(MeanKind::harmonic, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    std::vector<double> av(n), bv(n);
    double left_min = 1e300, right_min = 1e300;
    for (int i = 0; i < n; ++i) {
      av[i] = std::pow(10.0, ud(rng));
      bv[i] = std::pow(10.0, ud(rng));
      const double u = av[i] * sigma(bv[i] / av[i]);
      const double v = av[i] * tau(bv[i] / av[i]);
      const auto lem = lemma34_check(u, v, -1.0);
      CHECK(lem.holds);
      left_min = std::min(left_min, (1 / u - 1 / v) - (v - u) / (v * v));
      right_min = std::min(right_min, (v - u) / (u * u) - (1 / u - 1 / v));
    }
    const auto r = prop35_sandwich(sigma, tau, HermitianMatrix::diagonal(av), HermitianMatrix::diagonal(bv));
    CHECK(r.left.min_eigenvalue_of_difference == doctest::Approx(left_min).epsilon(1e-9).scale(1.0));
    CHECK(r.right.min_eigenvalue_of_difference == doctest::Approx(right_min).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("eigenvalue comparisons") {
  const auto cmp = compare_eigenvalues(HermitianMatrix::diagonal({1.0, 2.0}), HermitianMatrix::diagonal({3.0, 1.5}));
  CHECK(cmp.lhs_eigs == std::vector<double>{2.0, 1.0});
  CHECK(cmp.rhs_eigs == std::vector<double>{3.0, 1.5});
  CHECK(cmp.max_violation == doctest::Approx(-0.5));
  CHECK(cmp.holds);
  const auto bad = compare_eigenvalues(HermitianMatrix::diagonal({1.0, 4.0}), HermitianMatrix::diagonal({3.0, 1.5}));
  CHECK_FALSE(bad.holds);
  CHECK(bad.holds == (bad.max_violation <= kEigenTolerance));
  CHECK(compare_eigenvalues(HermitianMatrix::diagonal({1.0, 4.0}), HermitianMatrix::diagonal({3.0, 1.5}), 2.0).holds);
}

TEST_CASE("thm39 and thm311 on equal pairs") {
  const auto a = HermitianMatrix::diagonal({0.2, 0.35, 0.45});
  for (const auto& f : nonlinear_means()) {
    const auto r = thm39_eigen(f, a, a);
    for (double v : r.first.lhs_eigs) CHECK(std::abs(v) <= 1e-12);
    for (double v : r.second.rhs_eigs) CHECK(std::abs(v) <= 1e-12);
    CHECK(r.first.holds);
    CHECK(r.second.holds);
    const auto m = thm311_eigen(f, a, a);
    for (double v : m.first.lhs_eigs) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : m.first.rhs_eigs) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : m.second.lhs_eigs) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.first.holds);
    CHECK(m.second.holds);
  }
}

TEST_CASE("property: thm39_eigen and thm311_eigen on random band pairs") {
  Rng rng(433);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 7;
    const auto pair = random_band_pair(rng, n, static_cast<PairMode>(trial % 3));
    for (const auto& f : nonlinear_means()) {
      const auto r = thm39_eigen(f, pair.a, pair.b);
      const auto m = thm311_eigen(f, pair.a, pair.b);
      CHECK(r.first.max_violation <= 1e-9);
      CHECK(r.second.max_violation <= 1e-9);
      CHECK(m.first.max_violation <= 1e-9);
      CHECK(m.second.max_violation <= 1e-9);
    }
  }
}

TEST_CASE("reproduce_example33") {
  const auto r = reproduce_example33();
  CHECK(r.b_leq_a);
  CHECK(r.a_leq_half);
  REQUIRE(r.displays.size() == 3);
  const std::array<std::array<double, 3>, 3> printed = {{{0.226844, 0.0685098, 0.0204844},
                                                         {0.0292946, 0.00560064, 0.00101542},
                                                         {0.0293063, 0.00556985, 0.00100374}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& d = r.displays[k];
    CAPTURE(d.name);
    CHECK(std::abs(d.computed(0, 0).real() - printed[k][0]) <= 5e-6);
    CHECK(std::abs(d.computed(0, 1).real() - printed[k][1]) <= 5e-6);
    CHECK(std::abs(d.computed(1, 1).real() - printed[k][2]) <= 5e-6);
    CHECK(std::abs(d.computed(0, 1).imag()) == 0.0);
    CHECK(d.min_eigenvalue < -1e-6);
    CHECK(d.matches);
    CHECK(d.indefinite);
  }
  CHECK(r.controls.size() == 6);
  for (const auto& c : r.controls) {
    CAPTURE(c.id);
    CHECK_FALSE(c.loewner.holds);
    REQUIRE(c.loewner.witness_vector.has_value());
    CHECK(c.eigen.holds);
    CHECK(c.behaves_as_expected);
  }
  CHECK(r.passes);
}

TEST_CASE("counterexample pair: witness vectors expose the negative direction") {
  const auto r = reproduce_example33();
  for (const auto& c : r.controls) {
    const CVector& w = *c.loewner.witness_vector;
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.loewner.min_eigenvalue_of_difference < 0.0);
  }
  const auto e39 = thm39_eigen(named_mean(MeanKind::geometric, 0.5), kExampleA, kExampleB);
  const auto e311 = thm311_eigen(named_mean(MeanKind::geometric, 0.5), kExampleA, kExampleB);
  CHECK(e39.first.holds);
  CHECK(e39.second.holds);
  CHECK(e311.first.holds);
  CHECK(e311.second.holds);
}

TEST_CASE("remark37_crossing") {
  for (auto [r, s] : {std::pair{0.2, 0.8}, std::pair{0.3, 0.5}, std::pair{0.5, 0.8}}) {
    const auto c = remark37_crossing(r, s);
    CHECK(c.f_at_t0 == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
    CHECK(c.g_at_t0 == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
    CHECK(c.distance >= 0.01);
    CHECK(c.equality_observed);
    CHECK(c.verdict.verdict == Verdict::equality_consistent);
    CHECK(c.sandwich.left.holds);
    CHECK(c.sandwich.right.holds);
  }
}

TEST_CASE("equality condition suite") {
  for (const auto& f : {named_mean(MeanKind::geometric, 0.5), named_mean(MeanKind::harmonic, 0.3)}) {
    const auto s = equality_condition_suite(f, 60, 77);
    CHECK(s.passes);
    CHECK(s.inconsistent == 0);
    CHECK(s.max_equal_gap <= 1e-11);
    CHECK(s.equal_trials > 0);
    CHECK(s.distinct_trials > 0);
    if (s.distinct_trials > 0) CHECK(s.min_distinct_gap >= 1e-8);
    CHECK(s.crossing.equality_observed);
  }
}

TEST_CASE("property: larger tolerance never flips holds to false") {
  Rng rng(439);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pair = random_band_pair(rng, 3, PairMode::independent);
    const auto f = named_mean(MeanKind::geometric, 0.4);
    bool held = false;
    for (double tol : {0.0, 1e-14, 1e-10, 1e-6, 1e-2}) {
      const bool now = thm31_additive(f, pair.a, pair.b, tol).order.holds &&
                       thm39_eigen(f, pair.a, pair.b, tol).first.holds;
      if (held) CHECK(now);
      held = now;
    }
    bool s_held = false;
    const auto in = random_input(rng, 4);
    for (double tol : {0.0, 1e-14, 1e-10}) {
      const bool now = scalar_kyfan_suite(in, tol).all_hold;
      if (s_held) CHECK(now);
      s_held = now;
    }
  }
}
