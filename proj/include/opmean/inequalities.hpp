#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opmean/hermitian.hpp"
#include "opmean/mean.hpp"
#include "opmean/random_matrices.hpp"
#include "opmean/representing_function.hpp"

namespace opmean {

inline constexpr double kLoewnerTolerance = 1e-10;
inline constexpr double kEigenTolerance = 1e-9;
inline constexpr double kScalarTolerance = 1e-14;

// ---------------------------------------------------------------- scalar classes

struct ScalarMeansInput {
  std::vector<double> xs;       // each in (0, 1/2]
  std::vector<double> weights;  // nonnegative, summing to 1

  /// Throws InvalidArgument when the invariants fail.
  void validate() const;
};

struct ScalarCheck {
  const char* id;
  double lhs = 0.0;  // primed side
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;
};

struct ScalarMeans {
  double a = 0.0, g = 0.0, h = 0.0;
  double a_prime = 0.0, g_prime = 0.0, h_prime = 0.0;
};

ScalarMeans scalar_means(const ScalarMeansInput& input);

/// The eight scalar inequalities between means of x and of 1 - x, in order:
/// additive A-G and A-H; reciprocal 1/G-1/A, 1/H-1/G, 1/H-1/A; multiplicative A/G, G/H, A/H.
/// G-H is left out: it is not comparable with G'-H' in general.
struct ScalarSuite {
  ScalarMeans means;
  std::array<ScalarCheck, 8> checks;
  bool all_hold = false;
  double min_slack = 0.0;
  double max_abs_slack = 0.0;
};
ScalarSuite scalar_kyfan_suite(const ScalarMeansInput& input, double tol = kScalarTolerance);

/// a v^{a-1}(u - v) <= u^a - v^a <= a u^{a-1}(u - v) for u, v > 0, a < 0.
struct Lemma34Result {
  double lower = 0.0, middle = 0.0, upper = 0.0;
  double slack_lower = 0.0;  // middle - lower
  double slack_upper = 0.0;  // upper - middle
  bool holds = false;
  bool equality = false;  // both slacks within the equality tolerance
};
Lemma34Result lemma34_check(double u, double v, double a, double tol = kScalarTolerance);

// ---------------------------------------------------------------- equality verdicts

enum class Verdict { equality_consistent, strict_consistent, inconsistent };
const char* to_string(Verdict v);

struct EqualityThresholds {
  double same_distance = 1e-14;     // |A - B|_F at or below: A = B
  double equal_gap = 1e-11;         // A = B must give a gap at or below this
  double distinct_distance = 0.01;  // |A - B|_F at or above: A != B
  double strict_gap = 1e-8;         // A != B must give a gap at or above this
};

struct EqualityVerdict {
  double input_distance = 0.0;
  double inequality_gap = 0.0;
  Verdict verdict = Verdict::inconsistent;
};

/// With strict = false (linear f or crossing means) equality is allowed for A != B.
EqualityVerdict classify_equality(double distance, double gap, const EqualityThresholds& t,
                                  bool strict = true);

// ---------------------------------------------------------------- operator inequalities

struct Thm31Result {
  HermitianMatrix lhs;  // A' nabla_mu B' - A' sigma B'
  HermitianMatrix rhs;  // A nabla_mu B - A sigma B
  OrderComparison order;
  EqualityVerdict equality;
};

/// Requires 0 < A, B <= I/2 (PreconditionViolated otherwise).
Thm31Result thm31_additive(const RepresentingFunction& f, const HermitianMatrix& a,
                           const HermitianMatrix& b, double tol = kLoewnerTolerance,
                           const EqualityThresholds& thresholds = {});

/// (T^{-1}(T - S)T^{-1} <= S^{-1} - T^{-1}) and (S^{-1} - T^{-1} <= S^{-1}(T - S)S^{-1}),
/// S = A sigma B, T = A tau B. gap is the smaller Frobenius norm of the two differences.
struct SandwichResult {
  OrderComparison left;
  OrderComparison right;
  double left_gap = 0.0;
  double right_gap = 0.0;
  double gap = 0.0;
};
SandwichResult prop35_sandwich(const RepresentingFunction& sigma, const RepresentingFunction& tau,
                               const HermitianMatrix& a, const HermitianMatrix& b,
                               double tol = kLoewnerTolerance);
/// tau = nabla_mu with mu = f'(1).
SandwichResult f22_sandwich(const RepresentingFunction& f, const HermitianMatrix& a,
                            const HermitianMatrix& b, double tol = kLoewnerTolerance);

struct EigSeqComparison {
  std::vector<double> lhs_eigs;  // decreasing
  std::vector<double> rhs_eigs;  // decreasing
  double max_violation = 0.0;    // max_j lhs_j - rhs_j
  double max_gap = 0.0;          // max_j |rhs_j - lhs_j|
  bool holds = false;
};
EigSeqComparison compare_eigenvalues(const HermitianMatrix& lhs, const HermitianMatrix& rhs,
                                     double tol = kEigenTolerance);

/// Reciprocal-additive eigenvalue systems:
/// first:  (X sigma Y)^{-1} - (X nabla_mu Y)^{-1}
/// second: (X !_mu Y)^{-1} - (X sigma* Y)^{-1}
/// each evaluated on (A', B') (left) and (A, B) (right).
struct EigPair {
  EigSeqComparison first;
  EigSeqComparison second;
};
EigPair thm39_eigen(const RepresentingFunction& f, const HermitianMatrix& a,
                    const HermitianMatrix& b, double tol = kEigenTolerance);

/// Multiplicative eigenvalue systems:
/// first:  (X sigma Y)^{-1/2}(X nabla_mu Y)(X sigma Y)^{-1/2}
/// second: (X !_mu Y)^{-1/2}(X sigma* Y)(X !_mu Y)^{-1/2}
EigPair thm311_eigen(const RepresentingFunction& f, const HermitianMatrix& a,
                     const HermitianMatrix& b, double tol = kEigenTolerance);

// ---------------------------------------------------------------- the 2x2 counterexample

struct Example33Display {
  std::string name;
  HermitianMatrix computed;
  std::array<double, 3> printed;  // (1,1), (1,2), (2,2)
  double max_entry_error = 0.0;
  double min_eigenvalue = 0.0;
  bool matches = false;     // max_entry_error <= 5e-6
  bool indefinite = false;  // min_eigenvalue < -1e-6
};

/// One operator-order version of a scalar class on the example data: its Loewner
/// form is expected to fail, its eigenvalue form to hold.
struct NegativeControl {
  std::string id;
  OrderComparison loewner;
  EigSeqComparison eigen;
  bool behaves_as_expected = false;
};

struct Example33Report {
  HermitianMatrix a;
  HermitianMatrix b;
  double mu = 0.5;
  bool b_leq_a = false;
  bool a_leq_half = false;
  std::vector<Example33Display> displays;  // three entries
  std::vector<NegativeControl> controls;
  bool passes = false;
};

inline constexpr double kExample33EntryTolerance = 5e-6;
inline constexpr double kExample33IndefiniteBound = -1e-6;

Example33Report reproduce_example33();

// ---------------------------------------------------------------- equality conditions

/// Two different means crossing at t0 != 1: A = t0^{-1} I, B = I gives
/// equality in the sandwich although A != B.
struct CrossingCase {
  double r = 0.0;
  double s = 0.0;
  double t0 = 0.5;
  double f_at_t0 = 0.0;
  double g_at_t0 = 0.0;
  double distance = 0.0;
  SandwichResult sandwich;
  EqualityVerdict verdict;  // classified with strict = false
  bool equality_observed = false;
};
CrossingCase remark37_crossing(double r, double s, int dim = 2,
                               const EqualityThresholds& thresholds = {});

struct EqualitySuiteSummary {
  int equal_trials = 0;
  int distinct_trials = 0;
  int intermediate_trials = 0;
  double max_equal_gap = 0.0;               // over A = B trials
  double min_distinct_gap = 0.0;            // over |A - B| >= distinct_distance trials
  int inconsistent = 0;
  CrossingCase crossing;
  bool passes = false;
};

/// (i) A = B trials, (ii) band pairs with A != B, (iii) the crossing construction.
/// The gap is the additive complement inequality's |rhs - lhs|_F.
EqualitySuiteSummary equality_condition_suite(const RepresentingFunction& f, int trials,
                                              std::uint64_t seed, int max_dim = 8,
                                              const EqualityThresholds& thresholds = {});

}  // namespace opmean
