#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "opmean/hermitian.hpp"
#include "opmean/quadrature.hpp"
#include "opmean/representing_function.hpp"

namespace opmean {

inline constexpr int kDefaultQuadratureNodes = 64;
/// Upper end of the node ladder used by the operator-valued integrals.
inline constexpr int kMaxQuadratureNodes = 8192;
/// Successive-level agreement required by the operator-valued integrals.
inline constexpr double kLadderTolerance = 1e-11;
/// Disagreement between n and 2n nodes that triggers a quadrature warning.
inline constexpr double kSelfCheckTolerance = 1e-9;
inline constexpr double kProbabilityTolerance = 1e-10;

struct Atom {
  double location = 0.0;  // in [0, 1]
  double weight = 0.0;    // > 0
};

/// weight * sin(mu pi)/pi * lambda^{mu-1} (1-lambda)^{-mu}; the measure of t^mu when weight = 1.
struct GeometricDensity {
  double mu = 0.5;
  double weight = 1.0;
};

/// Piecewise-linear density through values[k] at lambda = k / (values.size() - 1).
struct TableDensity {
  std::vector<double> values;
};

/// Arbitrary nonnegative density on (0, 1), integrated with Gauss-Legendre.
struct FunctionDensity {
  std::function<double(double)> density;
  std::string label = "user";
};

using Density = std::variant<GeometricDensity, TableDensity, FunctionDensity>;

/// Range [lo, hi] of the ratio t seen by a kernel built from t nabla_l 1, or of the
/// spectrum of A^{-1/2} B A^{-1/2} for operator kernels. Such kernels have poles at
/// distance lo / (1 - lo) below 0 and 1 / (hi - 1) above 1; Legendre panels are
/// graded toward them. The default range means no grading.
struct KernelRange {
  double lo = 1.0;
  double hi = 1.0;
};

/// Finite Borel measure on [0, 1]: atoms plus an optional absolutely continuous part.
/// Immutable; quadrature tables are shared between copies and built at most once.
class BorelMeasure {
 public:
  BorelMeasure(std::vector<Atom> atoms, std::optional<Density> density,
               int nodes = kDefaultQuadratureNodes);

  static BorelMeasure dirac(double location, double weight = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<Density>& density() const noexcept { return density_; }
  int nodes() const noexcept { return nodes_; }
  double total_mass() const noexcept { return total_mass_; }
  bool is_probability() const noexcept;
  /// Set when the n vs 2n self-check of a Legendre-integrated density disagreed.
  const std::optional<std::string>& quadrature_warning() const noexcept { return warning_; }

  /// int kernel(lambda, 1 - lambda) dm(lambda) with the fixed rule of nodes() points.
  double integrate(const std::function<double(double, double)>& kernel,
                   KernelRange range = {}) const;

  /// Same integral, refining the density rule along the ladder until two
  /// levels agree to kLadderTolerance (NumericalFailure otherwise).
  double integrate_refined(const std::function<double(double, double)>& kernel,
                           KernelRange range = {}) const;

  /// Scalar connection function t -> int 1 !_lambda t dm(lambda).
  double connection_value(double t) const;

  /// Operator-valued integral of kernel(lambda, 1 - lambda): atoms exactly plus
  /// integrate_density_operator for the continuous part.
  HermitianMatrix integrate_operator(
      const std::function<HermitianMatrix(double, double)>& kernel, KernelRange range = {}) const;

  /// Continuous part only. Geometric densities use the Gauss-Jacobi rule on [0, 1];
  /// other densities use Gauss-Legendre on panels split at table knots and graded
  /// toward the poles implied by range. Refines the rule (nodes, 2 nodes, ...) until two
  /// successive levels agree to kLadderTolerance; NumericalFailure if the
  /// ladder runs out. Requires a density.
  HermitianMatrix integrate_density_operator(
      const std::function<HermitianMatrix(double, double)>& kernel, KernelRange range = {}) const;

  /// density(lambda) / rule weight(lambda): constant for the geometric density
  /// (its singular factor is the Gauss-Jacobi weight), the density itself otherwise.
  double density_factor(double lambda) const;

 private:
  std::vector<Atom> atoms_;
  std::optional<Density> density_;
  int nodes_;
  double total_mass_ = 0.0;
  const RuleLadder& ladder() const { return *ladder_; }
  // Calls visit(lambda, 1 - lambda, weight * density) for every node of the density rule.
  void for_each_density_node(int level, KernelRange range,
                             const std::function<void(double, double, double)>& visit) const;

  std::shared_ptr<const RuleLadder> ladder_;
  std::optional<std::string> warning_;
};

/// Moments used as derivative data: f'(1) = int lambda dm, f''(1) = -2 int lambda (1 - lambda) dm.
MonotoneFunction connection_function(const BorelMeasure& m);

/// Representing function of the mean with associated probability measure m.
/// f(t) = sum_i w_i phi_{l_i}(t) + int phi_l(t) density(l) dl, phi_l(t) = t / ((1 - l) t + l).
RepresentingFunction f_from_measure(const BorelMeasure& m);
RepresentingFunction f_from_measure(std::shared_ptr<const BorelMeasure> m);

/// Measure of the weighted geometric mean, 0 < mu < 1.
BorelMeasure geometric_measure(double mu, int nodes = kDefaultQuadratureNodes);

/// A sigma B = int A !_l B dm(l), integrated directly in operator form.
HermitianMatrix mean_from_measure(const BorelMeasure& m, const HermitianMatrix& a,
                                  const HermitianMatrix& b);

/// A tau B = -(f''(1)/2) (int l (1 - l) (B nabla_l A)^{-1} dm(l))^{-1}.
/// Requires f to carry its measure and to be non-linear (LinearMean otherwise).
HermitianMatrix tau_measure_form(const RepresentingFunction& f, const HermitianMatrix& a,
                                 const HermitianMatrix& b);

// Measure file format:
// {"atoms":[{"lambda":0.5,"w":1.0}],
//  "density":{"kind":"geometric","mu":0.3[,"weight":1]} | {"kind":"table","values":[...]},
//  "nodes":64}
BorelMeasure measure_from_json(const nlohmann::json& j);
BorelMeasure read_measure_file(const std::string& path);

}  // namespace opmean
