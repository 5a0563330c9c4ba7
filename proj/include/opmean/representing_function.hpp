#pragma once

#include <functional>
#include <memory>
#include <string>

namespace opmean {

class BorelMeasure;

/// f(1), f'(1), f''(1).
struct JetAtOne {
  double value = 1.0;
  double slope = 0.0;
  double curvature = 0.0;
};

/// A nonnegative operator monotone function on [0, inf) together with its
/// 2-jet at t = 1. Not necessarily normalized; used as input to the Barbour
/// transform, e.g. t -> (2t)^r.
class MonotoneFunction {
 public:
  MonotoneFunction(std::function<double(double)> eval, JetAtOne jet, std::string label);

  double operator()(double t) const;
  const JetAtOne& jet() const noexcept { return jet_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::shared_ptr<const std::function<double(double)>> eval_;
  JetAtOne jet_;
  std::string label_;
};

/// t -> (scale * t)^exponent, operator monotone for scale > 0 and 0 <= exponent <= 1.
MonotoneFunction scaled_power(double scale, double exponent);

/// Representing function f of a Kubo-Ando mean: operator monotone on [0, inf),
/// f(1) = 1, mu = f'(1) in [0, 1], f''(1) <= 0. Immutable; copies share the
/// underlying closure.
class RepresentingFunction {
 public:
  /// Validates the normalization, the derivative ranges and monotonicity on a
  /// log grid; throws InvalidArgument on violation.
  static RepresentingFunction create(std::function<double(double)> eval, double mu,
                                     double second_at_one, std::string label,
                                     std::shared_ptr<const BorelMeasure> measure = nullptr);

  /// Evaluates f(t) for t >= 0. At t = 0 the value is the right limit.
  double operator()(double t) const;

  double mu() const noexcept { return mu_; }
  double second_at_one() const noexcept { return second_; }
  bool is_linear() const noexcept { return linear_; }
  const std::string& label() const noexcept { return label_; }
  /// The associated Borel measure when this function was built from one.
  const std::shared_ptr<const BorelMeasure>& measure() const noexcept { return measure_; }

  MonotoneFunction as_monotone() const;

 private:
  RepresentingFunction() = default;

  std::shared_ptr<const std::function<double(double)>> eval_;
  double mu_ = 0.0;
  double second_ = 0.0;
  bool linear_ = true;
  std::string label_;
  std::shared_ptr<const BorelMeasure> measure_;
};

/// |f''(1)| at or below this is treated as a linear representing function.
inline constexpr double kLinearCurvatureTolerance = 1e-14;

enum class MeanKind { arithmetic, geometric, harmonic };

/// 1 - mu + mu t, t^mu, or (1 - mu + mu / t)^{-1}.
RepresentingFunction named_mean(MeanKind kind, double mu);
const char* to_string(MeanKind kind);

/// t -> f(1/t)^{-1}.
RepresentingFunction adjoint(const RepresentingFunction& f);
/// t -> t f(1/t).
RepresentingFunction transpose(const RepresentingFunction& f);
/// t -> t / f(t).
RepresentingFunction dual(const RepresentingFunction& f);

/// t -> (t + f(t)) / (1 + f(t)). The result always satisfies B(f)(1) = 1.
RepresentingFunction barbour(const MonotoneFunction& f);
RepresentingFunction barbour(const RepresentingFunction& f);

}  // namespace opmean
