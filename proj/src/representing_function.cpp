#include "opmean/representing_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kRangeSlack = 1e-12;

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_nonnegative_argument(double t) {
  if (!(t >= 0.0)) {
    throw DomainError("representing functions are defined on [0, inf); got t = " +
                      format_number(t));
  }
}

using Eval = std::function<double(double)>;

// Evaluates a transform at t > 0 directly and at t = 0 by its value at the
// smallest normal double, which stands in for the right limit.
Eval with_right_limit(Eval g) {
  return [g = std::move(g)](double t) {
    require_nonnegative_argument(t);
    const double x = t == 0.0 ? std::numeric_limits<double>::min() : t;
    const double v = g(x);
    if (t == 0.0 && !std::isfinite(v)) {
      throw DomainError("right limit at t = 0 is not finite");
    }
    return v;
  };
}

}  // namespace

MonotoneFunction::MonotoneFunction(std::function<double(double)> eval, JetAtOne jet,
                                   std::string label)
    : eval_(std::make_shared<const std::function<double(double)>>(std::move(eval))),
      jet_(jet),
      label_(std::move(label)) {}

double MonotoneFunction::operator()(double t) const {
  require_nonnegative_argument(t);
  return (*eval_)(t);
}

MonotoneFunction scaled_power(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent >= 0.0 && exponent <= 1.0)) {
    throw InvalidArgument("scaled_power needs scale > 0 and exponent in [0, 1]");
  }
  const double c = std::pow(scale, exponent);
  JetAtOne jet{c, exponent * c, exponent * (exponent - 1.0) * c};
  return MonotoneFunction([scale, exponent](double t) { return std::pow(scale * t, exponent); },
                          jet,
                          "(" + format_number(scale) + "t)^" + format_number(exponent));
}

RepresentingFunction RepresentingFunction::create(std::function<double(double)> eval, double mu,
                                                  double second_at_one, std::string label,
                                                  std::shared_ptr<const BorelMeasure> measure) {
  const double at_one = eval(1.0);
  if (!(std::abs(at_one - 1.0) <= kNormalizationTolerance)) {
    throw InvalidArgument(label + ": representing function must satisfy f(1) = 1, got " +
                          format_number(at_one));
  }
  if (!(mu >= -kRangeSlack && mu <= 1.0 + kRangeSlack)) {
    throw InvalidArgument(label + ": f'(1) must lie in [0, 1], got " + format_number(mu));
  }
  if (!(second_at_one <= kRangeSlack)) {
    throw InvalidArgument(label + ": f''(1) must be <= 0, got " + format_number(second_at_one));
  }
  // Necessary condition for operator monotonicity: nondecreasing on a log grid.
  double prev = eval(1e-3);
  for (int k = 1; k <= 24; ++k) {
    const double t = std::pow(10.0, -3.0 + 6.0 * k / 24.0);
    const double v = eval(t);
    if (!std::isfinite(v) || v < 0.0 || v < prev - 1e-12 * std::abs(prev)) {
      throw InvalidArgument(label + ": function is not nonnegative and nondecreasing near t = " +
                            format_number(t));
    }
    prev = v;
  }

  RepresentingFunction f;
  f.eval_ = std::make_shared<const std::function<double(double)>>(std::move(eval));
  f.mu_ = std::clamp(mu, 0.0, 1.0);
  f.second_ = std::min(second_at_one, 0.0);
  f.linear_ = std::abs(f.second_) <= kLinearCurvatureTolerance;
  if (f.linear_) f.second_ = 0.0;
  f.label_ = std::move(label);
  f.measure_ = std::move(measure);
  return f;
}

double RepresentingFunction::operator()(double t) const {
  require_nonnegative_argument(t);
  return (*eval_)(t);
}

MonotoneFunction RepresentingFunction::as_monotone() const {
  auto eval = eval_;
  return MonotoneFunction([eval](double t) { return (*eval)(t); }, JetAtOne{1.0, mu_, second_},
                          label_);
}

const char* to_string(MeanKind kind) {
  switch (kind) {
    case MeanKind::arithmetic:
      return "arithmetic";
    case MeanKind::geometric:
      return "geometric";
    case MeanKind::harmonic:
      return "harmonic";
  }
  return "?";
}

RepresentingFunction named_mean(MeanKind kind, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw InvalidArgument(std::string(to_string(kind)) + " mean weight must lie in [0, 1], got " +
                          format_number(mu));
  }
  const std::string label = std::string(to_string(kind)) + ":" + format_number(mu);
  switch (kind) {
    case MeanKind::arithmetic:
      return RepresentingFunction::create([mu](double t) { return 1.0 - mu + mu * t; }, mu, 0.0,
                                          label);
    case MeanKind::geometric:
      return RepresentingFunction::create([mu](double t) { return std::pow(t, mu); }, mu,
                                          mu * (mu - 1.0), label);
    case MeanKind::harmonic:
      return RepresentingFunction::create(
          [mu](double t) { return mu == 0.0 ? 1.0 : t / ((1.0 - mu) * t + mu); }, mu,
          -2.0 * mu * (1.0 - mu), label);
  }
  throw InvalidArgument("unknown mean kind");
}

// Derivative data below follows from differentiating the transform twice at t = 1
// with f(1) = 1, f'(1) = mu, f''(1) = c:
//   adjoint   f(1/t)^{-1}: slope mu,      curvature -c - 2 mu (1 - mu)
//   transpose t f(1/t):    slope 1 - mu,  curvature  c
//   dual      t / f(t):    slope 1 - mu,  curvature -c - 2 mu (1 - mu)

RepresentingFunction adjoint(const RepresentingFunction& f) {
  const double mu = f.mu();
  return RepresentingFunction::create(
      with_right_limit([f](double t) { return 1.0 / f(1.0 / t); }), mu,
      -f.second_at_one() - 2.0 * mu * (1.0 - mu), "adjoint(" + f.label() + ")");
}

RepresentingFunction transpose(const RepresentingFunction& f) {
  return RepresentingFunction::create(with_right_limit([f](double t) { return t * f(1.0 / t); }),
                                      1.0 - f.mu(), f.second_at_one(),
                                      "transpose(" + f.label() + ")");
}

RepresentingFunction dual(const RepresentingFunction& f) {
  const double mu = f.mu();
  return RepresentingFunction::create(with_right_limit([f](double t) { return t / f(t); }),
                                      1.0 - mu, -f.second_at_one() - 2.0 * mu * (1.0 - mu),
                                      "dual(" + f.label() + ")");
}

// With f(1) = a and f'(1) = b: B(f)(1) = 1, B(f)'(1) = 1 / (1 + a) and, since
// (t + f) - (1 + f) vanishes at t = 1, B(f)''(1) = -2 b / (1 + a)^2.
RepresentingFunction barbour(const MonotoneFunction& f) {
  const double a = f.jet().value;
  const double b = f.jet().slope;
  return RepresentingFunction::create(
      [f](double t) {
        const double v = f(t);
        return (t + v) / (1.0 + v);
      },
      1.0 / (1.0 + a), -2.0 * b / ((1.0 + a) * (1.0 + a)), "barbour(" + f.label() + ")");
}

RepresentingFunction barbour(const RepresentingFunction& f) { return barbour(f.as_monotone()); }

}  // namespace opmean
