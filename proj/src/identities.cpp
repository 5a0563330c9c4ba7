#include "opmean/identities.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "opmean/errors.hpp"
#include "opmean/mean.hpp"

namespace opmean {

namespace {

HermitianMatrix zero_like(const HermitianMatrix& a) {
  return HermitianMatrix::from_hermitian_product(CMatrix::Zero(a.dim(), a.dim()));
}

// c (A - B) X^{-1} (A - B)
HermitianMatrix quadratic_term(double c, const HermitianMatrix& a, const HermitianMatrix& b,
                               const HermitianMatrix& x) {
  const HermitianMatrix d = a - b;
  return congruence(d.matrix(), inv_pd(x)) * c;
}

// The printed formula for g away from t = 1.
double g_formula(const RepresentingFunction& f, double t) {
  const double mu = f.mu();
  const double d = t - 1.0;
  return -0.5 * f.second_at_one() * d * d / (1.0 - mu + mu * t - f(t));
}

}  // namespace

IdentityResidual make_residual(HermitianMatrix lhs, HermitianMatrix rhs, double tol) {
  require_same_dim(lhs, rhs);
  IdentityResidual r{std::move(lhs), std::move(rhs)};
  r.residual_fro = (r.lhs.matrix() - r.rhs.matrix()).norm();
  r.scale = std::max({r.lhs.frobenius_norm(), r.rhs.frobenius_norm(), 1.0});
  r.passes = r.residual_fro <= tol * r.scale;
  return r;
}

RepresentingFunction g_from_f(const RepresentingFunction& f) {
  if (f.is_linear()) {
    throw LinearMean("g_from_f: f is linear, the companion mean is not unique");
  }
  const double left = g_formula(f, 1.0 - kGBridge);
  const double right = g_formula(f, 1.0 + kGBridge);
  auto g = [f, left, right](double t) {
    const double d = t - 1.0;
    if (std::abs(d) >= kGWindow) return g_formula(f, t);
    return 1.0 + (d < 0.0 ? (1.0 - left) * d : (right - 1.0) * d) / kGBridge;
  };
  // Richardson-extrapolated central differences on the printed formula.
  auto first = [&](double h) { return (g_formula(f, 1.0 + h) - g_formula(f, 1.0 - h)) / (2.0 * h); };
  auto second = [&](double h) {
    return (g_formula(f, 1.0 + h) - 2.0 + g_formula(f, 1.0 - h)) / (h * h);
  };
  const double h = 2e-2;
  const double slope = (4.0 * first(h / 2.0) - first(h)) / 3.0;
  double curvature = (4.0 * second(h / 2.0) - second(h)) / 3.0;
  if (std::abs(curvature) < 1e-8) curvature = 0.0;
  curvature = std::min(curvature, 0.0);
  return RepresentingFunction::create(g, std::clamp(slope, 0.0, 1.0), curvature,
                                      "g[" + f.label() + "]");
}

HermitianMatrix tau_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                         const HermitianMatrix& b) {
  if (f.measure()) return tau_measure_form(f, a, b);
  return evaluate_mean(g_from_f(f), a, b);
}

IdentityResidual thm24_residual(const RepresentingFunction& f, const HermitianMatrix& a,
                                const HermitianMatrix& b, double tol) {
  HermitianMatrix lhs = weighted_arithmetic(a, b, f.mu()) - evaluate_mean(f, a, b);
  if (f.is_linear()) return make_residual(std::move(lhs), zero_like(a), tol);
  return make_residual(std::move(lhs),
                       quadratic_term(-0.5 * f.second_at_one(), a, b, tau_mean(f, a, b)), tol);
}

IdentityResidual cor_geometric_residual(double mu, const HermitianMatrix& a,
                                        const HermitianMatrix& b, double tol) {
  HermitianMatrix lhs = weighted_arithmetic(a, b, mu) - weighted_geometric(a, b, mu);
  if (mu == 0.0 || mu == 1.0) return make_residual(std::move(lhs), zero_like(a), tol);
  HermitianMatrix tau =
      mu == 0.5 ? (weighted_arithmetic(a, b, 0.5) + weighted_geometric(a, b, 0.5)) * 0.5
                : evaluate_mean(g_from_f(named_mean(MeanKind::geometric, mu)), a, b);
  return make_residual(std::move(lhs), quadratic_term(0.5 * mu * (1.0 - mu), a, b, tau), tol);
}

IdentityResidual cor_harmonic_residual(double mu, const HermitianMatrix& a,
                                       const HermitianMatrix& b, double tol) {
  HermitianMatrix lhs = weighted_arithmetic(a, b, mu) - weighted_harmonic(a, b, mu);
  return make_residual(std::move(lhs),
                       quadratic_term(mu * (1.0 - mu), a, b, weighted_arithmetic(b, a, mu)), tol);
}

IdentityResidual transpose_identity_residual(const RepresentingFunction& f,
                                             const HermitianMatrix& a, const HermitianMatrix& b,
                                             double tol) {
  HermitianMatrix lhs = weighted_arithmetic(a, b, 1.0 - f.mu()) - transpose_mean(f, a, b);
  if (f.is_linear()) return make_residual(std::move(lhs), zero_like(a), tol);
  return make_residual(std::move(lhs),
                       quadratic_term(-0.5 * f.second_at_one(), a, b, tau_mean(f, b, a)), tol);
}

SharpConjugation sharp_conjugation_residuals(const RepresentingFunction& f,
                                             const HermitianMatrix& a, const HermitianMatrix& b,
                                             double tol) {
  const double mu = f.mu();
  const HermitianMatrix s_inv = inv_pd(weighted_geometric(a, b, 0.5));
  const HermitianMatrix adj = adjoint_mean(f, a, b);
  const HermitianMatrix tr = transpose_mean(f, a, b);
  const HermitianMatrix harm = weighted_harmonic(a, b, mu);
  const HermitianMatrix arith = weighted_arithmetic(a, b, 1.0 - mu);
  return {
      make_residual(sandwich(s_inv, adj), inv_pd(tr), tol),
      make_residual(sandwich(s_inv, arith - tr), inv_pd(harm) - inv_pd(adj), tol),
      make_residual(sandwich(s_inv, adj - harm), inv_pd(tr) - inv_pd(arith), tol),
  };
}

IdentityResidual dual_difference_residual(const RepresentingFunction& tau,
                                          const RepresentingFunction& sigma,
                                          const HermitianMatrix& a, const HermitianMatrix& b,
                                          double tol) {
  const HermitianMatrix s_inv = inv_pd(weighted_geometric(a, b, 0.5));
  return make_residual(sandwich(s_inv, evaluate_mean(tau, a, b) - evaluate_mean(sigma, a, b)),
                       inv_pd(dual_mean(tau, a, b)) - inv_pd(dual_mean(sigma, a, b)), tol);
}

ScalarResidual scalar_identity_a(const BorelMeasure& m, double t) {
  const double mass = m.total_mass();
  const double first = m.integrate([](double l, double) { return l; });
  ScalarResidual r;
  r.lhs = (mass - first) + first * t - m.connection_value(t);
  const double d = t - 1.0;
  r.rhs = d * d * m.integrate_refined([t](double l, double c) {
    return l * c / (c * t + l);
  }, {t, t});
  r.residual = std::abs(r.lhs - r.rhs) / std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  return r;
}

ScalarResidual scalar_identity_j(double lambda, double t) {
  const double c = 1.0 - lambda;
  const double phi = lambda == 0.0 ? 1.0 : t / (c * t + lambda);
  const double d = t - 1.0;
  ScalarResidual r;
  r.lhs = 1.0 + lambda * d - phi;
  r.rhs = lambda * c * d * d / (c * t + lambda);
  r.residual = std::abs(r.lhs - r.rhs) / std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  return r;
}

}  // namespace opmean
