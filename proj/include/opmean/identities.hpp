#pragma once

#include "opmean/hermitian.hpp"
#include "opmean/measure.hpp"
#include "opmean/representing_function.hpp"

namespace opmean {

inline constexpr double kIdentityTolerance = 1e-10;
/// Half-width of the window around t = 1 where g is bridged linearly.
inline constexpr double kGWindow = 1e-4;
/// Abscissa offset of the bridge end points g(1 -+ kGBridge).
inline constexpr double kGBridge = 1e-3;

struct IdentityResidual {
  HermitianMatrix lhs;
  HermitianMatrix rhs;
  double residual_fro = 0.0;
  double scale = 1.0;  // max(|lhs|_F, |rhs|_F, 1)
  bool passes = false;

  double relative() const noexcept { return residual_fro / scale; }
};

IdentityResidual make_residual(HermitianMatrix lhs, HermitianMatrix rhs,
                               double tol = kIdentityTolerance);

/// g(t) = -(f''(1)/2) (t - 1)^2 / (1 - mu + mu t - f(t)), g(1) = 1.
/// g'(1) and g''(1) are estimated numerically. Throws LinearMean for linear f.
RepresentingFunction g_from_f(const RepresentingFunction& f);

/// The companion mean tau of f in  A nabla_mu B - A sigma B = -(f''(1)/2)(A - B)(A tau B)^{-1}(A - B).
/// Uses the measure form when f carries a measure and g_from_f otherwise.
HermitianMatrix tau_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                         const HermitianMatrix& b);

/// A nabla_mu B - A sigma B  vs  -(f''(1)/2)(A - B)(A tau B)^{-1}(A - B).
/// For linear f the right side is 0 and the left side is reported as computed.
IdentityResidual thm24_residual(const RepresentingFunction& f, const HermitianMatrix& a,
                                const HermitianMatrix& b, double tol = kIdentityTolerance);

/// Geometric case. At mu = 1/2 tau is (nabla + sharp)/2; otherwise tau comes from g.
IdentityResidual cor_geometric_residual(double mu, const HermitianMatrix& a,
                                        const HermitianMatrix& b,
                                        double tol = kIdentityTolerance);

/// A nabla_mu B - A !_mu B = mu(1 - mu)(A - B)(B nabla_mu A)^{-1}(A - B).
IdentityResidual cor_harmonic_residual(double mu, const HermitianMatrix& a,
                                       const HermitianMatrix& b,
                                       double tol = kIdentityTolerance);

/// A nabla_{1-mu} B - A sigma^0 B = -(f''(1)/2)(A - B)(B tau A)^{-1}(A - B).
IdentityResidual transpose_identity_residual(const RepresentingFunction& f,
                                             const HermitianMatrix& a, const HermitianMatrix& b,
                                             double tol = kIdentityTolerance);

struct SharpConjugation {
  IdentityResidual adjoint_transpose;  // (A#B)^{-1}(A sigma* B)(A#B)^{-1} = (A sigma^0 B)^{-1}
  IdentityResidual harmonic_adjoint;   // ... (A nabla_{1-mu} B - A sigma^0 B) ... = (A !_mu B)^{-1} - (A sigma* B)^{-1}
  IdentityResidual transpose_arith;    // ... (A sigma* B - A !_mu B) ... = (A sigma^0 B)^{-1} - (A nabla_{1-mu} B)^{-1}
};
SharpConjugation sharp_conjugation_residuals(const RepresentingFunction& f,
                                             const HermitianMatrix& a, const HermitianMatrix& b,
                                             double tol = kIdentityTolerance);

/// (A#B)^{-1}(A tau B - A sigma B)(A#B)^{-1} = (A tau^perp B)^{-1} - (A sigma^perp B)^{-1}.
IdentityResidual dual_difference_residual(const RepresentingFunction& tau,
                                          const RepresentingFunction& sigma,
                                          const HermitianMatrix& a, const HermitianMatrix& b,
                                          double tol = kIdentityTolerance);

struct ScalarResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(1, |lhs|, |rhs|)
};

/// 1 - mu + mu t - f(t) = (t - 1)^2 int l (1 - l) (t nabla_l 1)^{-1} dm(l), m a probability measure.
ScalarResidual scalar_identity_a(const BorelMeasure& m, double t);

/// phi_l(1) + phi_l'(1)(t - 1) - phi_l(t) = l (1 - l)(t - 1)^2 (t nabla_l 1)^{-1}.
ScalarResidual scalar_identity_j(double lambda, double t);

}  // namespace opmean
