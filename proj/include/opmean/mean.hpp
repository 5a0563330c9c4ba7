#pragma once

#include "opmean/hermitian.hpp"
#include "opmean/representing_function.hpp"

namespace opmean {

/// A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}. A and B must be positive
/// definite and of equal dimension; f is applied to A^{-1/2} B A^{-1/2}, never
/// to the swapped congruence. Computed as L f(L^{-1} B L^{-*}) L* with A = L L*.
HermitianMatrix evaluate_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                              const HermitianMatrix& b);

/// A sigma* B = (A^{-1} sigma B^{-1})^{-1}.
HermitianMatrix adjoint_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                             const HermitianMatrix& b);
/// A sigma^0 B = B sigma A.
HermitianMatrix transpose_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                               const HermitianMatrix& b);
/// A sigma^perp B = (B^{-1} sigma A^{-1})^{-1}.
HermitianMatrix dual_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                          const HermitianMatrix& b);

/// A together with A' = I - A. Requires 0 < A <= I/2 (PreconditionViolated otherwise).
struct ComplementPair {
  HermitianMatrix a;
  HermitianMatrix a_prime;

  static ComplementPair make(const HermitianMatrix& a, double tol = kDefiniteTolerance);
};

// Closed forms of the three weighted means.
HermitianMatrix weighted_arithmetic(const HermitianMatrix& a, const HermitianMatrix& b, double mu);
HermitianMatrix weighted_harmonic(const HermitianMatrix& a, const HermitianMatrix& b, double mu);
HermitianMatrix weighted_geometric(const HermitianMatrix& a, const HermitianMatrix& b, double mu);

}  // namespace opmean
