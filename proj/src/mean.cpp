#include "opmean/mean.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "opmean/errors.hpp"

namespace opmean {

namespace {

// A sigma B = L f(L^{-1} B L^{-*}) L* for A = L L*. Triangular solves keep T
// accurate when A is ill-conditioned, where A^{-1/2} from an eigendecomposition does not.
HermitianMatrix congruence_mean(const HermitianMatrix& a, const HermitianMatrix& b,
                                const std::function<double(double)>& phi, const char* what) {
  require_same_dim(a, b);
  require_positive_definite(a, what);
  require_positive_definite(b, what);
  const Eigen::LLT<CMatrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(std::string(what) + ": Cholesky factorization of A failed",
                              std::numeric_limits<double>::quiet_NaN());
  }
  const CMatrix l = llt.matrixL();
  CMatrix t = llt.matrixL().solve(b.matrix());
  t = llt.matrixL().solve(t.adjoint().eval()).adjoint();
  const HermitianMatrix fx = matrix_function(HermitianMatrix::from_hermitian_product(t),
                                             [&phi](double x) { return phi(std::max(x, 0.0)); });
  return congruence(l, fx);
}

}  // namespace

HermitianMatrix evaluate_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                              const HermitianMatrix& b) {
  return congruence_mean(a, b, [&f](double x) { return f(x); }, "evaluate_mean");
}

HermitianMatrix adjoint_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                             const HermitianMatrix& b) {
  require_same_dim(a, b);
  return inv_pd(evaluate_mean(f, inv_pd(a), inv_pd(b)));
}

HermitianMatrix transpose_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                               const HermitianMatrix& b) {
  return evaluate_mean(f, b, a);
}

HermitianMatrix dual_mean(const RepresentingFunction& f, const HermitianMatrix& a,
                          const HermitianMatrix& b) {
  require_same_dim(a, b);
  return inv_pd(evaluate_mean(f, inv_pd(b), inv_pd(a)));
}

ComplementPair ComplementPair::make(const HermitianMatrix& a, double tol) {
  const auto values = eigvals_desc(a);
  if (!(values.back() > 0.0) || values.front() > 0.5 + tol) {
    throw PreconditionViolated("complement pair needs 0 < A <= I/2; spectrum is [" +
                               std::to_string(values.back()) + ", " +
                               std::to_string(values.front()) + "]");
  }
  return {a, HermitianMatrix::identity(a.dim()) - a};
}

HermitianMatrix weighted_arithmetic(const HermitianMatrix& a, const HermitianMatrix& b,
                                    double mu) {
  return a * (1.0 - mu) + b * mu;
}

HermitianMatrix weighted_harmonic(const HermitianMatrix& a, const HermitianMatrix& b, double mu) {
  return inv_pd(inv_pd(a) * (1.0 - mu) + inv_pd(b) * mu);
}

HermitianMatrix weighted_geometric(const HermitianMatrix& a, const HermitianMatrix& b, double mu) {
  return congruence_mean(a, b, [mu](double x) { return std::pow(x, mu); }, "weighted_geometric");
}

}  // namespace opmean
