#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace opmean {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
inline constexpr double kSymmetryTolerance = 1e-13;
/// Relative eigenvalue floor used by the PSD / PD predicates.
inline constexpr double kDefiniteTolerance = 1e-12;
/// Jacobi stopping rule: off-diagonal Frobenius norm below this times the input norm.
inline constexpr double kJacobiTolerance = 1e-13;
inline constexpr int kJacobiMaxSweeps = 40;

/// Dense complex Hermitian matrix. Immutable value type; every instance is
/// exactly Hermitian (real diagonal, conjugate-symmetric off-diagonal).
class HermitianMatrix {
 public:
  /// Validates ||M - M*||_F <= tol * ||M||_F, then stores (M + M*) / 2.
  static HermitianMatrix from_matrix(const CMatrix& m, double tol = kSymmetryTolerance);
  /// Symmetrizes without validation; for products that are Hermitian in exact arithmetic.
  static HermitianMatrix from_hermitian_product(const CMatrix& m);
  static HermitianMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix diagonal(std::initializer_list<double> values);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator-() const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues in decreasing order.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  CMatrix eigenvectors;  // column j pairs with eigenvalues[j]
  int sweeps = 0;

  HermitianMatrix reconstruct() const;
};

/// Result of testing A <= B in the Loewner order, i.e. B - A >= -tol.
struct OrderComparison {
  bool holds = false;
  double min_eigenvalue_of_difference = 0.0;
  double tolerance = 0.0;
  std::optional<CVector> witness_vector;  // set when holds == false
};

/// Cyclic complex Jacobi. Throws NumericalFailure after kJacobiMaxSweeps sweeps.
SpectralDecomposition eig_hermitian(const HermitianMatrix& h);

std::vector<double> eigvals_desc(const HermitianMatrix& h);

/// V diag(phi(lambda)) V*. Throws DomainError if phi is non-finite at an eigenvalue.
HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& phi);
HermitianMatrix matrix_function(const SpectralDecomposition& eig,
                                const std::function<double(double)>& phi);

HermitianMatrix sqrt_psd(const HermitianMatrix& h);
HermitianMatrix inv_pd(const HermitianMatrix& h);
HermitianMatrix inv_sqrt_pd(const HermitianMatrix& h);

/// Square root and inverse square root of a positive definite matrix from a single eigensolve.
struct SqrtPair {
  HermitianMatrix root;
  HermitianMatrix inverse_root;
};
SqrtPair sqrt_and_inv_sqrt_pd(const HermitianMatrix& h);

/// Minimum eigenvalue below -kDefiniteTolerance * max(1, ||h||_F) raises NotPositiveDefinite.
void require_positive_definite(const HermitianMatrix& h, const char* what);

OrderComparison loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b);

/// s m s for Hermitian s.
HermitianMatrix sandwich(const HermitianMatrix& s, const HermitianMatrix& m);
/// x m x* for arbitrary square x.
HermitianMatrix congruence(const CMatrix& x, const HermitianMatrix& m);

/// Frobenius norm of a - b.
double distance(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace opmean
