#include "opmean/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {

double definite_threshold(const HermitianMatrix& h) {
  return kDefiniteTolerance * std::max(1.0, h.frobenius_norm());
}

}  // namespace

HermitianMatrix HermitianMatrix::from_matrix(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("Hermitian matrix must be square, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
  if (m.rows() < 1) {
    throw InvalidArgument("Hermitian matrix must have dimension >= 1");
  }
  if (!m.allFinite()) {
    throw InvalidArgument("matrix has non-finite entries");
  }
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * m.norm()) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: ||M - M*||_F = " << asym << " exceeds " << tol
        << " * ||M||_F";
    throw InvalidArgument(msg.str());
  }
  return from_hermitian_product(m);
}

HermitianMatrix HermitianMatrix::from_hermitian_product(const CMatrix& m) {
  CMatrix sym = (m + m.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < sym.rows(); ++i) sym(i, i) = Complex(sym(i, i).real(), 0.0);
  return HermitianMatrix(std::move(sym));
}

HermitianMatrix HermitianMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) throw DimensionMismatch("ragged row list");
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return from_matrix(m);
}

HermitianMatrix HermitianMatrix::identity(int n) {
  if (n < 1) throw InvalidArgument("identity dimension must be >= 1");
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("diagonal needs at least one entry");
  const auto n = static_cast<Eigen::Index>(values.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  require_same_dim(*this, other);
  return HermitianMatrix(m_ + other.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  require_same_dim(*this, other);
  return HermitianMatrix(m_ - other.m_);
}

HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(-m_); }

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * s); }

HermitianMatrix SpectralDecomposition::reconstruct() const {
  const CMatrix& v = eigenvectors;
  return HermitianMatrix::from_hermitian_product(v * eigenvalues.cast<Complex>().asDiagonal() *
                                                 v.adjoint());
}

std::vector<double> eigvals_desc(const HermitianMatrix& h) {
  const auto eig = eig_hermitian(h);
  return {eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size()};
}

HermitianMatrix matrix_function(const SpectralDecomposition& eig,
                                const std::function<double(double)>& phi) {
  const auto n = eig.eigenvalues.size();
  Eigen::VectorXcd values(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lambda = eig.eigenvalues[j];
    const double v = phi(lambda);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "matrix function is not finite at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    values[j] = v;
  }
  const CMatrix& vecs = eig.eigenvectors;
  return HermitianMatrix::from_hermitian_product(vecs * values.asDiagonal() * vecs.adjoint());
}

HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& phi) {
  return matrix_function(eig_hermitian(h), phi);
}

HermitianMatrix sqrt_psd(const HermitianMatrix& h) {
  const auto eig = eig_hermitian(h);
  const double min_eig = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (min_eig < -definite_threshold(h)) {
    throw NotPositiveDefinite("sqrt_psd: matrix is not positive semidefinite", min_eig);
  }
  return matrix_function(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

namespace {

SpectralDecomposition checked_pd_eig(const HermitianMatrix& h, const char* what) {
  auto eig = eig_hermitian(h);
  const double min_eig = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (!(min_eig > definite_threshold(h))) {
    throw NotPositiveDefinite(std::string(what) + ": matrix is not positive definite", min_eig);
  }
  return eig;
}

}  // namespace

void require_positive_definite(const HermitianMatrix& h, const char* what) {
  checked_pd_eig(h, what);
}

HermitianMatrix inv_pd(const HermitianMatrix& h) {
  return matrix_function(checked_pd_eig(h, "inv_pd"), [](double x) { return 1.0 / x; });
}

HermitianMatrix inv_sqrt_pd(const HermitianMatrix& h) {
  return matrix_function(checked_pd_eig(h, "inv_sqrt_pd"),
                         [](double x) { return 1.0 / std::sqrt(x); });
}

SqrtPair sqrt_and_inv_sqrt_pd(const HermitianMatrix& h) {
  const auto eig = checked_pd_eig(h, "sqrt_and_inv_sqrt_pd");
  return {matrix_function(eig, [](double x) { return std::sqrt(x); }),
          matrix_function(eig, [](double x) { return 1.0 / std::sqrt(x); })};
}

OrderComparison loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  require_same_dim(a, b);
  const auto eig = eig_hermitian(b - a);
  const Eigen::Index last = eig.eigenvalues.size() - 1;
  OrderComparison out;
  out.min_eigenvalue_of_difference = eig.eigenvalues[last];
  out.tolerance = tol;
  out.holds = out.min_eigenvalue_of_difference >= -tol;
  if (!out.holds) out.witness_vector = eig.eigenvectors.col(last);
  return out;
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

HermitianMatrix sandwich(const HermitianMatrix& s, const HermitianMatrix& m) {
  require_same_dim(s, m);
  return HermitianMatrix::from_hermitian_product(s.matrix() * m.matrix() * s.matrix());
}

HermitianMatrix congruence(const CMatrix& x, const HermitianMatrix& m) {
  if (x.rows() != x.cols() || x.cols() != m.dim()) {
    throw DimensionMismatch("congruence: incompatible dimensions");
  }
  return HermitianMatrix::from_hermitian_product(x * m.matrix() * x.adjoint());
}

double distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return (a.matrix() - b.matrix()).norm();
}

}  // namespace opmean
