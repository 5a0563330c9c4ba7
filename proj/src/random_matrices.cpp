#include "opmean/random_matrices.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "opmean/errors.hpp"

namespace opmean {

namespace {

CMatrix gaussian_matrix(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  }
  return m;
}

HermitianMatrix with_spectrum(const CMatrix& v, const Eigen::VectorXd& values) {
  return HermitianMatrix::from_hermitian_product(v * values.cast<Complex>().asDiagonal() *
                                                 v.adjoint());
}

void check_band(int n, double lo, double hi) {
  if (n < 1) throw InvalidArgument("random matrix dimension must be positive");
  if (!(lo > 0.0 && lo <= hi)) throw InvalidArgument("band needs 0 < lo <= hi");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HermitianMatrix random_hermitian(Rng& rng, int n) {
  if (n < 1) throw InvalidArgument("random matrix dimension must be positive");
  const CMatrix g = gaussian_matrix(rng, n);
  return HermitianMatrix::from_hermitian_product((g + g.adjoint()) * 0.5);
}

CMatrix random_unitary(Rng& rng, int n) {
  if (n < 1) throw InvalidArgument("random matrix dimension must be positive");
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(rng, n));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

HermitianMatrix random_band_matrix(Rng& rng, int n, double lo, double hi) {
  check_band(n, lo, hi);
  const auto eig = eig_hermitian(random_hermitian(rng, n));
  Eigen::VectorXd values = eig.eigenvalues;
  const double top = values(0);
  const double bottom = values(n - 1);
  if (n == 1 || top - bottom <= 0.0) {
    std::uniform_real_distribution<double> uniform(lo, hi);
    values.setConstant(uniform(rng));
  } else {
    for (int i = 0; i < n; ++i) values(i) = lo + (values(i) - bottom) * (hi - lo) / (top - bottom);
  }
  return with_spectrum(eig.eigenvectors, values);
}

const char* to_string(PairMode mode) {
  switch (mode) {
    case PairMode::independent:
      return "independent";
    case PairMode::perturbation:
      return "perturbation";
    case PairMode::commuting:
      return "commuting";
  }
  return "?";
}

MatrixPair random_band_pair(Rng& rng, int n, PairMode mode, double lo, double hi) {
  check_band(n, lo, hi);
  HermitianMatrix a = random_band_matrix(rng, n, lo, hi);
  switch (mode) {
    case PairMode::independent:
      return {a, random_band_matrix(rng, n, lo, hi), mode};
    case PairMode::perturbation: {
      std::uniform_real_distribution<double> exponent(-4.0, -1.0);
      const double eps = std::pow(10.0, exponent(rng));
      const HermitianMatrix e = random_hermitian(rng, n);
      const auto e_values = eigvals_desc(e);
      const double e_norm = std::max(std::abs(e_values.front()), std::abs(e_values.back()));
      const auto eig = eig_hermitian(a + e * (eps / e_norm));
      Eigen::VectorXd values = eig.eigenvalues;
      for (int i = 0; i < n; ++i) values(i) = std::clamp(values(i), lo, hi);
      return {a, with_spectrum(eig.eigenvectors, values), mode};
    }
    case PairMode::commuting: {
      const auto eig = eig_hermitian(a);
      std::uniform_real_distribution<double> uniform(lo, hi);
      Eigen::VectorXd values(n);
      for (int i = 0; i < n; ++i) values(i) = uniform(rng);
      return {a, with_spectrum(eig.eigenvectors, values), mode};
    }
  }
  throw InvalidArgument("unknown pair mode");
}

HermitianMatrix random_pd(Rng& rng, int n, double max_condition) {
  if (n < 1) throw InvalidArgument("random matrix dimension must be positive");
  if (!(max_condition >= 1.0)) throw InvalidArgument("max_condition must be at least 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_kappa = unit(rng) * std::log(max_condition);
  Eigen::VectorXd values(n);
  for (int i = 0; i < n; ++i) values(i) = std::exp(unit(rng) * log_kappa);
  if (n >= 2) {
    values(0) = 1.0;
    values(1) = std::exp(log_kappa);
  }
  return with_spectrum(random_unitary(rng, n), values);
}

}  // namespace opmean
