#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opmean/errors.hpp"
#include "opmean/hermitian.hpp"

namespace opmean {

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Rotation is still worthwhile while a(p, q) is above roundoff relative to the
// two diagonal entries it couples; this keeps eigenvectors of small eigenvalues
// accurate when the spectrum spans many orders of magnitude.
bool needs_rotation(const CMatrix& a, Eigen::Index p, Eigen::Index q, double floor) {
  const double r = std::abs(a(p, q));
  const double eps = std::numeric_limits<double>::epsilon();
  return r > floor && r > eps * std::sqrt(std::abs(a(p, p).real() * a(q, q).real()));
}

// Annihilates a(p, q) with the unitary G = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
// acting on coordinates (p, q), where a(p, q) = r e^{i phi}. A <- G* A G, V <- V G.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
  const double c = 1.0 / std::hypot(t, 1.0);
  const double s = t * c;
  const Complex s_phase = s * phase;              // s e^{i phi}
  const Complex s_conj = s * std::conj(phase);    // s e^{-i phi}

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s_conj * akq;
    a(k, q) = s_phase * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s_phase * aqk;
    a(q, k) = s_conj * apk + c * aqk;
  }
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s_conj * vkq;
    v(k, q) = s_phase * vkp + c * vkq;
  }
}

}  // namespace

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
  const Eigen::Index n = h.dim();
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  const double norm = h.frobenius_norm();
  const double target = kJacobiTolerance * norm;
  const double floor = std::numeric_limits<double>::epsilon() *
                       std::numeric_limits<double>::epsilon() * norm;

  auto settled = [&] {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (needs_rotation(a, p, q, floor)) return false;
      }
    }
    return true;
  };

  int sweeps = 0;
  while (off_diagonal_norm(a) > target || !settled()) {
    if (sweeps == kJacobiMaxSweeps) {
      throw NumericalFailure("Jacobi eigensolver did not converge in " +
                             std::to_string(kJacobiMaxSweeps) + " sweeps (n = " +
                             std::to_string(n) + ")");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (needs_rotation(a, p, q, floor)) rotate(a, v, p, q);
      }
    }
    ++sweeps;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.eigenvalues[j] = a(src, src).real();
    out.eigenvectors.col(j) = v.col(src);
  }
  out.sweeps = sweeps;
  return out;
}

}  // namespace opmean
