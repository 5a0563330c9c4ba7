#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "opmean/hermitian.hpp"
#include "opmean/random_matrices.hpp"

namespace opmean::testing {

inline double max_abs_entry(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return max_abs_entry(a.matrix() - b.matrix());
}

inline double relative_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  return distance(a, b) / std::max(1.0, std::max(a.frobenius_norm(), b.frobenius_norm()));
}

/// det(H - x I) through LU; real for Hermitian H.
inline double char_poly(const HermitianMatrix& h, double x) {
  const CMatrix shifted = h.matrix() - x * CMatrix::Identity(h.dim(), h.dim());
  return Eigen::PartialPivLU<CMatrix>(shifted).determinant().real();
}

/// Eigenvalues of H (decreasing) as the sign changes of the characteristic
/// polynomial on a fine grid, refined by bisection. Assumes simple eigenvalues.
inline std::vector<double> char_poly_roots(const HermitianMatrix& h, int grid = 40000) {
  const double radius = h.frobenius_norm() + 1.0;
  std::vector<double> roots;
  double x0 = -radius;
  double p0 = char_poly(h, x0);
  const double step = 2.0 * radius / grid;
  for (int k = 1; k <= grid; ++k) {
    const double x1 = -radius + k * step;
    const double p1 = char_poly(h, x1);
    if (p1 == 0.0) {
      roots.push_back(x1);
    } else if ((p0 < 0.0) != (p1 < 0.0) && p0 != 0.0) {
      double lo = x0, hi = x1, plo = p0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = char_poly(h, mid);
        if ((pm < 0.0) == (plo < 0.0)) {
          lo = mid;
          plo = pm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    p0 = p1;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

/// Tanh-sinh rule for int_0^1 g(x, 1 - x) dx; both arguments are passed so
/// endpoint singularities see full relative precision.
template <class G>
double tanh_sinh_unit(G g, double h = 1.0 / 64.0, double t_max = 6.5) {
  const double half_pi = 0.5 * M_PI;
  double sum = 0.0;
  for (double t = -t_max; t <= t_max + 0.5 * h; t += h) {
    const double s = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    // x = (1 + tanh s) / 2, 1 - x = (1 - tanh s) / 2, written without cancellation.
    const double small = e / (1.0 + e);
    const double x = s < 0 ? small : 1.0 - small;
    const double xc = s < 0 ? 1.0 - small : small;
    if (x <= 0.0 || xc <= 0.0) continue;
    const double c = std::cosh(s);
    const double w = half_pi * std::cosh(t) / (2.0 * c * c);
    sum += w * g(x, xc);
  }
  return h * sum;
}

/// Random PD matrix with eigenvalues in [lo, hi].
inline HermitianMatrix random_spectrum_pd(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const CMatrix q = random_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = u(rng);
  return HermitianMatrix::from_hermitian_product(q * d.cast<Complex>().asDiagonal() * q.adjoint());
}

/// Positive semidefinite matrix X X* for a random complex X.
inline HermitianMatrix random_psd(Rng& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix x(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = Complex(g(rng), g(rng));
  return HermitianMatrix::from_hermitian_product(scale * x * x.adjoint());
}

}  // namespace opmean::testing
