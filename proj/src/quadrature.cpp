#include "opmean/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opmean/errors.hpp"

namespace opmean {

TridiagonalEigen tridiagonal_eigen(std::vector<double> d, const std::vector<double>& off) {
  const int n = static_cast<int>(d.size());
  if (n == 0 || static_cast<int>(off.size()) != n - 1) {
    throw InvalidArgument("tridiagonal_eigen: need n diagonal and n - 1 off-diagonal entries");
  }
  std::vector<double> e(off);
  e.push_back(0.0);
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);  // first row of the eigenvector matrix
  z[0] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " +
                                 std::to_string(l));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return {std::move(d), std::move(z)};
}

namespace {

QuadratureRule jacobi_rule(int n, double alpha, double beta) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw InvalidArgument("Jacobi exponents must exceed -1");
  }
  const double ab = alpha + beta;
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag[0] = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag[static_cast<std::size_t>(k)] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double b2 = 0.0;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[static_cast<std::size_t>(k - 1)] = std::sqrt(b2);
  }
  // Total mass of (1 - x)^alpha (1 + x)^beta on [-1, 1], then rescaled to [0, 1].
  const double log_mass_unit = std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                               std::lgamma(ab + 2.0);
  const double mass_unit = std::exp(log_mass_unit);

  const auto eig = tridiagonal_eigen(std::move(diag), off);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return eig.eigenvalues[i] < eig.eigenvalues[j]; });

  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(n));
  rule.complement.reserve(static_cast<std::size_t>(n));
  rule.weights.reserve(static_cast<std::size_t>(n));
  for (int idx : order) {
    const double x = eig.eigenvalues[static_cast<std::size_t>(idx)];
    const double v = eig.first_components[static_cast<std::size_t>(idx)];
    rule.nodes.push_back(0.5 * (1.0 + x));
    rule.complement.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(mass_unit * v * v);
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double alpha, double beta) { return jacobi_rule(n, alpha, beta); }

QuadratureRule gauss_legendre(int n) { return jacobi_rule(n, 0.0, 0.0); }

RuleLadder::RuleLadder(Family family, double alpha, double beta, int base_nodes, int max_nodes)
    : family_(family), alpha_(alpha), beta_(beta), base_(base_nodes), levels_(0) {
  if (base_nodes < 1 || max_nodes < base_nodes) {
    throw InvalidArgument("RuleLadder: need 1 <= base_nodes <= max_nodes");
  }
  while (levels_ < kMaxLevels && (base_ << levels_) <= max_nodes) ++levels_;
}

const QuadratureRule& RuleLadder::rule(int level) const {
  if (level < 0 || level >= levels_) throw InvalidArgument("RuleLadder: level out of range");
  const auto idx = static_cast<std::size_t>(level);
  std::call_once(once_[idx], [&] {
    rules_[idx] = family_ == Family::jacobi ? gauss_jacobi(nodes_at(level), alpha_, beta_)
                                            : gauss_legendre(nodes_at(level));
  });
  return rules_[idx];
}

}  // namespace opmean
