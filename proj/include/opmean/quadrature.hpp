#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <vector>

namespace opmean {

/// Nodes and weights of a Gaussian rule mapped to [0, 1]. Both lambda and
/// 1 - lambda are stored so endpoint-clustered nodes keep full relative precision.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> complement;  // 1 - nodes[i], computed without cancellation
  std::vector<double> weights;
};

/// Eigenvalues and first eigenvector components of the symmetric tridiagonal
/// matrix with diagonal `diag` and sub-diagonal `off` (off.size() == diag.size() - 1).
/// Implicit QL with Wilkinson shifts; throws NumericalFailure after 60 iterations
/// on one eigenvalue.
struct TridiagonalEigen {
  std::vector<double> eigenvalues;
  std::vector<double> first_components;
};
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, const std::vector<double>& off);

/// Gauss-Jacobi rule for  int_0^1 g(lambda) (1 - lambda)^alpha lambda^beta d lambda,
/// alpha, beta > -1, via Golub-Welsch on the Jacobi recurrence.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// Gauss-Legendre rule for int_0^1 g(lambda) d lambda.
QuadratureRule gauss_legendre(int n);

/// Lazily built sequence of rules with node counts base, 2 base, 4 base, ...
/// up to max_nodes. Thread-safe; every level is built at most once.
class RuleLadder {
 public:
  enum class Family { jacobi, legendre };
  RuleLadder(Family family, double alpha, double beta, int base_nodes, int max_nodes);

  int levels() const noexcept { return levels_; }
  int nodes_at(int level) const noexcept { return base_ << level; }
  const QuadratureRule& rule(int level) const;

 private:
  static constexpr int kMaxLevels = 16;
  Family family_;
  double alpha_;
  double beta_;
  int base_;
  int levels_;
  mutable std::array<std::once_flag, kMaxLevels> once_;
  mutable std::array<QuadratureRule, kMaxLevels> rules_;
};

}  // namespace opmean
