#include <cmath>
#include <vector>

#include "doctest.h"
#include "opmean/errors.hpp"
#include "opmean/hermitian.hpp"
#include "opmean/matrix_io.hpp"
#include "opmean/random_matrices.hpp"
#include "support.hpp"

using namespace opmean;
using namespace opmean::testing;

TEST_CASE("construction rejects non-Hermitian input and symmetrizes within tolerance") {
  CMatrix m(2, 2);
  m << 1.0, Complex(2.0, 1.0), Complex(2.0, -1.0), 3.0;
  const auto h = HermitianMatrix::from_matrix(m);
  CHECK(h(0, 1) == Complex(2.0, 1.0));

  CMatrix bad = m;
  bad(1, 0) = Complex(2.0, 1.0);
  CHECK_THROWS_AS(HermitianMatrix::from_matrix(bad), InvalidArgument);

  CMatrix nearly = m;
  nearly(1, 0) += Complex(1e-15, 0.0);
  const auto s = HermitianMatrix::from_matrix(nearly);
  CHECK(s(0, 1) == std::conj(s(1, 0)));
  CHECK(s(0, 0).imag() == 0.0);
}

TEST_CASE("eig_hermitian on trivial inputs") {
  const auto d = eig_hermitian(HermitianMatrix::diagonal({3.0, 1.0}));
  CHECK(d.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(max_abs_entry(d.eigenvectors.cwiseAbs().cast<Complex>() - CMatrix::Identity(2, 2)) < 1e-15);

  const auto x = eigvals_desc(HermitianMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(-1.0).epsilon(1e-15));

  const auto s = eigvals_desc(HermitianMatrix::diagonal({1.0, 3.0, 2.0}));
  CHECK(s == std::vector<double>{3.0, 2.0, 1.0});
  for (double v : eigvals_desc(HermitianMatrix::identity(5))) CHECK(v == 1.0);
}

TEST_CASE("eigenvalues agree with characteristic polynomial roots") {
  for (int n = 1; n <= 6; ++n) {
    Rng rng(42 + n);
    const auto h = random_hermitian(rng, n);
    const auto eig = eigvals_desc(h);
    const auto roots = char_poly_roots(h);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) CHECK(std::abs(eig[j] - roots[j]) <= 1e-10);
  }
}

TEST_CASE("reconstruction, orthonormality and ordering on random Hermitian matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 12;
    const auto h = random_hermitian(rng, n) * std::pow(10.0, trial % 5 - 2);
    const auto d = eig_hermitian(h);
    const double bound = 1e-12 * std::max(1.0, h.frobenius_norm());
    CHECK(distance(d.reconstruct(), h) <= bound);
    const CMatrix gram = d.eigenvectors.adjoint() * d.eigenvectors;
    CHECK(max_abs_entry(gram - CMatrix::Identity(n, n)) <= 1e-12);
    for (int j = 0; j + 1 < n; ++j) CHECK(d.eigenvalues[j] >= d.eigenvalues[j + 1]);
  }
}

TEST_CASE("eig_hermitian is deterministic") {
  Rng rng(99);
  const auto h = random_hermitian(rng, 7);
  const auto a = eig_hermitian(h);
  const auto b = eig_hermitian(h);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("matrix_function examples") {
  const auto r = matrix_function(HermitianMatrix::diagonal({4.0, 9.0}), [](double x) { return std::sqrt(x); });
  CHECK(max_abs_diff(r, HermitianMatrix::diagonal({2.0, 3.0})) < 1e-15);

  Rng rng(3);
  const auto h = random_hermitian(rng, 6);
  CHECK(distance(matrix_function(h, [](double x) { return x; }), h) <= 1e-13 * h.frobenius_norm());

  const auto h2 = HermitianMatrix::from_rows({{2, 1}, {1, 2}});
  const auto sq = matrix_function(h2, [](double x) { return x * x; });
  CHECK(max_abs_diff(sq, HermitianMatrix::from_rows({{5, 4}, {4, 5}})) <= 1e-12);

  for (int n = 1; n <= 8; ++n) {
    const auto g = random_hermitian(rng, n);
    const auto by_product = HermitianMatrix::from_hermitian_product(g.matrix() * g.matrix());
    const auto by_function = matrix_function(g, [](double x) { return x * x; });
    CHECK(distance(by_function, by_product) <= 1e-12 * std::max(1.0, by_product.frobenius_norm()));
  }
}

TEST_CASE("matrix_function rejects non-finite values") {
  const auto h = HermitianMatrix::diagonal({1.0, 0.0});
  CHECK_THROWS_AS(matrix_function(h, [](double x) { return 1.0 / x; }), DomainError);
  CHECK_THROWS_AS(matrix_function(h, [](double x) { return std::log(x); }), DomainError);
}

TEST_CASE("square roots and inverses") {
  CHECK(max_abs_diff(sqrt_psd(HermitianMatrix::identity(3)), HermitianMatrix::identity(3)) < 1e-15);
  CHECK(max_abs_diff(inv_pd(HermitianMatrix::diagonal({2.0, 4.0})),
                     HermitianMatrix::diagonal({0.5, 0.25})) < 1e-15);

  const auto h = HermitianMatrix::from_rows({{5, 4}, {4, 5}});
  const auto m = inv_sqrt_pd(h);
  CHECK(max_abs_entry(m.matrix() * h.matrix() * m.matrix() - CMatrix::Identity(2, 2)) <= 1e-11);

  Rng rng(11);
  for (int n = 1; n <= 8; ++n) {
    const auto p = random_psd(rng, n);
    const auto r = sqrt_psd(p);
    CHECK((r.matrix() * r.matrix() - p.matrix()).norm() <= 1e-11 * p.frobenius_norm());
    const auto inv = inv_pd(p);
    CHECK(max_abs_entry(inv.matrix() * p.matrix() - CMatrix::Identity(n, n)) <= 1e-11 * 1e4);
  }
}

TEST_CASE("definiteness preconditions") {
  const auto singular = HermitianMatrix::diagonal({1.0, 0.0});
  CHECK_THROWS_AS(inv_pd(singular), NotPositiveDefinite);
  CHECK_THROWS_AS(inv_sqrt_pd(singular), NotPositiveDefinite);
  CHECK(max_abs_diff(sqrt_psd(singular), singular) < 1e-15);

  const auto roundoff = HermitianMatrix::diagonal({1.0, -1e-13});
  CHECK(sqrt_psd(roundoff)(1, 1) == Complex(0.0, 0.0));

  try {
    sqrt_psd(HermitianMatrix::diagonal({1.0, -1e-3}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-1e-3));
  }
}

TEST_CASE("loewner_leq examples") {
  Rng rng(5);
  const auto a = random_hermitian(rng, 4);
  const auto same = loewner_leq(a, a, 1e-12);
  CHECK(same.holds);
  CHECK(std::abs(same.min_eigenvalue_of_difference) < 1e-15);
  CHECK_FALSE(same.witness_vector.has_value());

  const auto cmp = loewner_leq(HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::diagonal({0.0, 1.0}), 1e-12);
  CHECK_FALSE(cmp.holds);
  CHECK(cmp.min_eigenvalue_of_difference == doctest::Approx(-1.0));
  REQUIRE(cmp.witness_vector.has_value());
  CHECK(std::abs((*cmp.witness_vector)[0]) == doctest::Approx(1.0));

  const auto ea = HermitianMatrix::from_rows({{1.0 / 5, -1.0 / 10}, {-1.0 / 10, 1.0 / 3}});
  const auto eb = HermitianMatrix::from_rows({{2.0 / 15, -1.0 / 10}, {-1.0 / 10, 1.0 / 3}});
  CHECK(loewner_leq(eb, ea, 1e-12).holds);
  CHECK(loewner_leq(ea, HermitianMatrix::identity(2) * 0.5, 1e-12).holds);

  CHECK_THROWS_AS(loewner_leq(HermitianMatrix::identity(2), HermitianMatrix::identity(3), 0.0),
                  DimensionMismatch);
}

TEST_CASE("holds iff min eigenvalue >= -tol; larger tolerance never flips holds to false") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_hermitian(rng, 3);
    const auto b = random_hermitian(rng, 3);
    bool held = false;
    for (double tol : {0.0, 1e-12, 1e-6, 1e-2, 1.0, 10.0}) {
      const auto c = loewner_leq(a, b, tol);
      CHECK(c.holds == (c.min_eigenvalue_of_difference >= -tol));
      CHECK(c.holds == !c.witness_vector.has_value());
      if (held) CHECK(c.holds);
      held = c.holds;
    }
  }
}

TEST_CASE("property: Weyl monotonicity") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 8;
    const auto b = random_hermitian(rng, n);
    const auto a = b + random_psd(rng, n, 0.1);
    REQUIRE(loewner_leq(b, a, 0.0).holds);
    const auto ea = eigvals_desc(a);
    const auto eb = eigvals_desc(b);
    for (int j = 0; j < n; ++j) CHECK(ea[j] >= eb[j] - 1e-10);
  }
}

TEST_CASE("property: lambda(X*X) = lambda(XX*)") {
  Rng rng(29);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      CMatrix x(n, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = Complex(g(rng), g(rng));
      const auto l = eigvals_desc(HermitianMatrix::from_hermitian_product(x.adjoint() * x));
      const auto r = eigvals_desc(HermitianMatrix::from_hermitian_product(x * x.adjoint()));
      for (int j = 0; j < n; ++j) CHECK(std::abs(l[j] - r[j]) <= 1e-10);
    }
  }
}

TEST_CASE("property: matrix_function respects the monotonicity principle") {
  Rng rng(31);
  const auto phi = [](double x) { return x * x + 1.0; };
  const auto psi = [](double x) { return 2.0 * x; };  // phi - psi = (x - 1)^2 >= 0
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = random_hermitian(rng, 1 + trial % 8);
    CHECK(loewner_leq(matrix_function(h, psi), matrix_function(h, phi), 1e-10).holds);
  }
}

TEST_CASE("matrix file round trip and rejection") {
  Rng rng(37);
  const auto h = random_hermitian(rng, 3);
  const auto back = matrix_from_json(matrix_to_json(h));
  CHECK(max_abs_diff(back, h) == 0.0);

  const auto real_only = matrix_from_json(nlohmann::json::parse(R"({"n":2,"re":[[2,1],[1,3]]})"));
  CHECK(real_only(0, 1) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"n":2,"re":[[2,1],[0,3]]})")),
                  InvalidArgument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"n":3,"re":[[2,1],[1,3]]})")),
                  InvalidArgument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"re":[[1]]})")), InvalidArgument);
}
