#include <cmath>
#include <functional>

#include "opmean/inequalities.hpp"

namespace opmean {

namespace {

using PairExpr = std::function<HermitianMatrix(const HermitianMatrix&, const HermitianMatrix&)>;

HermitianMatrix complement(const HermitianMatrix& x) {
  return HermitianMatrix::identity(x.dim()) - x;
}

Example33Display make_display(std::string name, HermitianMatrix computed,
                              std::array<double, 3> printed) {
  Example33Display d{std::move(name), std::move(computed), printed};
  const CMatrix& m = d.computed.matrix();
  d.max_entry_error = std::max({std::abs(m(0, 0) - printed[0]), std::abs(m(0, 1) - printed[1]),
                                std::abs(m(1, 0) - printed[1]), std::abs(m(1, 1) - printed[2])});
  d.min_eigenvalue = eigvals_desc(d.computed).back();
  d.matches = d.max_entry_error <= kExample33EntryTolerance;
  d.indefinite = d.min_eigenvalue < kExample33IndefiniteBound;
  return d;
}

}  // namespace

Example33Report reproduce_example33() {
  Example33Report r{
      HermitianMatrix::from_rows({{1.0 / 5.0, -1.0 / 10.0}, {-1.0 / 10.0, 1.0 / 3.0}}),
      HermitianMatrix::from_rows({{2.0 / 15.0, -1.0 / 10.0}, {-1.0 / 10.0, 1.0 / 3.0}}),
      0.5, false, false, {}, {}, false};
  const double mu = r.mu;
  const HermitianMatrix& a = r.a;
  const HermitianMatrix& b = r.b;
  const HermitianMatrix ap = complement(a);
  const HermitianMatrix bp = complement(b);
  r.b_leq_a = loewner_leq(b, a, kDefiniteTolerance).holds;
  r.a_leq_half = loewner_leq(a, HermitianMatrix::identity(2) * 0.5, kDefiniteTolerance).holds;

  auto arith = [mu](const HermitianMatrix& x, const HermitianMatrix& y) {
    return weighted_arithmetic(x, y, mu);
  };
  auto geo = [mu](const HermitianMatrix& x, const HermitianMatrix& y) {
    return weighted_geometric(x, y, mu);
  };
  auto harm = [mu](const HermitianMatrix& x, const HermitianMatrix& y) {
    return weighted_harmonic(x, y, mu);
  };
  auto reciprocal = [](PairExpr low, PairExpr high) -> PairExpr {
    return [=](const HermitianMatrix& x, const HermitianMatrix& y) {
      return inv_pd(low(x, y)) - inv_pd(high(x, y));
    };
  };
  auto ratio = [](PairExpr low, PairExpr high) -> PairExpr {
    return [=](const HermitianMatrix& x, const HermitianMatrix& y) {
      return sandwich(inv_sqrt_pd(low(x, y)), high(x, y));
    };
  };
  auto ratio_outer = [&](const HermitianMatrix& x, const HermitianMatrix& y) {
    return sandwich(sqrt_psd(arith(x, y)), inv_pd(geo(x, y)));
  };

  const PairExpr g_a = reciprocal(geo, arith);
  const PairExpr a_over_g = ratio(geo, arith);
  r.displays = std::vector<Example33Display>{
      make_display("reciprocal_G_A", g_a(a, b) - g_a(ap, bp), {0.226844, 0.0685098, 0.0204844}),
      make_display("ratio_A_G", a_over_g(a, b) - a_over_g(ap, bp),
                   {0.0292946, 0.00560064, 0.00101542}),
      make_display("ratio_A_G_outer", ratio_outer(a, b) - ratio_outer(ap, bp),
                   {0.0293063, 0.00556985, 0.00100374}),
  };

  const std::pair<const char*, PairExpr> controls[] = {
      {"reciprocal_G_A", reciprocal(geo, arith)}, {"reciprocal_H_G", reciprocal(harm, geo)},
      {"reciprocal_H_A", reciprocal(harm, arith)}, {"ratio_A_G", ratio(geo, arith)},
      {"ratio_G_H", ratio(harm, geo)},             {"ratio_A_H", ratio(harm, arith)},
  };
  r.passes = r.b_leq_a && r.a_leq_half;
  for (const auto& [id, expr] : controls) {
    const HermitianMatrix primed = expr(ap, bp);
    const HermitianMatrix plain = expr(a, b);
    NegativeControl c{id, loewner_leq(primed, plain, kLoewnerTolerance),
                      compare_eigenvalues(primed, plain, kEigenTolerance)};
    c.behaves_as_expected = !c.loewner.holds && c.loewner.witness_vector && c.eigen.holds;
    r.passes = r.passes && c.behaves_as_expected;
    r.controls.push_back(std::move(c));
  }
  for (const auto& d : r.displays) r.passes = r.passes && d.matches && d.indefinite;
  return r;
}

}  // namespace opmean
