#include "opmean/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "opmean/errors.hpp"
#include "opmean/matrix_io.hpp"

namespace opmean {

namespace {

// phi_l(t) = 1 !_l t = t / ((1 - l) t + l), with phi_0 = 1 and phi_l(0) = 0 for l > 0.
double phi(double lambda, double complement, double t) {
  if (lambda == 0.0) return 1.0;
  if (t == 0.0) return 0.0;
  return t / (complement * t + lambda);
}

double geometric_constant(const GeometricDensity& g) {
  return g.weight * std::sin(g.mu * std::numbers::pi) / std::numbers::pi;
}

double table_value(const TableDensity& table, double lambda) {
  const auto& v = table.values;
  const double pos = lambda * static_cast<double>(v.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), v.size() - 2);
  const double frac = pos - static_cast<double>(k);
  return v[k] * (1.0 - frac) + v[k + 1] * frac;
}

HermitianMatrix llt_inverse(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("quadrature node matrix is not positive definite",
                              std::numeric_limits<double>::quiet_NaN());
  }
  return HermitianMatrix::from_hermitian_product(
      llt.solve(CMatrix::Identity(m.rows(), m.cols())));
}

struct Break {
  double at;
  double comp;  // 1 - at, exact for breaks graded toward 1
};

// Panel end points for Legendre densities: table knots, plus points at
// distance d, 4d, 16d, ... from an end point whose nearest kernel pole lies at distance d.
std::vector<Break> panel_breaks(const Density& density, KernelRange range) {
  std::vector<Break> breaks = {{0.0, 1.0}, {1.0, 0.0}};
  if (const auto* t = std::get_if<TableDensity>(&density)) {
    const double segments = static_cast<double>(t->values.size() - 1);
    for (std::size_t k = 1; k + 1 < t->values.size(); ++k) {
      const double at = static_cast<double>(k) / segments;
      breaks.push_back({at, static_cast<double>(t->values.size() - 1 - k) / segments});
    }
  }
  auto grade = [&breaks](double dist, bool near_zero) {
    if (!(dist < 0.25)) return;
    for (double x = std::max(dist, 1e-16); x < 0.3; x *= 4.0) {
      breaks.push_back(near_zero ? Break{x, 1.0 - x} : Break{1.0 - x, x});
    }
  };
  if (range.lo < 1.0) grade(range.lo / (1.0 - range.lo), true);
  if (range.hi > 1.0) grade(1.0 / (range.hi - 1.0), false);
  std::sort(breaks.begin(), breaks.end(),
            [](const Break& x, const Break& y) { return x.at < y.at; });
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](const Break& x, const Break& y) { return x.at == y.at; }),
               breaks.end());
  return breaks;
}

void validate_density(const Density& density) {
  if (const auto* g = std::get_if<GeometricDensity>(&density)) {
    if (!(g->mu > 0.0 && g->mu < 1.0)) {
      throw InvalidArgument(
          "geometric density needs 0 < mu < 1 (use Dirac atoms at 0 and 1 for the endpoints)");
    }
    if (!(g->weight > 0.0) || !std::isfinite(g->weight)) {
      throw InvalidArgument("geometric density weight must be positive");
    }
  } else if (const auto* t = std::get_if<TableDensity>(&density)) {
    if (t->values.size() < 2) throw InvalidArgument("table density needs at least two values");
    for (double v : t->values) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("table density values must be finite and nonnegative");
      }
    }
  } else if (!std::get<FunctionDensity>(density).density) {
    throw InvalidArgument("function density is empty");
  }
}

}  // namespace

BorelMeasure::BorelMeasure(std::vector<Atom> atoms, std::optional<Density> density, int nodes)
    : atoms_(std::move(atoms)), density_(std::move(density)), nodes_(nodes) {
  if (nodes_ < 1 || nodes_ > kMaxQuadratureNodes) {
    throw InvalidArgument("quadrature node count must lie in [1, " +
                          std::to_string(kMaxQuadratureNodes) + "]");
  }
  for (const Atom& a : atoms_) {
    if (!(a.location >= 0.0 && a.location <= 1.0)) {
      throw InvalidArgument("atom location must lie in [0, 1]");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw InvalidArgument("atom weight must be positive");
    }
  }
  if (atoms_.empty() && !density_) throw InvalidArgument("measure has neither atoms nor density");

  if (density_) {
    validate_density(*density_);
    if (const auto* g = std::get_if<GeometricDensity>(&*density_)) {
      ladder_ = std::make_shared<const RuleLadder>(RuleLadder::Family::jacobi, -g->mu,
                                                   g->mu - 1.0, nodes_, kMaxQuadratureNodes);
    } else {
      ladder_ = std::make_shared<const RuleLadder>(RuleLadder::Family::legendre, 0.0, 0.0,
                                                   nodes_, kMaxQuadratureNodes);
    }
  }
  total_mass_ = integrate([](double, double) { return 1.0; });
  if (!std::isfinite(total_mass_)) throw InvalidArgument("measure has non-finite total mass");

  if (density_ && !std::holds_alternative<GeometricDensity>(*density_) &&
      ladder_->levels() > 1) {
    // Self-check of the Legendre rule: n against 2n nodes on mass and two kernels.
    double worst = 0.0;
    for (double t : {-1.0, 1e-2, 1e2}) {
      double coarse = 0.0;
      double fine = 0.0;
      const KernelRange range = t < 0.0 ? KernelRange{} : KernelRange{t, t};
      for (int level : {0, 1}) {
        double sum = 0.0;
        for_each_density_node(level, range, [&](double l, double c, double w) {
          sum += w * (t < 0.0 ? 1.0 : phi(l, c, t));
        });
        (level == 0 ? coarse : fine) = sum;
      }
      worst = std::max(worst, std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300));
    }
    if (worst > kSelfCheckTolerance) {
      std::ostringstream msg;
      msg << "density quadrature with " << nodes_ << " vs " << 2 * nodes_
          << " nodes disagrees by " << worst << " (relative)";
      warning_ = msg.str();
    }
  }
}

BorelMeasure BorelMeasure::dirac(double location, double weight) {
  return BorelMeasure({Atom{location, weight}}, std::nullopt);
}

bool BorelMeasure::is_probability() const noexcept {
  return std::abs(total_mass_ - 1.0) <= kProbabilityTolerance;
}

double BorelMeasure::density_factor(double lambda) const {
  if (!density_) return 0.0;
  return std::visit(
      [lambda](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GeometricDensity>) {
          return geometric_constant(d);
        } else if constexpr (std::is_same_v<T, TableDensity>) {
          return table_value(d, lambda);
        } else {
          return d.density(lambda);
        }
      },
      *density_);
}

void BorelMeasure::for_each_density_node(
    int level, KernelRange range, const std::function<void(double, double, double)>& visit) const {
  const QuadratureRule& rule = ladder_->rule(level);
  if (const auto* g = std::get_if<GeometricDensity>(&*density_)) {
    const double k = geometric_constant(*g);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      visit(rule.nodes[i], rule.complement[i], rule.weights[i] * k);
    }
    return;
  }
  const auto breaks = panel_breaks(*density_, range);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const Break& a = breaks[p];
    const Break& b = breaks[p + 1];
    const double width = a.at < 0.5 ? b.at - a.at : a.comp - b.comp;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double l = a.at < 0.5 ? a.at + width * rule.nodes[i] : 1.0 - (b.comp + width * rule.complement[i]);
      const double c = a.at < 0.5 ? 1.0 - l : b.comp + width * rule.complement[i];
      visit(l, c, width * rule.weights[i] * density_factor(l));
    }
  }
}

double BorelMeasure::integrate(const std::function<double(double, double)>& kernel,
                               KernelRange range) const {
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight * kernel(a.location, 1.0 - a.location);
  if (density_) {
    for_each_density_node(0, range, [&](double l, double c, double w) { sum += w * kernel(l, c); });
  }
  return sum;
}

double BorelMeasure::integrate_refined(const std::function<double(double, double)>& kernel,
                                       KernelRange range) const {
  double atoms = 0.0;
  for (const Atom& a : atoms_) atoms += a.weight * kernel(a.location, 1.0 - a.location);
  if (!density_) return atoms;
  auto level_value = [&](int level) {
    double sum = 0.0;
    for_each_density_node(level, range, [&](double l, double c, double w) { sum += w * kernel(l, c); });
    return sum;
  };
  double previous = level_value(0);
  for (int level = 1; level < ladder_->levels(); ++level) {
    const double current = level_value(level);
    if (std::abs(current - previous) <= kLadderTolerance * std::abs(current)) {
      return atoms + current;
    }
    previous = current;
  }
  throw NumericalFailure("scalar quadrature did not converge with " +
                         std::to_string(kMaxQuadratureNodes) + " nodes");
}

// For the geometric density the substitution l = c u / (1 - u + c u) maps
// l^{mu-1} (1-l)^{-mu} dl to c^mu u^{mu-1} (1-u)^{-mu} / (1 - u + c u) du and
// phi_l(t) to (1 - u + c u) phi_u(t / c), so
//   int phi_l(t) dm_mu(l) = c^mu int phi_u(t / c) dm_mu(u).
// Choosing c = 2^round(log2 t) keeps t / c in [1/sqrt2, sqrt2], where phi_u is
// smooth on [0, 1] and the fixed Gauss-Jacobi rule is accurate for every t.
double BorelMeasure::connection_value(double t) const {
  if (!(t >= 0.0)) throw DomainError("connection function is defined for t >= 0");
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight * phi(a.location, 1.0 - a.location, t);
  if (!density_ || t == 0.0) return sum;

  if (const auto* g = std::get_if<GeometricDensity>(&*density_)) {
    const QuadratureRule& rule = ladder_->rule(0);
    const int k = static_cast<int>(std::lround(std::log2(t)));
    const double scaled = std::ldexp(t, -k);
    double inner = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      inner += rule.weights[i] * phi(rule.nodes[i], rule.complement[i], scaled);
    }
    sum += geometric_constant(*g) * std::exp2(k * g->mu) * inner;
  } else {
    for_each_density_node(0, {t, t}, [&](double l, double c, double w) { sum += w * phi(l, c, t); });
  }
  return sum;
}

HermitianMatrix BorelMeasure::integrate_density_operator(
    const std::function<HermitianMatrix(double, double)>& kernel, KernelRange range) const {
  if (!density_) throw InvalidArgument("measure has no density");
  auto level_value = [&](int level) {
    CMatrix sum;
    bool first = true;
    for_each_density_node(level, range, [&](double l, double c, double w) {
      const CMatrix term = kernel(l, c).matrix() * w;
      if (first) {
        sum = term;
        first = false;
      } else {
        sum += term;
      }
    });
    return sum;
  };
  CMatrix previous = level_value(0);
  for (int level = 1; level < ladder_->levels(); ++level) {
    CMatrix current = level_value(level);
    const double change = (current - previous).norm();
    if (change <= kLadderTolerance * current.norm()) {
      return HermitianMatrix::from_hermitian_product(current);
    }
    previous = std::move(current);
  }
  throw NumericalFailure("operator quadrature did not converge with " +
                         std::to_string(kMaxQuadratureNodes) + " nodes");
}

HermitianMatrix BorelMeasure::integrate_operator(
    const std::function<HermitianMatrix(double, double)>& kernel, KernelRange range) const {
  std::optional<HermitianMatrix> sum;
  auto add = [&sum](const HermitianMatrix& term) { sum = sum ? *sum + term : term; };
  for (const Atom& a : atoms_) add(kernel(a.location, 1.0 - a.location) * a.weight);
  if (density_) add(integrate_density_operator(kernel, range));
  return *sum;
}

MonotoneFunction connection_function(const BorelMeasure& m) {
  const double first = m.integrate([](double l, double) { return l; });
  const double second = -2.0 * m.integrate([](double l, double c) { return l * c; });
  auto shared = std::make_shared<const BorelMeasure>(m);
  return MonotoneFunction([shared](double t) { return shared->connection_value(t); },
                          JetAtOne{m.total_mass(), first, second}, "connection");
}

RepresentingFunction f_from_measure(std::shared_ptr<const BorelMeasure> m) {
  if (!m) throw InvalidArgument("f_from_measure: null measure");
  if (!m->is_probability()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "f_from_measure: a mean needs a probability measure, total mass is "
        << m->total_mass();
    throw InvalidArgument(msg.str());
  }
  const double mu = m->integrate([](double l, double) { return l; });
  const double second = -2.0 * m->integrate([](double l, double c) { return l * c; });
  const BorelMeasure* raw = m.get();
  std::ostringstream label;
  label << "measure[" << m->atoms().size() << " atoms" << (m->density() ? " + density" : "")
        << "]";
  // Normalize away the <= 1e-10 mass defect so that f(1) = 1 holds to rounding.
  const double mass = m->total_mass();
  return RepresentingFunction::create(
      [raw, keep = m, mass](double t) { return raw->connection_value(t) / mass; }, mu / mass,
      second / mass, label.str(), m);
}

RepresentingFunction f_from_measure(const BorelMeasure& m) {
  return f_from_measure(std::make_shared<const BorelMeasure>(m));
}

BorelMeasure geometric_measure(double mu, int nodes) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw InvalidArgument("geometric_measure needs 0 < mu < 1; use Dirac atoms for mu in {0, 1}");
  }
  return BorelMeasure({}, Density{GeometricDensity{mu, 1.0}}, nodes);
}

HermitianMatrix mean_from_measure(const BorelMeasure& m, const HermitianMatrix& a,
                                  const HermitianMatrix& b) {
  require_same_dim(a, b);
  const auto a_eig = eig_hermitian(a);
  const auto b_eig = eig_hermitian(b);
  const Eigen::Index last = a.dim() - 1;
  if (!(a_eig.eigenvalues[last] > kDefiniteTolerance * std::max(1.0, a.frobenius_norm()))) {
    throw NotPositiveDefinite("mean_from_measure (A)", a_eig.eigenvalues[last]);
  }
  if (!(b_eig.eigenvalues[last] > kDefiniteTolerance * std::max(1.0, b.frobenius_norm()))) {
    throw NotPositiveDefinite("mean_from_measure (B)", b_eig.eigenvalues[last]);
  }
  const CMatrix a_inv = matrix_function(a_eig, [](double x) { return 1.0 / x; }).matrix();
  const CMatrix b_inv = matrix_function(b_eig, [](double x) { return 1.0 / x; }).matrix();

  // A !_l B = ((1 - l) A^{-1} + l B^{-1})^{-1}, with the endpoints exact.
  auto harmonic_at = [&](double l, double c, double b_scale) -> HermitianMatrix {
    if (l == 0.0) return a;
    if (c == 0.0) return b * (1.0 / b_scale);
    return llt_inverse(c * a_inv + (l * b_scale) * b_inv);
  };

  std::optional<HermitianMatrix> sum;
  auto add = [&sum](const HermitianMatrix& term) { sum = sum ? *sum + term : term; };
  for (const Atom& atom : m.atoms()) {
    add(harmonic_at(atom.location, 1.0 - atom.location, 1.0) * atom.weight);
  }
  if (m.density()) {
    // Bounds on the spectrum of A^{-1/2} B A^{-1/2}.
    const double lo = b_eig.eigenvalues[last] / a_eig.eigenvalues[0];
    const double hi = b_eig.eigenvalues[0] / a_eig.eigenvalues[last];
    if (const auto* g = std::get_if<GeometricDensity>(&*m.density())) {
      // Same substitution as connection_value, now with c centred on the
      // spectral bounds: int A !_l B dm_mu(l) = c^mu int A !_u (B / c) dm_mu(u).
      const int k = static_cast<int>(std::lround(0.5 * std::log2(lo * hi)));
      const double scale = std::ldexp(1.0, k);
      add(m.integrate_density_operator([&](double l, double c) {
            return harmonic_at(l, c, scale);
          }) *
          std::exp2(k * g->mu));
    } else {
      add(m.integrate_density_operator(
          [&](double l, double c) { return harmonic_at(l, c, 1.0); }, {lo, hi}));
    }
  }
  return *sum;
}

HermitianMatrix tau_measure_form(const RepresentingFunction& f, const HermitianMatrix& a,
                                 const HermitianMatrix& b) {
  const auto& m = f.measure();
  if (!m) throw InvalidArgument("tau_measure_form: representing function carries no measure");
  if (f.is_linear()) {
    throw LinearMean("tau_measure_form: f''(1) = 0, the companion mean is not unique");
  }
  require_same_dim(a, b);
  require_positive_definite(a, "tau_measure_form (A)");
  require_positive_definite(b, "tau_measure_form (B)");
  const auto ea = eigvals_desc(a);
  const auto eb = eigvals_desc(b);
  const KernelRange range{eb.back() / ea.front(), eb.front() / ea.back()};
  const CMatrix& am = a.matrix();
  const CMatrix& bm = b.matrix();
  // Weighted inverse of B nabla_l A = (1 - l) B + l A; atoms at 0 and 1 carry zero weight.
  const HermitianMatrix integral = m->integrate_operator([&](double l, double c) {
    if (l == 0.0 || c == 0.0) return HermitianMatrix::from_hermitian_product(CMatrix::Zero(am.rows(), am.cols()));
    return llt_inverse(c * bm + l * am) * (l * c);
  }, range);
  return inv_pd(integral) * (-0.5 * f.second_at_one() * m->total_mass());
}

BorelMeasure measure_from_json(const nlohmann::json& j) {
  using nlohmann::json;
  if (!j.is_object()) throw InvalidArgument("measure JSON must be an object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw InvalidArgument("\"atoms\" must be an array");
    for (const json& a : j["atoms"]) {
      if (!a.is_object() || !a.contains("lambda") || !a.contains("w") ||
          !a["lambda"].is_number() || !a["w"].is_number()) {
        throw InvalidArgument("each atom needs numeric \"lambda\" and \"w\"");
      }
      atoms.push_back({a["lambda"].get<double>(), a["w"].get<double>()});
    }
  }
  std::optional<Density> density;
  if (j.contains("density") && !j["density"].is_null()) {
    const json& d = j["density"];
    if (!d.is_object() || !d.contains("kind") || !d["kind"].is_string()) {
      throw InvalidArgument("\"density\" needs a string \"kind\"");
    }
    const auto kind = d["kind"].get<std::string>();
    if (kind == "geometric") {
      if (!d.contains("mu") || !d["mu"].is_number()) {
        throw InvalidArgument("geometric density needs numeric \"mu\"");
      }
      GeometricDensity g{d["mu"].get<double>(), 1.0};
      if (d.contains("weight")) {
        if (!d["weight"].is_number()) throw InvalidArgument("\"weight\" must be numeric");
        g.weight = d["weight"].get<double>();
      }
      density = g;
    } else if (kind == "table") {
      if (!d.contains("values") || !d["values"].is_array()) {
        throw InvalidArgument("table density needs an array \"values\"");
      }
      TableDensity t;
      for (const json& v : d["values"]) {
        if (!v.is_number()) throw InvalidArgument("table density values must be numbers");
        t.values.push_back(v.get<double>());
      }
      density = std::move(t);
    } else {
      throw InvalidArgument("unknown density kind \"" + kind + "\"");
    }
  }
  int nodes = kDefaultQuadratureNodes;
  if (j.contains("nodes")) {
    if (!j["nodes"].is_number_integer()) throw InvalidArgument("\"nodes\" must be an integer");
    nodes = j["nodes"].get<int>();
  }
  return BorelMeasure(std::move(atoms), std::move(density), nodes);
}

BorelMeasure read_measure_file(const std::string& path) {
  return measure_from_json(read_json_file(path));
}

}  // namespace opmean
