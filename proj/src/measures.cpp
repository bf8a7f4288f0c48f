#include "constellation/measures.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "constellation/linalg.hpp"

namespace constellation {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(Complex v, double x) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream msg;
    msg << "non-finite integrand value at x = " << x;
    throw QuadratureError(msg.str());
  }
}

double line_half_width(const Measure& mu, const QuadratureRule& rule, int degree) {
  if (rule.truncation > 0.0) return rule.truncation;
  return gaussian_truncation(mu.kappa, std::max(degree, 0));
}

}  // namespace

Measure Measure::line(Complex phase, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("Measure::line: weight exponent must be positive");
  Measure m;
  m.domain = Domain::line;
  m.phase = phase;
  m.kappa = kappa;
  return m;
}

Measure Measure::circle(long twice_a, long twice_b) {
  Measure m;
  m.domain = Domain::circle;
  m.twice_a = twice_a;
  m.twice_b = twice_b;
  m.phase = m.circle_constant();
  return m;
}

Complex Measure::circle_constant() const {
  return std::polar(1.0, -std::numbers::pi * static_cast<double>(twice_a) / 4.0);
}

Complex Measure::density(double x) const {
  if (domain == Domain::line) return phase * std::exp(-kappa * x * x);
  return phase * std::polar(1.0, 0.5 * static_cast<double>(twice_frequency()) * x);
}

std::string Measure::describe() const {
  std::ostringstream out;
  if (domain == Domain::line) {
    out << "line phase=(" << phase.real() << ',' << phase.imag() << ") kappa=" << kappa;
  } else {
    out << "circle a=" << twice_a / 2.0 << " b=" << twice_b / 2.0;
    if (half_integer()) out << " half_integer_phase";
  }
  return out.str();
}

Complex minus_i_power(long p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

Complex integrate_1d(const std::function<Complex(double)>& f, const Measure& mu,
                     const QuadratureRule& rule, int degree) {
  switch (rule.kind) {
    case QuadratureRule::Kind::gauss_hermite: {
      if (mu.domain != Domain::line) {
        throw QuadratureError("integrate_1d: Gauss-Hermite applies only to line measures");
      }
      if (degree > rule.exact_degree()) {
        throw QuadratureError("integrate_1d: integrand degree " + std::to_string(degree) +
                              " exceeds the exactness " + std::to_string(rule.exact_degree()) +
                              " of the Gauss-Hermite rule");
      }
      const GaussRule& g = gauss_hermite(rule.nodes);
      const double s = 1.0 / std::sqrt(mu.kappa);
      Complex total{};
      for (int i = 0; i < g.size(); ++i) {
        const double x = g.nodes[i] * s;
        const Complex v = f(x);
        require_finite(v, x);
        total += g.weights[i] * v;
      }
      return mu.phase * s * total;
    }
    case QuadratureRule::Kind::composite_legendre: {
      const CompositeGrid grid = measure_grid(mu, rule, std::max(degree, 0));
      Complex total{};
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.nodes()[j];
        const Complex v = f(x) * mu.density(x);
        require_finite(v, x);
        total += grid.weights()[j] * v;
      }
      return total;
    }
    case QuadratureRule::Kind::exact_circular:
      throw QuadratureError("integrate_1d: exact circular rule needs a monomial integrand");
  }
  return {};
}

CompositeGrid measure_grid(const Measure& mu, const QuadratureRule& rule, int degree) {
  const int m = rule.points_per_panel > 1 ? rule.points_per_panel : 16;
  const int panels = std::max(rule.panels, 1);
  if (mu.domain == Domain::circle) return CompositeGrid(0.0, kTwoPi, panels, m);
  const double X = line_half_width(mu, rule, degree);
  return CompositeGrid(-X, X, panels, m);
}

Complex integrate_ordered_2d(const std::function<Complex(double, double)>& f, const Measure& mu1,
                             const Measure& mu2, const QuadratureRule& rule, int degree) {
  if (mu1.domain != mu2.domain) throw InvalidArgument("integrate_ordered_2d: domains differ");
  QuadratureRule r = rule;
  if (r.kind != QuadratureRule::Kind::composite_legendre) {
    r = QuadratureRule::composite(std::max(rule.panels, 32),
                                  rule.points_per_panel > 1 ? rule.points_per_panel : 16);
  }
  const double kappa = std::min(mu1.kappa, mu2.kappa);
  Measure widest = mu1;
  widest.kappa = kappa;
  const CompositeGrid grid = measure_grid(widest, r, degree);
  const double lower = grid.lower();
  const double panel_width = (grid.upper() - grid.lower()) / grid.panels();
  Complex total{};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x2 = grid.nodes()[j];
    const Complex inner = integrate_interval(
        [&](double x1) { return f(x1, x2) * mu1.density(x1); }, lower, x2, panel_width,
        grid.points_per_panel());
    const Complex v = inner * mu2.density(x2);
    require_finite(v, x2);
    total += grid.weights()[j] * v;
  }
  return total;
}

Complex circle_moment(long twice_m) {
  if (twice_m == 0) return {kTwoPi, 0.0};
  const double m = 0.5 * static_cast<double>(twice_m);
  // (e^{2 pi i m} - 1) / (i m); zero for integer m
  if (twice_m % 2 == 0) return {};
  const Complex e = std::polar(1.0, kTwoPi * m);
  return (e - 1.0) / Complex(0.0, m);
}

Complex circle_ordered_moment(long twice_a, long twice_b) {
  const Complex i(0.0, 1.0);
  const double b = 0.5 * static_cast<double>(twice_b);
  if (twice_a == 0) {
    if (twice_b == 0) return {2.0 * std::numbers::pi * std::numbers::pi, 0.0};
    return kTwoPi * std::polar(1.0, kTwoPi * b) / (i * b) - circle_moment(twice_b) / (i * b);
  }
  const double a = 0.5 * static_cast<double>(twice_a);
  return (circle_moment(twice_a + twice_b) - circle_moment(twice_b)) / (i * a);
}

Complex circular_exact_gamma_coefficient(const IndexSubset& t, long R, std::span<const double> y) {
  const int k = static_cast<int>(y.size());
  if (t.size() != k) throw DimensionMismatch("circular_exact_gamma_coefficient: |t| differs from K");
  if (t.index_sum() != R + k) return {};
  const auto idx = t.indices();
  SquareMatrix<Complex> a(k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) a(r, c) = std::pow(y[c], idx[r] - 1);
  }
  return kTwoPi * determinant(std::move(a));
}

}  // namespace constellation
