#pragma once

// Complex measures on the line and the circle, and the 1D / ordered 2D
// quadratures applied to alternant minors against them.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "constellation/index_subset.hpp"
#include "constellation/quadrature.hpp"

namespace constellation {

enum class Domain { line, circle };

/// Line: dmu = phase * e^{-kappa x^2} dx.
/// Circle: dmu = (-i e^{-ix})^a (e^{-ix})^b dx with a, b stored doubled so
/// that half-integer powers are representable. Fractional powers use the
/// branch continuous in x with (-i)^a = e^{-i pi a / 2}.
struct Measure {
  Domain domain = Domain::line;
  Complex phase{1.0, 0.0};
  double kappa = 0.5;
  long twice_a = 0;
  long twice_b = 0;

  static Measure line(Complex phase, double kappa);
  static Measure circle(long twice_a, long twice_b);

  bool half_integer() const { return domain == Domain::circle && ((twice_a + twice_b) % 2 != 0); }
  /// Circle: dmu = constant * e^{i f x} dx with f = -(a + b); returns 2f.
  long twice_frequency() const { return -(twice_a + twice_b); }
  /// Circle: the x-independent factor e^{-i pi a / 2}.
  Complex circle_constant() const;
  /// Density relative to dx at x.
  Complex density(double x) const;

  std::string describe() const;
};

/// (-i)^p for integer p.
Complex minus_i_power(long p);

struct QuadratureRule {
  enum class Kind { gauss_hermite, composite_legendre, exact_circular };
  Kind kind = Kind::gauss_hermite;
  int nodes = 20;             // Gauss-Hermite points
  int panels = 32;            // composite panels
  int points_per_panel = 16;  // composite points per panel
  double truncation = 0.0;    // composite line half-width; 0 picks from kappa

  static QuadratureRule hermite(int n) { return {Kind::gauss_hermite, n, 0, 0, 0.0}; }
  static QuadratureRule composite(int panels, int m, double truncation = 0.0) {
    return {Kind::composite_legendre, 0, panels, m, truncation};
  }
  /// Largest polynomial degree integrated exactly against the Gaussian.
  int exact_degree() const { return kind == Kind::gauss_hermite ? 2 * nodes - 1 : -1; }
};

/// int f dmu. For Gauss-Hermite, `degree` (when >= 0) is the polynomial
/// degree of f and must not exceed the rule's exactness.
Complex integrate_1d(const std::function<Complex(double)>& f, const Measure& mu,
                     const QuadratureRule& rule, int degree = -1);

/// Integration grid used for ordered double integrals on mu's domain.
CompositeGrid measure_grid(const Measure& mu, const QuadratureRule& rule, int degree = 0);

/// int int_{x1 < x2} f(x1, x2) dmu1(x1) dmu2(x2), by nesting: outer composite
/// nodes x2, inner composite rule on (lower end, x2).
Complex integrate_ordered_2d(const std::function<Complex(double, double)>& f, const Measure& mu1,
                             const Measure& mu2, const QuadratureRule& rule, int degree = 0);

/// int_0^{2 pi} e^{i m x} dx for m = twice_m / 2.
Complex circle_moment(long twice_m);
/// int int_{0 < x1 < x2 < 2 pi} e^{i a x1} e^{i b x2} dx1 dx2, a and b doubled.
Complex circle_ordered_moment(long twice_a, long twice_b);

/// Monomial family on circles of radii y with net dmu exponent R:
/// 2 pi det[y_k^{t(j)-1}] when sum t = R + K, otherwise exactly 0.
Complex circular_exact_gamma_coefficient(const IndexSubset& t, long R, std::span<const double> y);

}  // namespace constellation
