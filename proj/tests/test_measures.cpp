#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "constellation/alternants.hpp"
#include "constellation/measures.hpp"
#include "test_support.hpp"

using namespace constellation;
using test_support::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Gauss-Hermite integrates x^2 e^{-x^2}") {
  const Measure mu = Measure::line(1.0, 1.0);
  const Complex v = integrate_1d([](double x) { return Complex(x * x); }, mu, QuadratureRule::hermite(20), 2);
  CHECK(rel_err(v, std::sqrt(kPi) / 2) < 1e-12);
}

TEST_CASE("Gauss-Hermite exactness against Gaussian moments") {
  for (int n : {4, 10, 25}) {
    const GaussRule& g = gauss_hermite(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0, mass = 0.0;
      for (int i = 0; i < n; ++i) {
        s += g.weights[i] * std::pow(g.nodes[i], k);
        mass += g.weights[i] * std::abs(std::pow(g.nodes[i], k));
      }
      const double exact = (k % 2) ? 0.0 : std::tgamma((k + 1) / 2.0);
      CHECK(std::abs(s - exact) <= 1e-12 * mass);
    }
  }
}

TEST_CASE("Gauss-Legendre exactness") {
  const GaussRule& g = gauss_legendre(12);
  for (int k = 0; k <= 23; ++k) {
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    CHECK(std::abs(s - ((k % 2) ? 0.0 : 2.0 / (k + 1))) < 1e-14);
  }
}

TEST_CASE("integrate_1d reports degree overflow and non-finite values") {
  const Measure mu = Measure::line(1.0, 0.5);
  CHECK_THROWS_AS(integrate_1d([](double) { return Complex(1.0); }, mu, QuadratureRule::hermite(3), 6),
                  QuadratureError);
  CHECK_THROWS_AS(integrate_1d([](double) { return Complex(NAN); }, mu, QuadratureRule::hermite(3), 0),
                  QuadratureError);
}

TEST_CASE("composite rule on the line and running integrals") {
  const Measure mu = Measure::line(Complex(0, -1), 0.5);
  const Complex gh = integrate_1d([](double x) { return Complex(x * x * x * x); }, mu,
                                  QuadratureRule::hermite(6), 4);
  const Complex gl = integrate_1d([](double x) { return Complex(x * x * x * x); }, mu,
                                  QuadratureRule::composite(24, 16), 4);
  CHECK(rel_err(gh, Complex(0, -3.0 * std::sqrt(2 * kPi))) < 1e-12);
  CHECK(rel_err(gl, gh) < 1e-12);

  const CompositeGrid grid(-1.0, 2.0, 5, 12);
  std::vector<Complex> f;
  for (double x : grid.nodes()) f.emplace_back(std::cos(x), x * x);
  const auto run = grid.running_integral(f);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.nodes()[j];
    const Complex exact(std::sin(x) - std::sin(-1.0), (x * x * x + 1.0) / 3.0);
    CHECK(std::abs(run[j] - exact) < 1e-13);
  }
}

TEST_CASE("circle moments") {
  CHECK(rel_err(circle_moment(0), 2 * kPi) < 1e-15);
  for (long m : {-6, -2, 2, 4, 10}) CHECK(circle_moment(m) == Complex{});
  const Measure flat = Measure::circle(0, 0);
  CHECK(rel_err(integrate_1d([](double) { return Complex(1.0); }, flat, QuadratureRule::composite(8, 16)),
                2 * kPi) < 1e-14);
  for (int m : {1, 3, -2}) {
    const Complex v = integrate_1d([m](double x) { return std::polar(1.0, m * x); }, flat,
                                   QuadratureRule::composite(8, 16));
    CHECK(std::abs(v) < 1e-13);
  }
  // half-integer frequency: int_0^{2pi} e^{ix/2} dx = 4i
  CHECK(std::abs(circle_moment(1) - Complex(0, 4)) < 1e-14);
}

TEST_CASE("ordered double integrals on the line") {
  const Measure mu = Measure::line(1.0, 1.0);
  const QuadratureRule rule = QuadratureRule::composite(32, 16);
  const Complex sym = integrate_ordered_2d([](double, double) { return Complex(1.0); }, mu, mu, rule);
  CHECK(rel_err(sym, kPi / 2) < 1e-10);
  const Complex gap = integrate_ordered_2d([](double a, double b) { return Complex(b - a); }, mu, mu, rule, 1);
  CHECK(rel_err(gap, std::sqrt(kPi / 2)) < 1e-10);

  // ordered + swapped = full product integral
  const Measure nu = Measure::line(Complex(0, 1), 0.5);
  auto f = [](double a, double b) { return Complex(a * a * b + 0.3, a - 2 * b); };
  auto g = [&](double a, double b) { return f(b, a); };
  const Complex split = integrate_ordered_2d(f, mu, nu, rule, 3) + integrate_ordered_2d(g, nu, mu, rule, 3);
  const Complex full = integrate_1d([&](double a) {
    return integrate_1d([&](double b) { return f(a, b); }, nu, QuadratureRule::hermite(10), 3);
  }, mu, QuadratureRule::hermite(10), 3);
  CHECK(rel_err(split, full) < 1e-8);
}

TEST_CASE("ordered double integrals on the circle") {
  const Measure flat = Measure::circle(0, 0);
  // full square vanishes, ordered region does not
  auto f = [](double a, double b) { return std::polar(1.0, a - b); };
  const Complex numeric = integrate_ordered_2d(f, flat, flat, QuadratureRule::composite(16, 16));
  const Complex exact = circle_ordered_moment(2, -2);
  CHECK(std::abs(exact) > 1.0);
  CHECK(std::abs(numeric - exact) < 1e-10);
  // dense trapezoid grid, ordered cells weighted by 1/2 on the diagonal
  const int n = 2048;
  const double h = 2 * kPi / n;
  Complex trap{};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) trap += (i == j ? 0.5 : 1.0) * f(i * h, j * h);
  }
  trap *= h * h;
  CHECK(std::abs(trap - exact) < 1e-2);
  for (long a : {0L, 1L, 3L, -2L}) {
    for (long b : {0L, 2L, -1L, 5L}) {
      auto e = [a, b](double x1, double x2) { return std::polar(1.0, 0.5 * (a * x1 + b * x2)); };
      const Complex q = integrate_ordered_2d(e, flat, flat, QuadratureRule::composite(16, 16));
      CHECK(std::abs(q - circle_ordered_moment(a, b)) < 1e-10);
    }
  }
}

TEST_CASE("circular selection rule for gamma coefficients") {
  const std::vector<double> y2{0.5, 1.5};
  CHECK(circular_exact_gamma_coefficient(IndexSubset({1, 4}, 6), 1, y2) == Complex{});
  CHECK(rel_err(circular_exact_gamma_coefficient(IndexSubset({1, 3}, 6), 2, y2),
                2 * kPi * (y2[1] * y2[1] - y2[0] * y2[0])) < 1e-14);
  const std::vector<double> y1{0.8};
  CHECK(rel_err(circular_exact_gamma_coefficient(IndexSubset({1}, 3), 0, y1), 2 * kPi) < 1e-15);
}

TEST_CASE("exact circular coefficients equal numeric circular quadrature") {
  const auto g = PolynomialFamily::monomials(8);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> radius(0.3, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 3;
    const auto masks = k_subsets(8, k);
    const auto t = IndexSubset::from_mask(masks[rng() % masks.size()], 8);
    std::vector<double> y;
    for (int j = 0; j < k; ++j) y.push_back(radius(rng));
    std::sort(y.begin(), y.end());
    const long R = (trial % 2) ? t.index_sum() - k : static_cast<long>(rng() % 12);
    const Measure mu = Measure::circle(0, 2 * R);
    const Complex numeric = integrate_1d([&](double x) { return cr(g, t, x, y); }, mu,
                                         QuadratureRule::composite(8, 16));
    CHECK(std::abs(numeric - circular_exact_gamma_coefficient(t, R, y)) < 1e-9);
  }
}

TEST_CASE("Gaussian truncation radius") {
  const double X = gaussian_truncation(1.0, 0);
  CHECK(std::exp(-X * X) < 1e-18);
  CHECK(X < 8.0);
  const double Xd = gaussian_truncation(0.5, 20);
  CHECK(Xd > X);
}
