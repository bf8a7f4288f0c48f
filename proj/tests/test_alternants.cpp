#include <doctest.h>

#include <random>

#include "constellation/alternants.hpp"
#include "test_support.hpp"

using namespace constellation;
using test_support::rel_err;

namespace {

std::vector<double> scaled(const std::vector<double>& y0, double s) {
  std::vector<double> y;
  for (double v : y0) y.push_back(s * v);
  return y;
}

Complex delta_iy(const std::vector<double>& y, int power) {
  std::vector<Complex> v;
  for (double t : y) v.emplace_back(0.0, t);
  Complex d = weighted_vandermonde<Complex>(v);
  Complex out = 1.0;
  for (int p = 0; p < power; ++p) out *= d;
  return out;
}

}  // namespace

TEST_CASE("modified derivatives") {
  const Polynomial x5{0, 0, 0, 0, 0, 1};
  CHECK(modified_derivative(x5, 2) == Polynomial{0, 0, 0, 10});
  CHECK(modified_derivative(x5, 0) == x5);
  CHECK(modified_derivative(Polynomial{0, 0, 1}, 3).empty());
  CHECK_THROWS_AS(modified_derivative(x5, -1), InvalidArgument);
}

TEST_CASE("polynomial families") {
  const auto g = PolynomialFamily::monomials(5);
  CHECK(g.polynomial(4) == Polynomial{0, 0, 0, 1});
  const auto r = PolynomialFamily::random_monic(6, 42);
  for (int n = 1; n <= 6; ++n) {
    CHECK(r.polynomial(n).size() == static_cast<std::size_t>(n));
    CHECK(r.polynomial(n).back() == 1.0);
  }
  CHECK(r.resized(4).polynomial(3) == r.polynomial(3));
  CHECK_THROWS_AS(PolynomialFamily::from_coefficients({{1.0}, {2.0, 3.0}}), InvalidArgument);
}

TEST_CASE("modified Wronskians of monomials") {
  const auto g = PolynomialFamily::monomials(8);
  const Complex x(0.7, -0.2);
  CHECK(rel_err(wronskian(g, IndexSubset({1, 2}, 8), x), 1.0) < 1e-15);
  CHECK(rel_err(wronskian(g, IndexSubset({1, 2, 3, 4}, 8), x), 1.0) < 1e-15);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 4;
    const auto masks = k_subsets(8, k);
    const auto t = IndexSubset::from_mask(masks[rng() % masks.size()], 8);
    CHECK(rel_err(wronskian(g, t, x), monomial_wronskian(t, x)) < 1e-12);
  }
}

TEST_CASE("proto-Wronskians") {
  const auto g = PolynomialFamily::monomials(6);
  const auto r = PolynomialFamily::random_monic(6, 7);
  const std::vector<double> y1{0.4};
  CHECK(rel_err(proto_wronskian(r, IndexSubset({5}, 6), 0.3, y1),
                evaluate(r.polynomial(5), Complex(0.3, 0.4))) < 1e-14);
  const std::vector<double> y{0.0, 0.5, 1.3};
  for (double x : {-1.0, 0.0, 2.5}) {
    CHECK(rel_err(proto_wronskian(g, IndexSubset({1, 2, 3}, 6), x, y), delta_iy(y, 1)) < 1e-12);
  }
}

TEST_CASE("collapsing lines turns proto-Wronskians into Wronskians") {
  const auto r = PolynomialFamily::random_monic(9, 3);
  const std::vector<double> y0{0.0, 1.0, 2.0};
  const double x = 0.35;
  const IndexSubset t({2, 4, 5}, 9);
  double previous = 1e300;
  for (double s : {1e-2, 1e-3}) {
    const auto y = scaled(y0, s);
    const double err = rel_err(proto_wronskian(r, t, x, y) / delta_iy(y, 1), wronskian(r, t, x));
    CHECK(err < 10 * s);
    CHECK(err < previous);
    previous = err;
  }
  // Wr (x) Pr with L = 2, K = 2
  const IndexSubset t4({1, 3, 4, 6}, 9);
  const std::vector<double> y2{0.0, 1.0};
  previous = 1e300;
  for (double s : {1e-1, 1e-2, 1e-3}) {
    const auto y = scaled(y2, s);
    const double err = rel_err(wr_pr(r, t4, x, y, 2) / delta_iy(y, 4), wronskian(r, t4, x));
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("Wr (x) Pr block layout") {
  const auto g = PolynomialFamily::monomials(6);
  const std::vector<Complex> y{0.3, 1.1};
  const std::vector<int> shape{3, 3};
  const Complex x(0.8, 0.0);
  const auto cols = line_columns<Complex>(x, y, shape);
  REQUIRE(cols.size() == 6);
  const Complex z1 = x + Complex(0, 0.3), z2 = x + Complex(0, 1.1);
  // row for x^5: (z1^5, 5 z1^4, 10 z1^3, z2^5, 5 z2^4, 10 z2^3)
  const Complex expected[6] = {std::pow(z1, 5), 5.0 * std::pow(z1, 4), 10.0 * std::pow(z1, 3),
                               std::pow(z2, 5), 5.0 * std::pow(z2, 4), 10.0 * std::pow(z2, 3)};
  for (int c = 0; c < 6; ++c) CHECK(rel_err(g.value(6, cols[c].l, cols[c].z), expected[c]) < 1e-14);
  // row for x^2: (z1^2, 2 z1, 1, z2^2, 2 z2, 1)
  CHECK(rel_err(g.value(3, cols[1].l, cols[1].z), 2.0 * z1) < 1e-15);
  CHECK(g.value(3, cols[5].l, cols[5].z) == Complex(1.0));
}

TEST_CASE("block determinants reduce to their special cases") {
  const auto r = PolynomialFamily::random_monic(8, 19);
  const std::vector<double> y{0.2, 0.9};
  const IndexSubset t({1, 4}, 8);
  CHECK(rel_err(wr_pr(r, t, 0.4, y, 1), proto_wronskian(r, t, 0.4, y)) < 1e-14);
  const IndexSubset t6({1, 2, 4, 5, 7, 8}, 8);
  const std::vector<int> eq{3, 3};
  CHECK(rel_err(wr_shape_pr(r, t6, 0.4, y, eq), wr_pr(r, t6, 0.4, y, 3)) < 1e-14);
  const std::vector<double> y1{0.0};
  const std::vector<int> single{3};
  const IndexSubset t3({2, 3, 7}, 8);
  CHECK(rel_err(wr_shape_pr(r, t3, 0.4, y1, single), wronskian(r, t3, 0.4)) < 1e-12);
  CHECK_THROWS_AS(wr_pr(r, t3, 0.4, y, 2), DimensionMismatch);
}

TEST_CASE("shaped Wr (x) Pr collapses to the Wronskian") {
  const auto r = PolynomialFamily::random_monic(7, 5);
  const std::vector<int> shape{1, 2};
  const IndexSubset t({1, 3, 6}, 7);
  const double x = -0.6;
  double previous = 1e300;
  for (double s : {1e-1, 1e-2, 1e-3}) {
    const std::vector<double> y{0.0, s};
    std::vector<Complex> iy{Complex(0, 0), Complex(0, s)};
    const Complex norm = weighted_vandermonde<Complex>(iy, shape);
    const double err = rel_err(wr_shape_pr(r, t, x, y, shape) / norm, wronskian(r, t, x));
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("circular alternants against the monomial closed form") {
  const auto g = PolynomialFamily::monomials(10);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586), radius(0.2, 1.6);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 3;
    const auto masks = k_subsets(10, k);
    const auto t = IndexSubset::from_mask(masks[rng() % masks.size()], 10);
    std::vector<double> y;
    for (int j = 0; j < k; ++j) y.push_back(radius(rng));
    std::sort(y.begin(), y.end());
    const double x = angle(rng);
    CHECK(rel_err(cr(g, t, x, y), monomial_cr(t, x, y)) < 1e-11);
  }
  const auto r = PolynomialFamily::random_monic(4, 9);
  const std::vector<double> y1{0.7};
  CHECK(rel_err(cr(r, IndexSubset({3}, 4), 1.2, y1),
                evaluate(r.polynomial(3), 0.7 * std::polar(1.0, 1.2))) < 1e-14);
}

TEST_CASE("confluent Vandermonde determinants") {
  const Shape s11({1, 1});
  const std::vector<Complex> x2{Complex(0.3, 0.1), Complex(-1.2, 0.4)};
  CHECK(rel_err(confluent_vandermonde_det(PolynomialFamily::monomials(2), s11, x2), x2[1] - x2[0]) <
        1e-14);
  const Shape s22({2, 2});
  const auto r4 = PolynomialFamily::random_monic(4, 2);
  CHECK(rel_err(confluent_vandermonde_det(r4, s22, x2), std::pow(x2[1] - x2[0], 4)) < 1e-10);

  // shape (2,3,1) in (a,b,c): six rows, column blocks (a, D a), (b, D b, D^2 b), (c)
  const Shape s231({2, 3, 1});
  const std::vector<Complex> abc{2.0, 3.0, 5.0};
  const auto m = confluent_vandermonde_matrix(PolynomialFamily::monomials(6), s231, abc);
  CHECK(m.size() == 6);
  CHECK(m(0, 0) == Complex(1.0));
  CHECK(m(0, 1) == Complex(0.0));
  CHECK(m(1, 1) == Complex(1.0));
  CHECK(m(5, 1) == Complex(5.0 * 16.0));
  CHECK(m(5, 4) == Complex(10.0 * 27.0));
  CHECK(m(3, 5) == Complex(125.0));
  CHECK(rel_err(determinant(m), confluent_vandermonde_product(s231, abc)) < 1e-12);
  CHECK(confluent_vandermonde_product(s22, std::vector<Complex>{1.0, 1.0}) == Complex{});
}

TEST_CASE("forward differences") {
  CHECK(forward_difference_check(Polynomial{0, 0, 1}, 2, 0.75, 0.5) == Complex(2.0));
  const Complex d3 = forward_difference_check(Polynomial{0, 0, 0, 0, 0, 1}, 3, 1.0, 1e-4);
  CHECK(std::abs(d3 - 60.0) / 60.0 < 1e-3);
  CHECK(forward_difference_check(Polynomial{1, 2}, 0, 3.0, 0.1) == Complex(7.0));
  CHECK_THROWS_AS(forward_difference_check(Polynomial{1}, 1, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("proto-confluent ratios converge to the confluent determinant") {
  const Shape shape({2, 1, 2});
  const std::vector<Complex> x{-0.7, 0.2, 1.1};
  const Complex target = confluent_vandermonde_product(shape, x);
  double previous = 1e300;
  for (double h : {1e-1, 1e-2, 1e-3}) {
    const double err = rel_err(proto_confluent_ratio<Complex>(shape, x, h), target);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-2);
}
