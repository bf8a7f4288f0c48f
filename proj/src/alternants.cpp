#include "constellation/alternants.hpp"

#include <cmath>
#include <numeric>

namespace constellation {
namespace {

std::vector<Complex> as_complex(std::span<const double> v) {
  return {v.begin(), v.end()};
}

void require_size(const IndexSubset& t, int expected, const char* what) {
  if (t.size() != expected) {
    throw DimensionMismatch(std::string(what) + ": |t| = " + std::to_string(t.size()) +
                            " but the block needs " + std::to_string(expected) + " rows");
  }
}

}  // namespace

Shape::Shape(std::vector<int> charges) : L(std::move(charges)) {
  for (int l : L) {
    if (l < 1) throw InvalidArgument("Shape: charges must be positive");
  }
}

int Shape::R1() const { return std::accumulate(L.begin(), L.end(), 0); }

long Shape::R2() const {
  long r = 0;
  for (std::size_t j = 0; j < L.size(); ++j) {
    for (std::size_t k = j + 1; k < L.size(); ++k) r += static_cast<long>(L[j]) * L[k];
  }
  return r;
}

long Shape::R3() const {
  const long r1 = R1();
  return r1 * r1;
}

Complex wronskian(const PolynomialFamily& fam, const IndexSubset& t, Complex x) {
  const auto rows = t.indices();
  std::vector<Column<Complex>> cols;
  for (int l = 0; l < t.size(); ++l) cols.push_back({x, l});
  return alternant_minor<Complex>(fam, rows, cols);
}

Complex proto_wronskian(const PolynomialFamily& fam, const IndexSubset& t, double x,
                        std::span<const double> y) {
  require_size(t, static_cast<int>(y.size()), "proto_wronskian");
  const std::vector<int> shape(y.size(), 1);
  return wr_shape_pr(fam, t, x, y, shape);
}

Complex wr_pr(const PolynomialFamily& fam, const IndexSubset& t, double x,
              std::span<const double> y, int L) {
  const std::vector<int> shape(y.size(), L);
  return wr_shape_pr(fam, t, x, y, shape);
}

Complex wr_shape_pr(const PolynomialFamily& fam, const IndexSubset& t, double x,
                    std::span<const double> y, std::span<const int> shape) {
  require_size(t, std::accumulate(shape.begin(), shape.end(), 0), "wr_shape_pr");
  const auto yc = as_complex(y);
  const auto rows = t.indices();
  return wr_shape_pr_generic<Complex>(fam, rows, Complex(x, 0.0), yc, shape);
}

Complex cr(const PolynomialFamily& fam, const IndexSubset& t, double x, std::span<const double> y) {
  const std::vector<int> shape(y.size(), 1);
  return wr_shape_cr(fam, t, x, y, shape);
}

Complex wr_shape_cr(const PolynomialFamily& fam, const IndexSubset& t, double x,
                    std::span<const double> y, std::span<const int> shape) {
  require_size(t, std::accumulate(shape.begin(), shape.end(), 0), "wr_shape_cr");
  const auto yc = as_complex(y);
  const auto rows = t.indices();
  return wr_shape_cr_generic<Complex>(fam, rows, Complex(x, 0.0), yc, shape);
}

Complex monomial_wronskian(const IndexSubset& t, Complex x) {
  const auto idx = t.indices();
  const int k = static_cast<int>(idx.size());
  double ratio = 1.0;
  int power = 0;
  for (int a = 0; a < k; ++a) {
    power += idx[a] - (a + 1);
    for (int b = a + 1; b < k; ++b) ratio *= static_cast<double>(idx[b] - idx[a]) / (b - a);
  }
  return ratio * ipow(x, power);
}

Complex monomial_cr(const IndexSubset& t, double x, std::span<const double> y) {
  const auto idx = t.indices();
  const int k = static_cast<int>(idx.size());
  if (static_cast<int>(y.size()) != k) throw DimensionMismatch("monomial_cr: |y| differs from |t|");
  SquareMatrix<Complex> a(k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) a(r, c) = std::pow(y[c], idx[r] - 1);
  }
  const int power = t.index_sum() - k;
  return determinant(std::move(a)) * std::polar(1.0, power * x);
}

SquareMatrix<Complex> confluent_vandermonde_matrix(const PolynomialFamily& fam, const Shape& shape,
                                                   std::span<const Complex> x) {
  if (static_cast<int>(x.size()) != shape.count()) {
    throw DimensionMismatch("confluent_vandermonde_matrix: |x| differs from shape length");
  }
  const int n = shape.R1();
  if (fam.size() != n) {
    throw DimensionMismatch("confluent_vandermonde_matrix: family size must equal sum of shape");
  }
  SquareMatrix<Complex> a(n);
  int col = 0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (int l = 0; l < shape.L[m]; ++l, ++col) {
      for (int r = 0; r < n; ++r) a(r, col) = fam.value(r + 1, l, x[m]);
    }
  }
  return a;
}

Complex confluent_vandermonde_det(const PolynomialFamily& fam, const Shape& shape,
                                  std::span<const Complex> x) {
  return determinant(confluent_vandermonde_matrix(fam, shape, x));
}

Complex confluent_vandermonde_product(const Shape& shape, std::span<const Complex> x) {
  if (static_cast<int>(x.size()) != shape.count()) {
    throw DimensionMismatch("confluent_vandermonde_product: |x| differs from shape length");
  }
  return weighted_vandermonde<Complex>(x, shape.L);
}

Complex forward_difference_check(const Polynomial& f, int n, Complex x, double h) {
  if (n < 0) throw InvalidArgument("forward_difference_check: n must be nonnegative");
  if (h == 0.0) throw InvalidArgument("forward_difference_check: h must be nonzero");
  Complex total{};
  for (int k = 0; k <= n; ++k) {
    const double sign = (k % 2) ? -1.0 : 1.0;
    total += sign * binomial(n, k) * evaluate(f, x + static_cast<double>(n - k) * h);
  }
  return total / std::pow(h, n);
}

}  // namespace constellation
