#pragma once

// Determinant kernels: modified Wronskians, proto-Wronskians, their line and
// circle block versions, and confluent Vandermonde matrices.

#include <complex>
#include <span>
#include <vector>

#include "constellation/index_subset.hpp"
#include "constellation/linalg.hpp"
#include "constellation/polynomial.hpp"

namespace constellation {

using Complex = std::complex<double>;

/// Charge shape (L_1..L_K); R1 = sum L_k, R2 = sum_{j<k} L_j L_k,
/// R3 = sum_{j,k} L_j L_k.
struct Shape {
  std::vector<int> L;

  Shape() = default;
  explicit Shape(std::vector<int> charges);
  static Shape uniform(int charge, int count) { return Shape(std::vector<int>(count, charge)); }

  int count() const { return static_cast<int>(L.size()); }
  int R1() const;
  long R2() const;
  long R3() const;
};

/// One alternant column: D^l applied to every row polynomial, evaluated at z.
template <class C>
struct Column {
  C z;
  int l;
};

/// det[D^{l_c} p_{rows[r]}(z_c)]; rows are 1-based family indices.
template <class C>
C alternant_minor(const PolynomialFamily& fam, std::span<const int> rows,
                  std::span<const Column<C>> cols) {
  const int n = static_cast<int>(rows.size());
  if (static_cast<int>(cols.size()) != n) {
    throw DimensionMismatch("alternant_minor: row and column counts differ");
  }
  SquareMatrix<C> a(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = fam.value(rows[r], cols[c].l, cols[c].z);
  }
  return determinant(std::move(a));
}

/// Columns (line k major, derivative l < L_k) at z_k = x + i y_k.
template <class C>
std::vector<Column<C>> line_columns(const C& x, std::span<const C> y, std::span<const int> shape) {
  if (y.size() != shape.size()) throw DimensionMismatch("line_columns: |y| differs from shape");
  std::vector<Column<C>> cols;
  const C i(0, 1);
  for (std::size_t k = 0; k < y.size(); ++k) {
    for (int l = 0; l < shape[k]; ++l) cols.push_back({x + i * y[k], l});
  }
  return cols;
}

/// Columns at z_k = y_k e^{i x} on circles of radius y_k.
template <class C>
std::vector<Column<C>> circle_columns(const C& x, std::span<const C> y,
                                      std::span<const int> shape) {
  using std::exp;
  if (y.size() != shape.size()) throw DimensionMismatch("circle_columns: |y| differs from shape");
  std::vector<Column<C>> cols;
  const C rot = exp(C(0, 1) * x);
  for (std::size_t k = 0; k < y.size(); ++k) {
    for (int l = 0; l < shape[k]; ++l) cols.push_back({y[k] * rot, l});
  }
  return cols;
}

/// Wr^{L}(x) ⊗ Pr_y in any complex precision.
template <class C>
C wr_shape_pr_generic(const PolynomialFamily& fam, std::span<const int> rows, const C& x,
                      std::span<const C> y, std::span<const int> shape) {
  const auto cols = line_columns<C>(x, y, shape);
  return alternant_minor<C>(fam, rows, cols);
}

template <class C>
C wr_shape_cr_generic(const PolynomialFamily& fam, std::span<const int> rows, const C& x,
                      std::span<const C> y, std::span<const int> shape) {
  const auto cols = circle_columns<C>(x, y, shape);
  return alternant_minor<C>(fam, rows, cols);
}

/// prod_{j<k} (v_k - v_j)^{w_j w_k}; unit weights when `weights` is empty.
template <class C>
C weighted_vandermonde(std::span<const C> v, std::span<const int> weights = {}) {
  C prod(1);
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::size_t k = j + 1; k < v.size(); ++k) {
      const int e = weights.empty() ? 1 : weights[j] * weights[k];
      const C d = v[k] - v[j];
      for (int p = 0; p < e; ++p) prod *= d;
    }
  }
  return prod;
}

// --- double-precision kernels -------------------------------------------

/// det[D^{l-1} p_{t(r)}(x)]_{r,l=1..|t|}.
Complex wronskian(const PolynomialFamily& fam, const IndexSubset& t, Complex x);
/// det[p_{t(r)}(x + i y_k)].
Complex proto_wronskian(const PolynomialFamily& fam, const IndexSubset& t, double x,
                        std::span<const double> y);
/// Equal-charge block version, |t| = L K.
Complex wr_pr(const PolynomialFamily& fam, const IndexSubset& t, double x,
              std::span<const double> y, int L);
/// Block version with L_k derivative columns on line k, |t| = sum L_k.
Complex wr_shape_pr(const PolynomialFamily& fam, const IndexSubset& t, double x,
                    std::span<const double> y, std::span<const int> shape);
/// det[p_{t(r)}(y_k e^{ix})].
Complex cr(const PolynomialFamily& fam, const IndexSubset& t, double x, std::span<const double> y);
Complex wr_shape_cr(const PolynomialFamily& fam, const IndexSubset& t, double x,
                    std::span<const double> y, std::span<const int> shape);

/// Closed forms for the monomial family.
Complex monomial_wronskian(const IndexSubset& t, Complex x);
Complex monomial_cr(const IndexSubset& t, double x, std::span<const double> y);

/// N x N confluent Vandermonde matrix: row n, columns (m, l < L_m) hold
/// D^l p_n(x_m). The family must have exactly N = sum L_m members.
SquareMatrix<Complex> confluent_vandermonde_matrix(const PolynomialFamily& fam, const Shape& shape,
                                                   std::span<const Complex> x);
Complex confluent_vandermonde_det(const PolynomialFamily& fam, const Shape& shape,
                                  std::span<const Complex> x);
/// prod_{n<m} (x_m - x_n)^{L_m L_n}.
Complex confluent_vandermonde_product(const Shape& shape, std::span<const Complex> x);

/// Ordinary Vandermonde of the translated points x_m + h j (j = 1..L_m),
/// divided by prod_m Vandermonde(h, 2h, .., L_m h). Tends to the confluent
/// determinant as h -> 0.
template <class C>
C proto_confluent_ratio(const Shape& shape, std::span<const C> x, const C& h) {
  std::vector<C> pts;
  C norm(1);
  for (std::size_t m = 0; m < x.size(); ++m) {
    std::vector<C> local;
    for (int j = 1; j <= shape.L[m]; ++j) {
      pts.push_back(x[m] + h * C(j));
      local.push_back(h * C(j));
    }
    norm *= weighted_vandermonde<C>(local);
  }
  return weighted_vandermonde<C>(pts) / norm;
}

/// nabla_h^n[f](x) / h^n with nabla_h^n[f](x) = sum_k (-1)^k C(n,k) f(x + (n-k) h).
Complex forward_difference_check(const Polynomial& f, int n, Complex x, double h);

}  // namespace constellation
