#pragma once

// Dense square matrices and LU determinants, generic over the scalar type so
// that limit checks can run in extended precision.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "constellation/errors.hpp"

namespace constellation {

template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, T(0)) {}

  int size() const { return n_; }
  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * n_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * n_ + c]; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

namespace detail {
template <class T>
auto magnitude(const T& v) {
  using std::abs;
  return abs(v);
}
}  // namespace detail

/// Determinant by LU with partial pivoting.
template <class T>
T determinant(SquareMatrix<T> a) {
  const int n = a.size();
  T det(1);
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    auto best = detail::magnitude(a(k, k));
    for (int r = k + 1; r < n; ++r) {
      auto m = detail::magnitude(a(r, k));
      if (m > best) {
        best = m;
        pivot = r;
      }
    }
    if (best == 0) return T(0);
    if (pivot != k) {
      for (int c = k; c < n; ++c) std::swap(a(k, c), a(pivot, c));
      det = -det;
    }
    const T diag = a(k, k);
    det *= diag;
    for (int r = k + 1; r < n; ++r) {
      const T factor = a(r, k) / diag;
      if (factor == T(0)) continue;
      for (int c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  return det;
}

}  // namespace constellation
