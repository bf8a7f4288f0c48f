#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "constellation/errors.hpp"

namespace constellation {

/// Real coefficients in ascending powers.
using Polynomial = std::vector<double>;

/// C(n, k) from a Pascal table for 0 <= k <= n <= 64.
double binomial(int n, int k);

/// D^l p = (1/l!) d^l p / dx^l.
Polynomial modified_derivative(const Polynomial& p, int l);

/// base^e for e >= 0 by repeated squaring; 0^0 = 1.
template <class T>
T ipow(T base, int e) {
  T result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Horner evaluation at a real or complex point of any precision.
template <class T>
T evaluate(const Polynomial& p, const T& z) {
  T acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + T(*it);
  return acc;
}

/// Complete N-family of monic polynomials p_1..p_N with deg p_n = n - 1.
/// Modified derivatives of every member are tabulated at construction.
class PolynomialFamily {
 public:
  enum class Kind { monomial, random_monic, explicit_coeffs };

  PolynomialFamily() = default;

  /// g_n(x) = x^{n-1}.
  static PolynomialFamily monomials(int n);
  /// Monic with lower coefficients uniform in [-scale, scale], rounded to multiples of 2^-24.
  static PolynomialFamily random_monic(int n, std::uint64_t seed, double scale = 1.0);
  /// coeffs[n-1] must have length n and leading coefficient 1.
  static PolynomialFamily from_coefficients(std::vector<Polynomial> coeffs);

  int size() const { return static_cast<int>(polys_.size()); }
  Kind kind() const { return kind_; }
  bool is_monomial() const { return kind_ == Kind::monomial; }

  /// p_n, 1-based.
  const Polynomial& polynomial(int n) const;
  /// D^l p_n (empty polynomial once l exceeds the degree).
  const Polynomial& derivative(int n, int l) const;

  template <class T>
  T value(int n, int l, const T& z) const {
    return evaluate(derivative(n, l), z);
  }

  /// Same kind and seed, extended or truncated to n members. Monomial and
  /// random families are prefix-stable, so their first members are unchanged.
  PolynomialFamily resized(int n) const;

 private:
  void tabulate();

  Kind kind_ = Kind::monomial;
  std::uint64_t seed_ = 0;
  double scale_ = 1.0;
  std::vector<Polynomial> polys_;
  std::vector<std::vector<Polynomial>> derivs_;  // derivs_[n-1][l]
};

}  // namespace constellation
