#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "constellation/form.hpp"

namespace test_support {

using constellation::Complex;
using constellation::Form;
using constellation::Mask;
using Rational = boost::multiprecision::cpp_rational;
using RationalForm = constellation::BasicForm<Rational>;

inline double rel_err(Complex a, Complex b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Sign of the permutation that sorts `seq` (0 if any entry repeats).
inline int sort_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) sign = -sign;
    }
  }
  return sign;
}

template <class Scalar, class Gen>
constellation::BasicForm<Scalar> random_homogeneous(int n, int grade, int terms, Gen& coeff,
                                                    std::mt19937_64& rng) {
  std::vector<typename constellation::BasicForm<Scalar>::Term> out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i + 1;
  for (int k = 0; k < terms; ++k) {
    std::shuffle(idx.begin(), idx.end(), rng);
    Mask m = 0;
    for (int j = 0; j < grade; ++j) m |= constellation::bit_of(idx[j]);
    out.push_back({m, coeff()});
  }
  return constellation::BasicForm<Scalar>::from_terms(n, std::move(out));
}

inline RationalForm random_rational_form(int n, int grade, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  auto coeff = [&] { return Rational(num(rng), den(rng)); };
  return random_homogeneous<Rational>(n, grade, terms, coeff, rng);
}

inline Form random_complex_form(int n, int grade, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto coeff = [&] { return Complex(g(rng), g(rng)); };
  return random_homogeneous<Complex>(n, grade, terms, coeff, rng);
}

/// Brute-force wedge: expands every term pair by sorting the concatenated
/// index list.
template <class Scalar>
constellation::BasicForm<Scalar> wedge_oracle(const constellation::BasicForm<Scalar>& a,
                                              const constellation::BasicForm<Scalar>& b) {
  std::vector<typename constellation::BasicForm<Scalar>::Term> out;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      auto seq = constellation::mask_indices(x.mask);
      const auto tail = constellation::mask_indices(y.mask);
      seq.insert(seq.end(), tail.begin(), tail.end());
      const int s = sort_sign(seq);
      if (s == 0) continue;
      Scalar c(x.coeff * y.coeff);
      out.push_back({x.mask | y.mask, s > 0 ? c : Scalar(Scalar{} - c)});
    }
  }
  return constellation::BasicForm<Scalar>::from_terms(a.dim(), std::move(out));
}

template <class Scalar>
bool exactly_equal(const constellation::BasicForm<Scalar>& a,
                   const constellation::BasicForm<Scalar>& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.terms()[i].mask != b.terms()[i].mask) return false;
    if (!(a.terms()[i].coeff == b.terms()[i].coeff)) return false;
  }
  return true;
}

inline double max_abs_diff(const Form& a, const Form& b) {
  const Form d = a - b;
  double m = 0.0;
  for (const auto& t : d.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
inline Complex pfaffian_cofactor(const std::vector<std::vector<Complex>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {1.0, 0.0};
  if (n % 2 == 1) return {};
  Complex total{};
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 1; k < n; ++k) {
      if (k != j) keep.push_back(k);
    }
    std::vector<std::vector<Complex>> sub(keep.size(), std::vector<Complex>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) sub[r][c] = a[keep[r]][keep[c]];
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * a[0][j] * pfaffian_cofactor(sub);
  }
  return total;
}

/// Determinant by Laplace expansion (small matrices only).
inline Complex det_laplace(const std::vector<std::vector<Complex>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {1.0, 0.0};
  Complex total{};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Complex>> sub(n - 1, std::vector<Complex>(n - 1));
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c != j) sub[r - 1][cc++] = a[r][c];
      }
    }
    total += ((j % 2) ? -1.0 : 1.0) * a[0][j] * det_laplace(sub);
  }
  return total;
}

}  // namespace test_support
