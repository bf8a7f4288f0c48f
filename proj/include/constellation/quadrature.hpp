#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "constellation/errors.hpp"

namespace constellation {

using Complex = std::complex<double>;

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Hermite rule for weight e^{-x^2}; exact to degree 2n - 1.
const GaussRule& gauss_hermite(int n);
/// n-point Gauss-Legendre rule on [-1, 1]; exact to degree 2n - 1.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b] with equal panels. Besides plain
/// integration it evaluates running integrals int_a^{x_j} f at every node by
/// spectral integration of the per-panel Legendre interpolant.
class CompositeGrid {
 public:
  CompositeGrid(double a, double b, int panels, int points_per_panel);

  double lower() const { return a_; }
  double upper() const { return b_; }
  int panels() const { return panels_; }
  int points_per_panel() const { return m_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  Complex integrate(const std::vector<Complex>& values) const;
  /// running[j] = int_a^{nodes[j]} f(x) dx.
  std::vector<Complex> running_integral(const std::vector<Complex>& values) const;

  /// Same in any scalar type (extended precision values, double rule).
  template <class T>
  T integrate_as(const std::vector<T>& values) const {
    T total(0);
    for (std::size_t j = 0; j < values.size(); ++j) total += T(weights_[j]) * values[j];
    return total;
  }
  template <class T>
  std::vector<T> running_integral_as(const std::vector<T>& values) const {
    if (values.size() != nodes_.size()) throw DimensionMismatch("CompositeGrid: value count");
    std::vector<T> out(values.size());
    const T half((b_ - a_) / (2.0 * panels_));
    T before(0);
    for (int p = 0; p < panels_; ++p) {
      const std::size_t base = static_cast<std::size_t>(p) * m_;
      T panel_total(0);
      for (int j = 0; j < m_; ++j) {
        T s(0);
        for (int i = 0; i < m_; ++i) s += T(spectral_[static_cast<std::size_t>(j) * m_ + i]) * values[base + i];
        out[base + j] = T(before + half * s);
      }
      for (int i = 0; i < m_; ++i) panel_total += T(weights_[base + i]) * values[base + i];
      before += panel_total;
    }
    return out;
  }

 private:
  double a_, b_;
  int panels_, m_;
  std::vector<double> nodes_, weights_;
  std::vector<double> spectral_;  // m x m reference-panel running-integral matrix
};

/// Integral of f over [a, b] by a composite rule with ceil((b - a) / panel_width)
/// panels of `m` points.
Complex integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                           double panel_width, int m);

/// Smallest X such that x^degree e^{-kappa x^2} on |x| > X stays below
/// `tail` times its maximum over the line.
double gaussian_truncation(double kappa, int degree, double tail = 1e-18);

}  // namespace constellation
