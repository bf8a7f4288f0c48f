#include "constellation/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace constellation {
namespace {

constexpr int kMaxNewton = 100;
constexpr double kNewtonTol = 1e-14;

GaussRule build_hermite(int n) {
  // Newton iteration on orthonormal Hermite recurrences with asymptotic
  // initial guesses for the largest roots; nodes come out in decreasing order.
  GaussRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.nodes[1];
    } else {
      z = 2.0 * z - r.nodes[i - 2];
    }
    double pp = 0.0;
    int it = 0;
    for (; it < kMaxNewton; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kNewtonTol * std::max(1.0, std::abs(z))) break;
    }
    if (it == kMaxNewton) throw QuadratureError("gauss_hermite: Newton iteration did not converge");
    r.nodes[i] = z;
    r.nodes[n - 1 - i] = -z;
    r.weights[i] = 2.0 / (pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

// P_n(x) and P_{n-1}(x)
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussRule build_legendre(int n) {
  GaussRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    int it = 0;
    for (; it < kMaxNewton; ++it) {
      const auto [p, pm] = legendre_pair(n, z);
      dp = n * (z * p - pm) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p / dp;
      if (std::abs(z - z1) <= kNewtonTol) break;
    }
    if (it == kMaxNewton) throw QuadratureError("gauss_legendre: Newton iteration did not converge");
    const auto [p, pm] = legendre_pair(n, z);
    dp = n * (z * p - pm) / (z * z - 1.0);
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

template <class Build>
const GaussRule& cached(std::map<int, GaussRule>& cache, std::mutex& lock, int n, Build build) {
  if (n < 2 || n > 512) throw QuadratureError("Gauss rule size must lie in [2, 512]");
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace

const GaussRule& gauss_hermite(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex lock;
  return cached(cache, lock, n, build_hermite);
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex lock;
  return cached(cache, lock, n, build_legendre);
}

CompositeGrid::CompositeGrid(double a, double b, int panels, int points_per_panel)
    : a_(a), b_(b), panels_(panels), m_(points_per_panel) {
  if (!(b > a)) throw QuadratureError("CompositeGrid: empty interval");
  if (panels < 1) throw QuadratureError("CompositeGrid: need at least one panel");
  const GaussRule& g = gauss_legendre(m_);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < m_; ++i) {
      nodes_.push_back(mid + 0.5 * width * g.nodes[i]);
      weights_.push_back(0.5 * width * g.weights[i]);
    }
  }
  // S[j][i] = w_i [ (xi_j + 1)/2 + sum_{k>=1} P_k(xi_i) (P_{k+1}(xi_j) - P_{k-1}(xi_j)) / 2 ]
  std::vector<std::vector<double>> P(m_ + 1, std::vector<double>(m_));
  for (int i = 0; i < m_; ++i) {
    double p0 = 1.0, p1 = g.nodes[i];
    P[0][i] = 1.0;
    P[1][i] = p1;
    for (int k = 2; k <= m_; ++k) {
      const double p2 = ((2.0 * k - 1) * g.nodes[i] * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
      P[k][i] = p2;
    }
  }
  spectral_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      double s = 0.5 * (g.nodes[j] + 1.0);
      for (int k = 1; k < m_; ++k) s += 0.5 * P[k][i] * (P[k + 1][j] - P[k - 1][j]);
      spectral_[static_cast<std::size_t>(j) * m_ + i] = g.weights[i] * s;
    }
  }
}

Complex CompositeGrid::integrate(const std::vector<Complex>& values) const {
  if (values.size() != nodes_.size()) throw DimensionMismatch("CompositeGrid: value count");
  Complex total{};
  for (std::size_t j = 0; j < values.size(); ++j) total += weights_[j] * values[j];
  return total;
}

std::vector<Complex> CompositeGrid::running_integral(const std::vector<Complex>& values) const {
  if (values.size() != nodes_.size()) throw DimensionMismatch("CompositeGrid: value count");
  std::vector<Complex> out(values.size());
  const double half = 0.5 * (b_ - a_) / panels_;
  Complex before{};
  for (int p = 0; p < panels_; ++p) {
    const std::size_t base = static_cast<std::size_t>(p) * m_;
    Complex panel_total{};
    for (int j = 0; j < m_; ++j) {
      Complex s{};
      for (int i = 0; i < m_; ++i) s += spectral_[static_cast<std::size_t>(j) * m_ + i] * values[base + i];
      out[base + j] = before + half * s;
    }
    for (int i = 0; i < m_; ++i) panel_total += weights_[base + i] * values[base + i];
    before += panel_total;
  }
  return out;
}

Complex integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                           double panel_width, int m) {
  if (!(b > a)) return {};
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width - 1e-12)));
  const GaussRule& g = gauss_legendre(m);
  const double width = (b - a) / panels;
  Complex total{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < m; ++i) total += 0.5 * width * g.weights[i] * f(mid + 0.5 * width * g.nodes[i]);
  }
  return total;
}

double gaussian_truncation(double kappa, int degree, double tail) {
  if (kappa <= 0.0) throw InvalidArgument("gaussian_truncation: kappa must be positive");
  // log of x^d e^{-kappa x^2}
  const auto logf = [&](double x) { return degree * std::log(x) - kappa * x * x; };
  const double peak_x = degree > 0 ? std::sqrt(degree / (2.0 * kappa)) : 0.0;
  const double peak = degree > 0 ? logf(peak_x) : 0.0;
  const double target = peak + std::log(tail);
  double x = std::max(peak_x, 1.0 / std::sqrt(kappa));
  while ((degree > 0 ? logf(x) : -kappa * x * x) > target) x *= 1.1;
  return x;
}

}  // namespace constellation
