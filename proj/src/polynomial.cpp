#include "constellation/polynomial.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace constellation {
namespace {

constexpr int kPascalMax = 64;

const std::array<std::array<double, kPascalMax + 1>, kPascalMax + 1>& pascal() {
  static const auto table = [] {
    std::array<std::array<double, kPascalMax + 1>, kPascalMax + 1> t{};
    for (int n = 0; n <= kPascalMax; ++n) {
      t[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0.0);
    }
    return t;
  }();
  return table;
}

const Polynomial kZero{};

}  // namespace

double binomial(int n, int k) {
  if (n < 0 || n > kPascalMax) throw InvalidArgument("binomial: n outside [0, 64]");
  if (k < 0 || k > n) return 0.0;
  return pascal()[n][k];
}

Polynomial modified_derivative(const Polynomial& p, int l) {
  if (l < 0) throw InvalidArgument("modified_derivative: negative order");
  if (l == 0) return p;
  const int deg = static_cast<int>(p.size()) - 1;
  if (l > deg) return {};
  Polynomial out(static_cast<std::size_t>(deg - l + 1));
  // d^l/dx^l x^k / l! = C(k, l) x^{k-l}
  for (int k = l; k <= deg; ++k) out[k - l] = p[k] * binomial(k, l);
  return out;
}

PolynomialFamily PolynomialFamily::monomials(int n) {
  if (n < 0 || n > kPascalMax) throw InvalidArgument("monomials: size outside [0, 64]");
  PolynomialFamily f;
  f.kind_ = Kind::monomial;
  for (int m = 1; m <= n; ++m) {
    Polynomial p(static_cast<std::size_t>(m), 0.0);
    p.back() = 1.0;
    f.polys_.push_back(std::move(p));
  }
  f.tabulate();
  return f;
}

PolynomialFamily PolynomialFamily::random_monic(int n, std::uint64_t seed, double scale) {
  if (n < 0 || n > kPascalMax) throw InvalidArgument("random_monic: size outside [0, 64]");
  PolynomialFamily f;
  f.kind_ = Kind::random_monic;
  f.seed_ = seed;
  f.scale_ = scale;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-scale, scale);
  for (int m = 1; m <= n; ++m) {
    Polynomial p(static_cast<std::size_t>(m));
    // snapped to a 2^-24 grid so c * C(k, l) stays exact for families up to 32 members;
    // rounded derivative tables would leave a ~1e-16 floor that 1/Delta(iy) amplifies
    for (int k = 0; k + 1 < m; ++k) p[k] = std::ldexp(std::round(std::ldexp(coeff(rng), 24)), -24);
    p.back() = 1.0;
    f.polys_.push_back(std::move(p));
  }
  f.tabulate();
  return f;
}

PolynomialFamily PolynomialFamily::from_coefficients(std::vector<Polynomial> coeffs) {
  if (coeffs.size() > kPascalMax) throw InvalidArgument("from_coefficients: more than 64 members");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].size() != i + 1 || coeffs[i].back() != 1.0) {
      throw InvalidArgument("from_coefficients: member " + std::to_string(i + 1) +
                            " must be monic of degree " + std::to_string(i));
    }
  }
  PolynomialFamily f;
  f.kind_ = Kind::explicit_coeffs;
  f.polys_ = std::move(coeffs);
  f.tabulate();
  return f;
}

void PolynomialFamily::tabulate() {
  derivs_.clear();
  for (const auto& p : polys_) {
    std::vector<Polynomial> row;
    for (int l = 0; l < static_cast<int>(p.size()); ++l) row.push_back(modified_derivative(p, l));
    derivs_.push_back(std::move(row));
  }
}

const Polynomial& PolynomialFamily::polynomial(int n) const {
  if (n < 1 || n > size()) throw InvalidArgument("PolynomialFamily: index out of range");
  return polys_[n - 1];
}

const Polynomial& PolynomialFamily::derivative(int n, int l) const {
  if (n < 1 || n > size()) throw InvalidArgument("PolynomialFamily: index out of range");
  if (l < 0) throw InvalidArgument("PolynomialFamily: negative derivative order");
  const auto& row = derivs_[n - 1];
  return l < static_cast<int>(row.size()) ? row[l] : kZero;
}

PolynomialFamily PolynomialFamily::resized(int n) const {
  switch (kind_) {
    case Kind::monomial:
      return monomials(n);
    case Kind::random_monic:
      return random_monic(n, seed_, scale_);
    case Kind::explicit_coeffs:
      if (n > size()) throw InvalidArgument("explicit family has too few members");
      return from_coefficients(std::vector<Polynomial>(polys_.begin(), polys_.begin() + n));
  }
  return {};
}

}  // namespace constellation
