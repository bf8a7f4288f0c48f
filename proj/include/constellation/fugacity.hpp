#pragma once

// Polynomials in the fugacities z_1..z_J with complex coefficients, used as
// formal Form coefficients for the grand canonical generating function.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "constellation/form.hpp"

namespace constellation {

class FugacityPoly {
 public:
  using Exponents = std::vector<int>;

  FugacityPoly() = default;
  FugacityPoly(int value);  // NOLINT(google-explicit-constructor): ring embedding
  FugacityPoly(Complex value);  // NOLINT(google-explicit-constructor)

  /// The monomial z_j (0-based species index) among `species` variables.
  static FugacityPoly variable(int j, int species);

  const std::map<Exponents, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of z^e; zero if absent. Missing trailing exponents count as 0.
  Complex coefficient(const Exponents& e) const;
  Complex evaluate(const std::vector<double>& z) const;

  FugacityPoly operator+(const FugacityPoly& o) const;
  FugacityPoly operator-(const FugacityPoly& o) const;
  FugacityPoly operator*(const FugacityPoly& o) const;
  FugacityPoly scaled(Complex c) const;

  friend bool operator==(const FugacityPoly& a, const FugacityPoly& b) {
    return a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, Complex c);
  static Exponents normalized(Exponents e);

  std::map<Exponents, Complex> terms_;
};

template <>
struct ScalarTraits<FugacityPoly> {
  static bool is_zero(const FugacityPoly& c) { return c.empty(); }
  static FugacityPoly one() { return FugacityPoly(1); }
  static FugacityPoly divide(const FugacityPoly& c, long m) {
    return c.scaled(Complex(1.0 / static_cast<double>(m), 0.0));
  }
};

using FugacityForm = BasicForm<FugacityPoly>;

}  // namespace constellation
