#include "constellation/fugacity.hpp"

#include <sstream>

namespace constellation {

FugacityPoly::FugacityPoly(int value) : FugacityPoly(Complex(value, 0.0)) {}

FugacityPoly::FugacityPoly(Complex value) {
  if (!ScalarTraits<Complex>::is_zero(value)) terms_.emplace(Exponents{}, value);
}

FugacityPoly FugacityPoly::variable(int j, int species) {
  if (j < 0 || j >= species) throw InvalidArgument("FugacityPoly::variable: index out of range");
  Exponents e(static_cast<std::size_t>(species), 0);
  e[static_cast<std::size_t>(j)] = 1;
  FugacityPoly p;
  p.terms_.emplace(normalized(std::move(e)), Complex(1.0, 0.0));
  return p;
}

// trailing zeros stripped so that the constant monomial is the empty vector
FugacityPoly::Exponents FugacityPoly::normalized(Exponents e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
  return e;
}

Complex FugacityPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(normalized(e));
  return it == terms_.end() ? Complex{} : it->second;
}

Complex FugacityPoly::evaluate(const std::vector<double>& z) const {
  Complex total{};
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (j >= z.size()) throw DimensionMismatch("FugacityPoly::evaluate: too few fugacities");
      for (int p = 0; p < e[j]; ++p) term *= z[j];
    }
    total += term;
  }
  return total;
}

void FugacityPoly::add_term(const Exponents& e, Complex c) {
  auto [it, inserted] = terms_.try_emplace(e, Complex{});
  it->second += c;
  if (ScalarTraits<Complex>::is_zero(it->second)) terms_.erase(it);
}

FugacityPoly FugacityPoly::operator+(const FugacityPoly& o) const {
  FugacityPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

FugacityPoly FugacityPoly::operator-(const FugacityPoly& o) const {
  FugacityPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

FugacityPoly FugacityPoly::operator*(const FugacityPoly& o) const {
  FugacityPoly r;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t j = 0; j < ea.size(); ++j) e[j] += ea[j];
      for (std::size_t j = 0; j < eb.size(); ++j) e[j] += eb[j];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

FugacityPoly FugacityPoly::scaled(Complex c) const {
  FugacityPoly r;
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

std::string FugacityPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] > 0) out << "*z" << (j + 1) << (e[j] > 1 ? "^" + std::to_string(e[j]) : "");
    }
  }
  return out.str();
}

}  // namespace constellation
