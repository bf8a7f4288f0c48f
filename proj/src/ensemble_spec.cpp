#include "constellation/ensemble_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "constellation/index_subset.hpp"

namespace constellation {
namespace {

template <class T>
std::string join(const std::vector<T>& v, char sep = ';') {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    // shortest text that round-trips
    const auto r = std::to_chars(buf, buf + sizeof buf, v[i]);
    out.append(buf, r.ptr);
  }
  return out;
}

void check_subset_cap(int n, int g, std::uint64_t cap) {
  if (binomial_count(n, g) > cap) {
    throw ResourceLimitExceeded("C(" + std::to_string(n) + ", " + std::to_string(g) +
                                ") candidate subsets exceed the cap of " + std::to_string(cap) +
                                "; reduce M or the charges, or raise the cap");
  }
}

}  // namespace

std::string to_string(Geometry g) { return g == Geometry::linear ? "linear" : "circular"; }

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::monocharge: return "monocharge";
    case EnsembleKind::homogeneous: return "homogeneous";
    case EnsembleKind::multicomponent: return "multicomponent";
  }
  return "?";
}

PolynomialFamily FamilySpec::build(int n) const {
  switch (type) {
    case PolynomialFamily::Kind::monomial:
      return PolynomialFamily::monomials(n);
    case PolynomialFamily::Kind::random_monic:
      return PolynomialFamily::random_monic(n, seed);
    case PolynomialFamily::Kind::explicit_coeffs:
      if (static_cast<int>(coeffs.size()) < n) {
        throw InvalidArgument("explicit family provides " + std::to_string(coeffs.size()) +
                              " polynomials but " + std::to_string(n) + " are needed");
      }
      return PolynomialFamily::from_coefficients(
          std::vector<Polynomial>(coeffs.begin(), coeffs.begin() + n));
  }
  return {};
}

void EnsembleSpec::validate() const {
  if (K < 1) throw InvalidArgument(id + ": K must be at least 1");
  if (static_cast<int>(y.size()) != K) {
    throw InvalidArgument(id + ": y must list " + std::to_string(K) + " translations");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidArgument(id + ": y entries must be finite");
    if (geometry == Geometry::linear && v < 0.0) {
      throw InvalidArgument(id + ": line translations must be nonnegative");
    }
    if (geometry == Geometry::circular && !(v > 0.0)) {
      throw InvalidArgument(id + ": circle radii must be positive");
    }
  }
  if (std::set<double>(y.begin(), y.end()).size() != y.size()) {
    throw InvalidArgument(id + ": translations must be distinct");
  }
  if (geometry == Geometry::linear && !(strength > 0.0)) {
    throw InvalidArgument(id + ": potential strength must be positive");
  }
  switch (kind) {
    case EnsembleKind::monocharge:
      if (L < 1) throw InvalidArgument(id + ": charge L must be positive");
      if (M < 0) throw InvalidArgument(id + ": M must be nonnegative");
      break;
    case EnsembleKind::homogeneous:
      if (static_cast<int>(line_charges.size()) != K) {
        throw InvalidArgument(id + ": homogeneous ensembles need one charge per line");
      }
      for (int l : line_charges) {
        if (l < 1) throw InvalidArgument(id + ": charges must be positive");
      }
      if (M < 0) throw InvalidArgument(id + ": M must be nonnegative");
      break;
    case EnsembleKind::multicomponent: {
      if (charges.empty()) throw InvalidArgument(id + ": multicomponent ensembles need charges");
      for (int l : charges) {
        if (l < 1) throw InvalidArgument(id + ": charges must be positive");
      }
      if (std::set<int>(charges.begin(), charges.end()).size() != charges.size()) {
        throw InvalidArgument(id + ": species charges must be distinct");
      }
      if (populations.empty()) {
        if (!total_charge) {
          throw InvalidArgument(id + ": give either populations or total_charge with fugacities");
        }
        if (*total_charge < 0 || *total_charge % K != 0) {
          throw InvalidArgument(id + ": total_charge must be a nonnegative multiple of K");
        }
        if (fugacities.size() != charges.size()) {
          throw InvalidArgument(id + ": need one fugacity per species");
        }
        for (double z : fugacities) {
          if (!(z >= 0.0) || !std::isfinite(z)) throw InvalidArgument(id + ": fugacities must be nonnegative");
        }
      } else {
        if (populations.size() != charges.size()) {
          throw InvalidArgument(id + ": need one population per species");
        }
        for (int m : populations) {
          if (m < 0) throw InvalidArgument(id + ": populations must be nonnegative");
        }
      }
      break;
    }
  }
  const int n = dimension();
  if (n > dimension_cap) {
    throw ResourceLimitExceeded(id + ": dimension N = " + std::to_string(n) + " exceeds the cap " +
                                std::to_string(dimension_cap) +
                                "; lower M or the charges, or pass a larger --cap");
  }
  if (kind == EnsembleKind::multicomponent) {
    for (int l : charges) {
      if (l * K <= n) check_subset_cap(n, l * K, subset_cap);
    }
  } else if (M > 0) {
    check_subset_cap(n, block_grade(), subset_cap);
  }
}

Shape EnsembleSpec::line_shape() const {
  switch (kind) {
    case EnsembleKind::monocharge: return Shape::uniform(L, K);
    case EnsembleKind::homogeneous: return Shape(line_charges);
    case EnsembleKind::multicomponent:
      throw InvalidArgument("line_shape: multicomponent ensembles have one shape per species");
  }
  return {};
}

int EnsembleSpec::block_grade() const { return line_shape().R1(); }

int EnsembleSpec::dimension() const {
  if (kind != EnsembleKind::multicomponent) return block_grade() * M;
  if (populations.empty()) return total_charge.value_or(0);
  int charge = 0;
  for (std::size_t j = 0; j < charges.size(); ++j) charge += charges[j] * populations[j];
  return K * charge;
}

std::string EnsembleSpec::L_descriptor() const {
  switch (kind) {
    case EnsembleKind::monocharge: return std::to_string(L);
    case EnsembleKind::homogeneous: return join(line_charges);
    case EnsembleKind::multicomponent: return join(charges);
  }
  return "";
}

std::string EnsembleSpec::M_descriptor() const {
  if (kind != EnsembleKind::multicomponent) return std::to_string(M);
  if (populations.empty()) return "N=" + std::to_string(total_charge.value_or(0)) + ";z=" + join(fugacities);
  return join(populations);
}

std::string EnsembleSpec::y_descriptor() const { return join(y); }

}  // namespace constellation
