#pragma once

// Sparse mixed-grade alternating tensors over R^N with coefficients in a
// commutative ring: wedge products, Berezin integration, truncated
// exponentials and Hyperpfaffians.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "constellation/errors.hpp"
#include "constellation/index_subset.hpp"
#include "constellation/parallel.hpp"

namespace constellation {

using Complex = std::complex<double>;

/// Coefficient-ring hooks. The default works for exact types whose
/// value-initialised state is zero (rationals, polynomial rings).
template <class Scalar>
struct ScalarTraits {
  static bool is_zero(const Scalar& c) { return c == Scalar{}; }
  static Scalar one() { return Scalar(1); }
  static Scalar divide(const Scalar& c, long m) { return c / Scalar(m); }
};

/// Complex doubles: only true zeros are pruned, never epsilon-small values,
/// since cancellation between terms is meaningful.
template <>
struct ScalarTraits<Complex> {
  static constexpr double kZeroThreshold = 1e-300;
  static bool is_zero(const Complex& c) {
    return std::abs(c.real()) < kZeroThreshold && std::abs(c.imag()) < kZeroThreshold;
  }
  static Complex one() { return {1.0, 0.0}; }
  static Complex divide(const Complex& c, long m) { return c / static_cast<double>(m); }
};

template <class Scalar>
class BasicForm {
 public:
  using Traits = ScalarTraits<Scalar>;

  struct Term {
    Mask mask;
    Scalar coeff;
  };

  BasicForm() = default;
  explicit BasicForm(int dim) : dim_(dim) { check_dim(dim); }

  /// c * 1, the grade-0 form.
  static BasicForm constant(int dim, Scalar c) {
    BasicForm f(dim);
    if (!Traits::is_zero(c)) f.terms_.push_back({0, std::move(c)});
    return f;
  }

  /// c * eps_S.
  static BasicForm basis(const IndexSubset& s, Scalar c = Traits::one()) {
    BasicForm f(s.dim());
    if (!Traits::is_zero(c)) f.terms_.push_back({s.mask(), std::move(c)});
    return f;
  }

  /// eps_{from} ^ ... ^ eps_{to}, e.g. the extension vectors xi_k.
  static BasicForm range_product(int dim, int from, int to) {
    Mask m = 0;
    for (int i = from; i <= to; ++i) m |= bit_of(i);
    return basis(IndexSubset::from_mask(m, dim));
  }

  /// Sums duplicate masks, drops zeros and sorts.
  static BasicForm from_terms(int dim, std::vector<Term> terms) {
    BasicForm f(dim);
    const Mask allowed = full_mask(dim);
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mask < b.mask; });
    for (auto& t : terms) {
      if (t.mask & ~allowed) throw DimensionMismatch("Form: term outside ambient dimension");
      if (!f.terms_.empty() && f.terms_.back().mask == t.mask) {
        f.terms_.back().coeff = Scalar(f.terms_.back().coeff + t.coeff);
      } else {
        f.terms_.push_back(std::move(t));
      }
    }
    f.prune();
    return f;
  }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coefficient(Mask mask) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                               [](const Term& t, Mask m) { return t.mask < m; });
    if (it != terms_.end() && it->mask == mask) return it->coeff;
    return Scalar{};
  }
  Scalar coefficient(const IndexSubset& s) const { return coefficient(s.mask()); }

  /// Grade shared by all terms, if the form is nonzero and homogeneous.
  std::optional<int> grade() const {
    if (terms_.empty()) return std::nullopt;
    const int g = std::popcount(terms_.front().mask);
    for (const auto& t : terms_) {
      if (std::popcount(t.mask) != g) return std::nullopt;
    }
    return g;
  }
  bool is_homogeneous() const { return terms_.empty() || grade().has_value(); }
  bool has_grade_zero() const { return !terms_.empty() && terms_.front().mask == 0; }

  int min_grade() const {
    int g = dim_ + 1;
    for (const auto& t : terms_) g = std::min(g, std::popcount(t.mask));
    return g;
  }

  BasicForm grade_part(int g) const {
    BasicForm f(dim_);
    for (const auto& t : terms_) {
      if (std::popcount(t.mask) == g) f.terms_.push_back(t);
    }
    return f;
  }

  /// Same tensor regarded in a higher-dimensional ambient space.
  BasicForm embedded(int new_dim) const {
    if (new_dim < dim_) throw DimensionMismatch("Form::embedded: cannot shrink dimension");
    BasicForm f = *this;
    f.dim_ = new_dim;
    check_dim(new_dim);
    return f;
  }

  BasicForm& operator+=(const BasicForm& other) {
    require_same_dim(other);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->mask < b->mask)) {
        merged.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->mask < a->mask) {
        merged.push_back(*b++);
      } else {
        Scalar c(a->coeff + b->coeff);
        if (!Traits::is_zero(c)) merged.push_back({a->mask, std::move(c)});
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }

  BasicForm operator-() const {
    BasicForm f = *this;
    for (auto& t : f.terms_) t.coeff = Scalar(Scalar{} - t.coeff);
    return f;
  }
  BasicForm& operator-=(const BasicForm& other) { return *this += -other; }

  BasicForm& operator*=(const Scalar& c) {
    for (auto& t : terms_) t.coeff = Scalar(t.coeff * c);
    prune();
    return *this;
  }

  BasicForm divided_by(long m) const {
    BasicForm f = *this;
    for (auto& t : f.terms_) t.coeff = Traits::divide(t.coeff, m);
    f.prune();
    return f;
  }

  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(BasicForm a, const Scalar& c) { return a *= c; }
  friend BasicForm operator*(const Scalar& c, BasicForm a) { return a *= c; }

  void require_same_dim(const BasicForm& other) const {
    if (dim_ != other.dim_) {
      throw DimensionMismatch("Form: ambient dimensions differ (" + std::to_string(dim_) +
                              " vs " + std::to_string(other.dim_) + ")");
    }
  }

 private:
  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxDimension) {
      throw InvalidArgument("Form: ambient dimension must lie in [0, 64]");
    }
  }

  void prune() {
    std::erase_if(terms_, [](const Term& t) { return Traits::is_zero(t.coeff); });
  }

  int dim_ = 0;
  std::vector<Term> terms_;
};

using Form = BasicForm<Complex>;

namespace detail {

template <class Scalar>
using TermMap = std::unordered_map<Mask, Scalar>;

template <class Scalar>
BasicForm<Scalar> form_from_map(int dim, TermMap<Scalar>&& acc) {
  std::vector<typename BasicForm<Scalar>::Term> terms;
  terms.reserve(acc.size());
  for (auto& [mask, c] : acc) terms.push_back({mask, std::move(c)});
  return BasicForm<Scalar>::from_terms(dim, std::move(terms));
}

}  // namespace detail

/// Exterior product, keeping only terms of grade <= max_grade.
template <class Scalar>
BasicForm<Scalar> wedge_truncated(const BasicForm<Scalar>& a, const BasicForm<Scalar>& b,
                                  int max_grade) {
  a.require_same_dim(b);
  using Term = typename BasicForm<Scalar>::Term;
  const auto& at = a.terms();
  const auto& bt = b.terms();
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (at.size() + kChunk - 1) / kChunk;
  std::vector<detail::TermMap<Scalar>> partial(std::max<std::size_t>(chunks, 1));
  parallel_chunks(at.size(), kChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    auto& acc = partial[c];
    for (std::size_t i = begin; i < end; ++i) {
      const Term& x = at[i];
      const int gx = std::popcount(x.mask);
      for (const Term& y : bt) {
        if (x.mask & y.mask) continue;
        if (gx + std::popcount(y.mask) > max_grade) continue;
        const int s = merge_sign(x.mask, y.mask);
        Scalar prod(x.coeff * y.coeff);
        auto [it, inserted] = acc.try_emplace(x.mask | y.mask, Scalar{});
        if (s > 0) {
          it->second = Scalar(it->second + prod);
        } else {
          it->second = Scalar(it->second - prod);
        }
      }
    }
  });
  // merge partial maps in chunk order
  detail::TermMap<Scalar> total = std::move(partial[0]);
  for (std::size_t c = 1; c < partial.size(); ++c) {
    for (auto& [mask, coeff] : partial[c]) {
      auto [it, inserted] = total.try_emplace(mask, Scalar{});
      it->second = Scalar(it->second + coeff);
    }
  }
  return detail::form_from_map(a.dim(), std::move(total));
}

/// Exterior product a ^ b.
template <class Scalar>
BasicForm<Scalar> wedge(const BasicForm<Scalar>& a, const BasicForm<Scalar>& b) {
  return wedge_truncated(a, b, a.dim());
}

/// omega^{^m} / m!.
template <class Scalar>
BasicForm<Scalar> divided_power(const BasicForm<Scalar>& omega, int m) {
  using Traits = ScalarTraits<Scalar>;
  if (m < 0) throw InvalidArgument("divided_power: negative exponent");
  BasicForm<Scalar> result = BasicForm<Scalar>::constant(omega.dim(), Traits::one());
  for (int k = 1; k <= m; ++k) {
    result = wedge(result, omega).divided_by(k);
    if (result.is_zero()) break;
  }
  return result;
}

/// Berezin integral with respect to eps_s: applies d/d eps_{s(1)} first and
/// d/d eps_{s(L)} last. Each derivative moves its factor to the front (sign
/// (-1)^(position-1)) and removes it, so that integrating eps_sigma against the
/// volume form yields sgn(sigma).
template <class Scalar>
BasicForm<Scalar> berezin(const BasicForm<Scalar>& a, const IndexSubset& s) {
  if (s.dim() > a.dim()) {
    throw DimensionMismatch("berezin: integration subset exceeds ambient dimension");
  }
  const Mask sm = s.mask();
  const std::vector<int> order = s.indices();
  std::vector<typename BasicForm<Scalar>::Term> out;
  for (const auto& t : a.terms()) {
    if ((t.mask & sm) != sm) continue;
    Mask current = t.mask;
    int parity = 0;
    for (int n : order) {
      parity += std::popcount(current & (bit_of(n) - 1));
      current &= ~bit_of(n);
    }
    out.push_back({current, (parity & 1) ? Scalar(Scalar{} - t.coeff) : t.coeff});
  }
  return BasicForm<Scalar>::from_terms(a.dim(), std::move(out));
}

/// sum_m omega^{^m}/m!, discarding every term of grade > max_grade.
/// omega must have no grade-0 component.
template <class Scalar>
BasicForm<Scalar> exp_truncated(const BasicForm<Scalar>& omega, int max_grade) {
  using Traits = ScalarTraits<Scalar>;
  if (max_grade > omega.dim()) {
    throw InvalidArgument("exp_truncated: max_grade exceeds ambient dimension");
  }
  if (omega.has_grade_zero()) {
    throw InvalidArgument("exp_truncated: form has a grade-0 component");
  }
  BasicForm<Scalar> result = BasicForm<Scalar>::constant(omega.dim(), Traits::one());
  BasicForm<Scalar> term = result;
  for (long m = 1; !term.is_zero(); ++m) {
    term = wedge_truncated(term, omega, max_grade).divided_by(m);
    result += term;
  }
  return result;
}

/// BE_vol(omega): the volume-form coefficient of exp(omega) in the ambient
/// dimension of omega. `extension` records how many trailing basis vectors
/// the caller has already wedged in; it does not change the projection.
template <class Scalar>
Scalar be_vol(const BasicForm<Scalar>& omega, int extension = 0) {
  if (extension < 0 || extension > omega.dim()) {
    throw InvalidArgument("be_vol: extension must lie in [0, N]");
  }
  const BasicForm<Scalar> e = exp_truncated(omega, omega.dim());
  return berezin(e, IndexSubset::full(omega.dim())).coefficient(Mask{0});
}

/// PF(omega) for homogeneous omega of grade g with g*M = N: the coefficient
/// of eps_vol in omega^{^M}/M!. Evaluated by expansion along the smallest
/// uncovered index (a sum over set partitions into grade-g blocks), which is
/// independent of the power-series route used by be_vol.
template <class Scalar>
Scalar hyperpfaffian(const BasicForm<Scalar>& omega, int M) {
  using Traits = ScalarTraits<Scalar>;
  const int n = omega.dim();
  if (M < 0) throw InvalidArgument("hyperpfaffian: M must be nonnegative");
  if (M == 0) {
    if (n != 0) throw InvalidArgument("hyperpfaffian: grade*M must equal N");
    return Traits::one();
  }
  if (omega.is_zero()) return Scalar{};
  const auto g = omega.grade();
  if (!g) throw InvalidArgument("hyperpfaffian: form is not homogeneous");
  if (*g * M != n) {
    throw InvalidArgument("hyperpfaffian: grade " + std::to_string(*g) + " times M=" +
                          std::to_string(M) + " differs from N=" + std::to_string(n));
  }
  if (*g == 0) throw InvalidArgument("hyperpfaffian: grade-0 form");
  if (*g % 2 == 1) {
    // odd forms square to zero
    return M == 1 ? omega.coefficient(full_mask(n)) : Scalar{};
  }
  std::vector<std::vector<const typename BasicForm<Scalar>::Term*>> by_lowest(n);
  for (const auto& t : omega.terms()) by_lowest[std::countr_zero(t.mask)].push_back(&t);

  std::unordered_map<Mask, Scalar> memo;
  auto solve = [&](auto&& self, Mask remaining) -> Scalar {
    if (remaining == 0) return Traits::one();
    if (auto it = memo.find(remaining); it != memo.end()) return it->second;
    Scalar total{};
    for (const auto* t : by_lowest[std::countr_zero(remaining)]) {
      if ((t->mask & remaining) != t->mask) continue;
      const Mask rest = remaining & ~t->mask;
      Scalar sub = self(self, rest);
      if (Traits::is_zero(sub)) continue;
      Scalar prod(t->coeff * sub);
      if (merge_sign(t->mask, rest) > 0) {
        total = Scalar(total + prod);
      } else {
        total = Scalar(total - prod);
      }
    }
    memo.emplace(remaining, total);
    return total;
  };
  return solve(solve, full_mask(n));
}

}  // namespace constellation
