#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "constellation/alternants.hpp"
#include "constellation/cli.hpp"
#include "constellation/form.hpp"
#include "constellation/form_io.hpp"
#include "constellation/limits.hpp"
#include "constellation/measures.hpp"

namespace constellation::cli {
namespace {

struct Suite {
  std::ostream& out;
  int failures = 0;

  // check returns an empty string on success, else a counterexample description
  void property(const std::string& name, int cases, const std::function<std::string(int)>& check) {
    for (int c = 0; c < cases; ++c) {
      const std::string bad = check(c);
      if (!bad.empty()) {
        out << "FAIL " << name << " case " << c << ": " << bad << "\n";
        ++failures;
        return;
      }
    }
    out << "PASS " << name << " (" << cases << " cases)\n";
  }
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::string describe(Complex a, Complex b) {
  std::ostringstream s;
  s.precision(17);
  s << a << " vs " << b;
  return s.str();
}

Form random_form(std::mt19937_64& rng, int n, int grade, int terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Form::Term> t;
  const auto all = k_subsets(n, grade);
  for (int i = 0; i < terms; ++i) t.push_back({all[rng() % all.size()], Complex(u(rng), u(rng))});
  return Form::from_terms(n, std::move(t));
}

double max_diff(const Form& a, const Form& b) {
  const Form d = a - b;
  double m = 0.0;
  for (const auto& t : d.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

void algebra(Suite& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  s.property("algebra.wedge_associative", 20, [&](int) -> std::string {
    const int n = 7;
    const Form a = random_form(rng, n, 1 + rng() % 3, 6), b = random_form(rng, n, 1 + rng() % 2, 6),
               c = random_form(rng, n, 1 + rng() % 2, 6);
    const double d = max_diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
    return d < 1e-12 ? "" : "a=" + form_to_string(a) + " b=" + form_to_string(b) + " c=" + form_to_string(c);
  });
  s.property("algebra.graded_commutative", 20, [&](int) -> std::string {
    const int n = 8, p = 1 + rng() % 3, q = 1 + rng() % 3;
    const Form a = random_form(rng, n, p, 5), b = random_form(rng, n, q, 5);
    Form ba = wedge(b, a);
    if ((p * q) % 2) ba = -ba;
    return max_diff(wedge(a, b), ba) < 1e-12 ? "" : "a=" + form_to_string(a) + " b=" + form_to_string(b);
  });
  s.property("algebra.berezin_permutation_signs_S4", 24, [&](int c) -> std::string {
    std::vector<int> perm = {1, 2, 3, 4};
    for (int i = 0; i < c; ++i) std::next_permutation(perm.begin(), perm.end());
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
    Form f = Form::constant(4, 1.0);
    for (int i : perm) f = wedge(f, Form::basis(IndexSubset::from_mask(bit_of(i), 4)));
    const Complex v = be_vol(f);
    const double expected = inversions % 2 ? -1.0 : 1.0;
    return v == Complex(expected) ? "" : "sigma ends " + std::to_string(perm[3]) + ": " + describe(v, expected);
  });
  s.property("algebra.exp_factorises_for_even_forms", 10, [&](int) -> std::string {
    const int n = 10;
    const Form a = random_form(rng, n, 2, 6), b = random_form(rng, n, 2 * (1 + rng() % 2), 6);
    const double d = max_diff(exp_truncated(a + b, n), wedge(exp_truncated(a, n), exp_truncated(b, n)));
    return d < 1e-10 ? "" : "a=" + form_to_string(a) + " b=" + form_to_string(b);
  });
  s.property("algebra.hyperpfaffian_equals_be_vol", 20, [&](int c) -> std::string {
    const int g = 2 + 2 * (c % 2), m = 2 + (c % 3 == 0);
    const int n = g * m;
    if (n > 12) return "";
    const Form w = random_form(rng, n, g, 25);
    const Complex pf = hyperpfaffian(w, m), be = be_vol(w);
    return rel(pf, be) < 1e-10 || std::abs(pf - be) < 1e-13 ? "" : "omega=" + form_to_string(w) + ": " + describe(pf, be);
  });
  s.property("algebra.pfaffian_4x4", 10, [&](int) -> std::string {
    const Form w = random_form(rng, 4, 2, 12);
    auto a = [&](int i, int j) { return w.coefficient(bit_of(i) | bit_of(j)); };
    const Complex expected = a(1, 2) * a(3, 4) - a(1, 3) * a(2, 4) + a(1, 4) * a(2, 3);
    const Complex pf = hyperpfaffian(w, 2);
    return rel(pf, expected) < 1e-12 || std::abs(pf - expected) < 1e-14 ? "" : describe(pf, expected);
  });
}

void determinants(Suite& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  s.property("determinants.confluent_det_equals_product", 50, [&](int) -> std::string {
    const int points = 1 + rng() % 3;
    std::vector<int> L;
    std::vector<Complex> x;
    for (int m = 0; m < points; ++m) {
      L.push_back(1 + rng() % 3);
      x.emplace_back(u(rng), u(rng));
    }
    const Shape shape(L);
    const auto fam = PolynomialFamily::random_monic(shape.R1(), rng());
    const Complex det = confluent_vandermonde_det(fam, shape, x);
    const Complex prod = confluent_vandermonde_product(shape, x);
    return rel(det, prod) < 1e-9 ? "" : describe(det, prod);
  });
  s.property("determinants.proto_confluent_limit", 20, [&](int) -> std::string {
    const Shape shape({1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2)});
    const std::vector<Complex> x = {Complex(u(rng)), Complex(u(rng) + 4.0)};
    const Complex limit = confluent_vandermonde_product(shape, x);
    const Complex near = proto_confluent_ratio<Complex>(shape, x, Complex(1e-7));
    return rel(near, limit) < 1e-5 ? "" : describe(near, limit);
  });
  s.property("determinants.monomial_wronskian_closed_form", 30, [&](int) -> std::string {
    const int n = 6, k = 1 + rng() % 4;
    const auto subsets = k_subsets(n, k);
    const auto t = IndexSubset::from_mask(subsets[rng() % subsets.size()], n);
    const Complex x(u(rng), u(rng));
    const Complex a = wronskian(PolynomialFamily::monomials(n), t, x), b = monomial_wronskian(t, x);
    return rel(a, b) < 1e-10 || std::abs(a - b) < 1e-12 ? "" : t.to_string() + ": " + describe(a, b);
  });
  s.property("determinants.full_minor_family_invariant", 30, [&](int) -> std::string {
    std::vector<int> L = {1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2)};
    const Shape shape(L);
    const int g = shape.R1();
    const std::vector<double> y = {0.2, 1.1};
    const auto t = IndexSubset::from_mask(full_mask(g), g);
    const double x = u(rng);
    const Complex a = wr_shape_pr(PolynomialFamily::monomials(g), t, x, y, L);
    const Complex b = wr_shape_pr(PolynomialFamily::random_monic(g, rng()), t, x, y, L);
    return rel(a, b) < 1e-9 ? "" : describe(a, b);
  });
}

void limits(Suite& s, std::uint64_t) {
  const auto report = [&](const std::string& name, const LimitReport& r) {
    s.property(name, 1, [&](int) -> std::string {
      std::ostringstream o;
      o << "order=" << r.order << " monotone=" << r.monotone << " errors:";
      for (const auto& p : r.points) o << " " << p.parameter << ":" << p.error;
      s.out << "  " << name << " " << o.str() << "\n";
      return r.passed ? "" : o.str();
    });
  };
  const std::vector<double> scales = {1e-1, 1e-2, 1e-3, 1e-4};
  const std::vector<double> hs = {1e1, 1e2, 1e3, 1e4};
  for (auto [L, K] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
    EnsembleSpec spec;
    spec.L = L;
    spec.K = K;
    spec.M = 2;
    for (int k = 0; k < K; ++k) spec.y.push_back(0.3 + k);
    report("limits.collapsed_linear_L" + std::to_string(L) + "_K" + std::to_string(K),
           collapsed_limit_check(spec, scales));
    report("limits.separated_linear_L" + std::to_string(L) + "_K" + std::to_string(K),
           separated_limit_check(spec, hs));
  }
  EnsembleSpec circ;
  circ.geometry = Geometry::circular;
  circ.K = 2;
  circ.M = 2;
  circ.y = {1, 2};
  report("limits.collapsed_circular_L1_K2", collapsed_limit_check(circ, std::vector<double>{1e-1, 1e-2, 1e-3}));
  report("limits.separated_circular_L1_K2", separated_limit_check(circ, hs));
}

void selection_rule(Suite& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  s.property("selection-rule.circular_sparsity", 50, [&](int) -> std::string {
    const int K = 1 + rng() % 3;
    const int N = K + rng() % 6;
    const long R = static_cast<long>(rng() % (K * (N - K) + 1)) + K * (K - 1) / 2 - K + 1;
    std::vector<double> y;
    for (int k = 0; k < K; ++k) y.push_back(0.5 + 0.7 * k);
    std::size_t nonzero = 0, predicted = 0, stray = 0;
    for_each_k_subset(N, K, [&](Mask m) {
      const auto t = IndexSubset::from_mask(m, N);
      const Complex c = circular_exact_gamma_coefficient(t, R, y);
      const bool rule = t.index_sum() == R + K;
      predicted += rule;
      if (c != Complex{}) ++nonzero;
      if (!rule && c != Complex{}) ++stray;
    });
    if (nonzero == predicted && stray == 0) return "";
    return "K=" + std::to_string(K) + " N=" + std::to_string(N) + " R=" + std::to_string(R) +
           ": nonzero=" + std::to_string(nonzero) + " predicted=" + std::to_string(predicted);
  });
}

const std::vector<std::pair<std::string, std::function<void(Suite&, std::uint64_t)>>>& suites() {
  static const std::vector<std::pair<std::string, std::function<void(Suite&, std::uint64_t)>>> all = {
      {"algebra", algebra}, {"determinants", determinants}, {"limits", limits}, {"selection-rule", selection_rule}};
  return all;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : suites()) out.push_back(name);
  return out;
}

int verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  for (const auto& [name, fn] : suites()) {
    if (name != suite && suite != "all") continue;
    Suite s{out};
    fn(s, seed);
    if (suite != "all") return s.failures ? kIntegrityFailure : kOk;
    if (s.failures) return kIntegrityFailure;
  }
  if (suite == "all") return kOk;
  out << "unknown suite '" << suite << "'\n";
  return kConfigError;
}

}  // namespace constellation::cli
