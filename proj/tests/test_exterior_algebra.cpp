#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "constellation/fugacity.hpp"
#include "constellation/form.hpp"
#include "constellation/form_io.hpp"
#include "test_support.hpp"

using namespace constellation;
using namespace test_support;

namespace {

Form e(std::initializer_list<int> idx, int n, Complex c = 1.0) {
  return Form::basis(IndexSubset(idx, n), c);
}

}  // namespace

TEST_CASE("wedge of basis vectors") {
  const Form a = wedge(e({1}, 2), e({2}, 2));
  CHECK(a.size() == 1);
  CHECK(a.coefficient(IndexSubset({1, 2}, 2)) == Complex(1.0));
  const Form b = wedge(e({2}, 2), e({1}, 2));
  CHECK(b.coefficient(IndexSubset({1, 2}, 2)) == Complex(-1.0));
  CHECK(wedge(e({1}, 2), e({1}, 2)).is_zero());
}

TEST_CASE("wedge rejects mismatched dimensions") {
  CHECK_THROWS_AS(wedge(e({1}, 2), e({1}, 3)), DimensionMismatch);
}

TEST_CASE("grade-2 forms on R^4 commute, against brute-force expansion") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Form a = random_complex_form(4, 2, 4, rng);
    const Form b = random_complex_form(4, 2, 4, rng);
    const Form ab = wedge(a, b);
    CHECK(max_abs_diff(ab, wedge(b, a)) < 1e-12);
    CHECK(max_abs_diff(ab, wedge_oracle(a, b)) < 1e-12);
  }
}

TEST_CASE("graded anticommutativity in exact arithmetic") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 11;
    const int p = 1 + static_cast<int>(rng() % std::min(n, 4));
    const int q = 1 + static_cast<int>(rng() % std::min(n, 4));
    const auto a = random_rational_form(n, p, 6, rng);
    const auto b = random_rational_form(n, q, 6, rng);
    auto ba = wedge(b, a);
    if ((p * q) % 2 == 1) ba = -ba;
    CHECK(exactly_equal(wedge(a, b), ba));
    CHECK(exactly_equal(wedge(a, b), wedge_oracle(a, b)));
  }
}

TEST_CASE("associativity in exact arithmetic") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 10;
    const auto a = random_rational_form(n, 1 + trial % 2, 5, rng);
    const auto b = random_rational_form(n, 1, 5, rng);
    const auto c = random_rational_form(n, 1 + trial % 3, 5, rng);
    CHECK(exactly_equal(wedge(wedge(a, b), c), wedge(a, wedge(b, c))));
  }
}

TEST_CASE("wedge result does not depend on the worker count") {
  std::mt19937_64 rng(3);
  const Form a = random_complex_form(14, 3, 600, rng);
  const Form b = random_complex_form(14, 3, 300, rng);
  set_thread_count(1);
  const Form serial = wedge(a, b);
  set_thread_count(4);
  const Form threaded = wedge(a, b);
  set_thread_count(1);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial.terms()[i].mask == threaded.terms()[i].mask);
    CHECK(serial.terms()[i].coeff == threaded.terms()[i].coeff);
  }
}

TEST_CASE("Berezin integral of permuted volume products is the permutation sign") {
  std::vector<int> sigma{1, 2, 3, 4};
  int count = 0;
  do {
    RationalForm f = RationalForm::constant(4, 1);
    for (int i : sigma) f = wedge(f, RationalForm::basis(IndexSubset({i}, 4)));
    const auto r = berezin(f, IndexSubset::full(4));
    CHECK(r.coefficient(Mask{0}) == Rational(sort_sign(sigma)));
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  CHECK(count == 24);
}

TEST_CASE("Berezin integral basics") {
  CHECK(berezin(e({1, 2}, 3), IndexSubset::full(3)).is_zero());
  CHECK(berezin(e({1, 2, 3}, 3), IndexSubset::full(3)).coefficient(Mask{0}) == Complex(1.0));
  // d/d eps_2 (eps_1 eps_2 eps_3) = -eps_1 eps_3
  const Form partial = berezin(e({1, 2, 3}, 3), IndexSubset({2}, 3));
  CHECK(partial.coefficient(IndexSubset({1, 3}, 3)) == Complex(-1.0));
  CHECK_THROWS_AS(berezin(e({1}, 2), IndexSubset({1}, 3)), DimensionMismatch);
}

TEST_CASE("truncated exponential") {
  const Form one = exp_truncated(Form(4), 4);
  CHECK(one.size() == 1);
  CHECK(one.coefficient(Mask{0}) == Complex(1.0));

  const Complex c(2.0, -1.0);
  const Form ex = exp_truncated(e({1, 2}, 4, c), 4);
  CHECK(ex.size() == 2);
  CHECK(ex.coefficient(IndexSubset({1, 2}, 4)) == c);

  const Complex a(1.5, 0.5), b(-0.25, 2.0);
  const Form w = e({1, 2}, 4, a) + e({3, 4}, 4, b);
  CHECK(rel_err(exp_truncated(w, 4).coefficient(full_mask(4)), a * b) < 1e-15);
  CHECK(exp_truncated(w, 2).coefficient(full_mask(4)) == Complex{});

  CHECK_THROWS_AS(exp_truncated(Form::constant(3, 1.0), 3), InvalidArgument);
  CHECK_THROWS_AS(exp_truncated(e({1}, 3), 4), InvalidArgument);
}

TEST_CASE("exponential factorizes over commuting even forms") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 7;
    const auto a = random_rational_form(n, 2, 4, rng);
    const auto b = random_rational_form(n, 2 + 2 * (trial % 2), 3, rng);
    CHECK(exactly_equal(exp_truncated(a + b, n), wedge(exp_truncated(a, n), exp_truncated(b, n))));
  }
}

TEST_CASE("Hyperpfaffian examples") {
  const Complex c(0.3, -0.7);
  CHECK(hyperpfaffian(e({1, 2}, 2, c), 1) == c);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Complex w[5][5];
  Form omega(4);
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      w[i][j] = Complex(g(rng), g(rng));
      omega += Form::basis(IndexSubset({i, j}, 4), w[i][j]);
    }
  }
  const Complex classical = w[1][2] * w[3][4] - w[1][3] * w[2][4] + w[1][4] * w[2][3];
  CHECK(rel_err(hyperpfaffian(omega, 2), classical) < 1e-14);
  CHECK(rel_err(be_vol(omega), classical) < 1e-14);

  CHECK_THROWS_AS(hyperpfaffian(omega + e({1}, 4), 2), InvalidArgument);
  CHECK_THROWS_AS(hyperpfaffian(omega, 3), InvalidArgument);
  CHECK(hyperpfaffian(Form(0), 0) == Complex(1.0));
}

TEST_CASE("grade-2 Hyperpfaffian matches cofactor Pfaffian and squares to the determinant") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 8; n += 2) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
      Form omega(n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          a[i][j] = Complex(g(rng), g(rng));
          a[j][i] = -a[i][j];
          omega += Form::basis(IndexSubset({i + 1, j + 1}, n), a[i][j]);
        }
      }
      const Complex pf = hyperpfaffian(omega, n / 2);
      CHECK(rel_err(pf, pfaffian_cofactor(a)) < 1e-12);
      CHECK(rel_err(pf * pf, det_laplace(a)) < 1e-10);
    }
  }
}

TEST_CASE("be_vol agrees with the Hyperpfaffian on homogeneous forms") {
  std::mt19937_64 rng(31);
  for (int g = 2; g <= 4; ++g) {
    for (int m = 1; m <= 3; ++m) {
      const int n = g * m;
      if (n > 12) continue;
      const Form w = random_complex_form(n, g, 40, rng);
      if (g % 2 == 1 && m > 1) {
        // odd forms square to zero; be_vol only up to rounding
        CHECK(hyperpfaffian(w, m) == Complex{});
        CHECK(std::abs(be_vol(w)) < 1e-12);
      } else {
        CHECK(rel_err(be_vol(w), hyperpfaffian(w, m)) < 1e-10);
      }
    }
  }
  const auto r = random_rational_form(6, 3, 12, rng);
  CHECK(be_vol(r) == hyperpfaffian(r, 2));
}

TEST_CASE("be_vol of an extended mixed-parity form") {
  // eps_12 * a + eps_3 ^ xi_1 * b with xi_1 = eps_4
  const Complex a(1.25, 0.0), b(0.0, -3.0);
  const Form w = e({1, 2}, 4, a) + wedge(e({3}, 4, b), Form::range_product(4, 4, 4));
  const Form expansion = wedge(e({1, 2}, 4, a), e({3, 4}, 4, b));
  CHECK(rel_err(be_vol(w, 1), expansion.coefficient(full_mask(4))) < 1e-15);
  CHECK(be_vol(Form(3)) == Complex{});
  CHECK_THROWS_AS(be_vol(Form::constant(2, 1.0)), InvalidArgument);
}

TEST_CASE("fugacity coefficients flow through exponentials") {
  // exp(z1 eps_12 + z2 eps_34) has volume coefficient z1 z2
  const FugacityPoly z1 = FugacityPoly::variable(0, 2), z2 = FugacityPoly::variable(1, 2);
  const FugacityForm w = FugacityForm::basis(IndexSubset({1, 2}, 4), z1) +
                         FugacityForm::basis(IndexSubset({3, 4}, 4), z2);
  const FugacityPoly v = be_vol(w);
  CHECK(v.terms().size() == 1);
  CHECK(v.coefficient({1, 1}) == Complex(1.0));
  CHECK(v.evaluate({2.0, 3.0}) == Complex(6.0));
}

TEST_CASE("JSON serialization is ordered and round-trips") {
  const Form f = e({2, 3}, 4, {1.0, 2.0}) + e({1, 4}, 4, -0.5) + e({1, 2}, 4, 3.0);
  const auto j = form_to_json(f);
  CHECK(j["N"] == 4);
  REQUIRE(j["terms"].size() == 3);
  CHECK(j["terms"][0]["indices"] == nlohmann::json({1, 2}));
  CHECK(j["terms"][1]["indices"] == nlohmann::json({1, 4}));
  CHECK(j["terms"][2]["indices"] == nlohmann::json({2, 3}));
  CHECK(max_abs_diff(form_from_json(j), f) == 0.0);
  CHECK_THROWS_AS(form_from_json(nlohmann::json{{"N", 2}, {"terms", {{{"indices", {2, 1}}, {"re", 1.0}}}}}),
                  InvalidArgument);
}

TEST_CASE("subset enumeration") {
  CHECK(k_subsets(6, 3).size() == 20);
  CHECK(k_subsets(5, 0).size() == 1);
  CHECK(binomial_count(64, 32) == 1832624140942590534ULL);
  CHECK(merge_sign(bit_of(2), bit_of(1)) == -1);
  CHECK(merge_sign(bit_of(1) | bit_of(3), bit_of(2) | bit_of(4)) == -1);
  CHECK(IndexSubset({1, 3, 4}, 5).index_sum() == 8);
  CHECK_THROWS_AS(IndexSubset({2, 2}, 3), InvalidArgument);
  CHECK_THROWS_AS(IndexSubset({4}, 3), InvalidArgument);
}
