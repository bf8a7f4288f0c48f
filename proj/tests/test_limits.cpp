#include <cmath>
#include <vector>

#include "doctest.h"
#include "constellation/ensembles.hpp"
#include "constellation/limits.hpp"
#include "test_support.hpp"

using namespace constellation;
using namespace test_support;

namespace {

EnsembleSpec mono(Geometry g, int L, int K, int M, std::vector<double> y) {
  EnsembleSpec s;
  s.geometry = g;
  s.L = L;
  s.K = K;
  s.M = M;
  s.y = std::move(y);
  return s;
}

}  // namespace

TEST_CASE("generic route reproduces the main partition function") {
  for (auto g : {Geometry::linear, Geometry::circular}) {
    for (const auto& spec : {mono(g, 1, 2, 2, {0.5, 1.2}), mono(g, 1, 1, 3, {1}), mono(g, 1, 3, 2, {0.5, 1, 1.5}),
                             mono(g, 1, 3, 3, {0.5, 1, 1.5}), mono(g, 2, 2, 2, {0.5, 1.2})}) {
      const Complex z = partition_function(spec).value;
      INFO(to_string(g), " L=", spec.L, " K=", spec.K, " M=", spec.M);
      CHECK(rel_err(generic_route_partition(spec), z) < 1e-10);
      CHECK(rel_err(extended_precision_partition(spec), z) < 1e-10);
    }
  }
}

TEST_CASE("collapsed limit with one line is exact") {
  const std::vector<double> s = {1e-1, 1e-2};
  const auto rep = collapsed_limit_check(mono(Geometry::linear, 2, 1, 3, {1.0}), s);
  for (const auto& p : rep.points) CHECK(p.error < 1e-12);
  CHECK(rep.passed);
}

TEST_CASE("collapsed lines converge to the charge-K one-dimensional ensemble") {
  const std::vector<double> s = {1e-1, 1e-2, 1e-3, 1e-4};
  for (auto [L, K] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
    std::vector<double> y0;
    for (int k = 0; k < K; ++k) y0.push_back(0.3 + k);
    const auto rep = collapsed_limit_check(mono(Geometry::linear, L, K, 2, y0), s);
    INFO("L=", L, " K=", K, " order=", rep.order, " last=", rep.points.back().error);
    CHECK(rep.monotone);
    CHECK(rep.order >= 1.0);
    CHECK(rep.points.back().error < 1e-6);
    CHECK(rep.passed);
  }
}

TEST_CASE("collapsed circles converge to the one-dimensional circular ensemble") {
  const std::vector<double> s = {1e-1, 1e-2, 1e-3};
  const auto rep = collapsed_limit_check(mono(Geometry::circular, 1, 2, 2, {1, 2}), s);
  INFO("order=", rep.order);
  CHECK(rep.passed);
  CHECK(rep.points.back().error < 1e-2);
}

TEST_CASE("double precision breaks down where extended precision does not") {
  // the minors shrink like s^{R2}: L = 2, K = 2 has R2 = 4
  const std::vector<double> s = {1e-5};
  LimitOptions plain;
  plain.extended_precision = false;
  auto spec = mono(Geometry::linear, 2, 2, 2, {0.3, 1.3});
  double dbl = 1.0;
  try {
    dbl = collapsed_limit_check(spec, s, plain).points[0].error;
  } catch (const IntegrityError&) {
    dbl = 1.0;
  }
  const double ext = collapsed_limit_check(spec, s).points[0].error;
  CHECK(ext < 1e-9);
  CHECK(dbl > 100 * ext);
}

TEST_CASE("separated lines: integrand ratio tends to the beta = sum L^2 factor") {
  const std::vector<double> h = {1e1, 1e2, 1e3, 1e4};
  const auto rep = separated_limit_check(mono(Geometry::linear, 1, 2, 2, {0, 1}), h);
  INFO("order=", rep.order);
  CHECK(rep.passed);
  CHECK(rep.points.back().error < 1e-3);
  REQUIRE(rep.partition.size() == h.size());
  CHECK(rep.partition.back().error < rep.partition.front().error);
  CHECK(rep.partition.back().error < 1e-4);
}

TEST_CASE("one constellation: separated ratio is identically one") {
  const std::vector<double> x = {0.4};
  for (double h : {1.0, 10.0, 1e3}) {
    CHECK(separated_integrand_ratio(mono(Geometry::linear, 2, 3, 1, {0, 1, 2}), x, h) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("separated circles keep an angular factor") {
  auto spec = mono(Geometry::circular, 1, 2, 2, {1, 2});
  const std::vector<double> h = {1e1, 1e2, 1e3, 1e4};
  const auto rep = separated_limit_check(spec, h);
  CHECK(rep.passed);
  // against |Delta(e^{ix})|^2 alone the ratio does not approach one
  const std::vector<double> x = {0.3, 2.9};
  const double ratio = separated_integrand_ratio(spec, x, 1e6) * separated_limit_factor(spec, x);
  const double bare = std::pow(std::abs(std::polar(1.0, x[1]) - std::polar(1.0, x[0])), 2);
  CHECK(std::abs(ratio / bare - 1.0) > 0.5);
}

TEST_CASE("fitted order of a clean power law") {
  const std::vector<double> d = {1e-1, 1e-2, 1e-3};
  const std::vector<double> e = {3e-2, 3e-4, 3e-6};
  CHECK(fit_order(d, e, 0.0) == doctest::Approx(2.0));
}
