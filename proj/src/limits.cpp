#include "constellation/limits.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "constellation/ensembles.hpp"
#include "constellation/measures.hpp"
#include "constellation/quadrature.hpp"

namespace constellation {
namespace {

using HP = boost::multiprecision::cpp_complex_50;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kGenericTableCap = 4'000'000;

Complex to_double(const HP& c) {
  return {static_cast<double>(c.real()), static_cast<double>(c.imag())};
}

int minor_degree(const Shape& shape, int n) {
  const int g = shape.R1();
  int d = 0;
  for (int r = n - g + 1; r <= n; ++r) d += r - 1;
  for (int l : shape.L) d -= l * (l - 1) / 2;
  return std::max(d, 0);
}

// Minors of every grade-g subset at one node, in scalar type C.
template <class C>
struct GenericMinors {
  const EnsembleSpec& spec;
  Shape shape;
  PolynomialFamily fam;
  int n = 0;
  int g = 0;
  std::vector<Mask> subsets;
  std::vector<C> y;

  explicit GenericMinors(const EnsembleSpec& s)
      : spec(s), shape(s.line_shape()), fam(s.family.build(s.dimension())), n(s.dimension()),
        g(shape.R1()), subsets(k_subsets(n, g)) {
    for (double v : s.y) y.emplace_back(v);
  }

  std::vector<C> at(double x) const {
    const C xc(x);
    const auto cols = spec.geometry == Geometry::linear ? line_columns<C>(xc, y, shape.L)
                                                        : circle_columns<C>(xc, y, shape.L);
    std::vector<C> table(static_cast<std::size_t>(n) * g);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < g; ++c) table[static_cast<std::size_t>(r) * g + c] = fam.value(r + 1, cols[c].l, cols[c].z);
    }
    std::vector<C> out(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      SquareMatrix<C> a(g);
      int r = 0;
      for (Mask m = subsets[i]; m; m &= m - 1, ++r) {
        const int row = std::countr_zero(m);
        for (int c = 0; c < g; ++c) a(r, c) = table[static_cast<std::size_t>(row) * g + c];
      }
      out[i] = determinant(std::move(a));
    }
    return out;
  }
};

template <class C>
C generic_partition(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.kind == EnsembleKind::multicomponent) {
    throw InvalidArgument("generic route: monocharge or homogeneous specs only");
  }
  if (spec.M == 0) return C(1);
  const GenericMinors<C> minors(spec);
  const Measure mu = constellation_measure(spec);
  const int n = minors.n;
  const int g = minors.g;
  const int degree = minor_degree(minors.shape, n);
  const bool line = spec.geometry == Geometry::linear;
  const std::size_t count = minors.subsets.size();

  std::optional<CompositeGrid> grid;
  if (line) {
    const double X = gaussian_truncation(mu.kappa, degree, 1e-18);
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * X * std::sqrt(mu.kappa))));
    grid.emplace(-X, X, panels, 16);
  } else {
    const double omega = degree + 0.5 * std::abs(static_cast<double>(mu.twice_frequency())) + 1.0;
    grid.emplace(0.0, kTwoPi, std::max(8, static_cast<int>(std::ceil(kTwoPi * omega / 8.0))), 16);
  }

  auto gamma = [&]() {
    std::vector<C> acc(count, C(0));
    if (line) {
      const GaussRule& gh = gauss_hermite(std::max(2, (degree + 1) / 2 + 1 + 4));
      const double scale = 1.0 / std::sqrt(mu.kappa);
      for (int j = 0; j < gh.size(); ++j) {
        const auto v = minors.at(gh.nodes[j] * scale);
        const C w(gh.weights[j] * scale);
        for (std::size_t i = 0; i < count; ++i) acc[i] += w * v[i];
      }
      for (auto& a : acc) a *= C(mu.phase);
    } else {
      for (std::size_t j = 0; j < grid->size(); ++j) {
        const double x = grid->nodes()[j];
        const auto v = minors.at(x);
        const C w = C(grid->weights()[j]) * C(mu.density(x));
        for (std::size_t i = 0; i < count; ++i) acc[i] += w * v[i];
      }
    }
    std::vector<typename BasicForm<C>::Term> terms;
    for (std::size_t i = 0; i < count; ++i) terms.push_back({minors.subsets[i], acc[i]});
    return BasicForm<C>::from_terms(n, std::move(terms));
  };

  if (g % 2 == 0) return hyperpfaffian(gamma(), spec.M);

  // odd blocks need eta: ordered double integrals on the grid
  const std::size_t nodes = grid->size();
  if (count * nodes > kGenericTableCap) throw ResourceLimitExceeded("generic route: minor table too large");
  std::vector<C> F(count * nodes), R(count * nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double x = grid->nodes()[j];
    const auto v = minors.at(x);
    const C d(mu.density(x));
    for (std::size_t i = 0; i < count; ++i) F[i * nodes + j] = v[i] * d;
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<C> row(F.begin() + i * nodes, F.begin() + (i + 1) * nodes);
    const auto run = grid->running_integral_as(row);
    std::copy(run.begin(), run.end(), R.begin() + i * nodes);
  }
  const auto& W = grid->weights();
  std::vector<typename BasicForm<C>::Term> terms;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      const Mask t = minors.subsets[a], s = minors.subsets[b];
      if (t & s) continue;
      C v(0);
      for (std::size_t j = 0; j < nodes; ++j) v += C(W[j]) * F[b * nodes + j] * R[a * nodes + j];
      terms.push_back({t | s, C(static_cast<double>(merge_sign(t, s))) * v});
    }
  }
  const BasicForm<C> eta = BasicForm<C>::from_terms(n, std::move(terms));
  if (spec.M % 2 == 0) return hyperpfaffian(eta, spec.M / 2);
  const int ext = n + g;
  const auto xi = BasicForm<C>::range_product(ext, n + 1, ext);
  const BasicForm<C> omega = eta.embedded(ext) + wedge(gamma().embedded(ext), xi);
  return hyperpfaffian(omega, (spec.M + 1) / 2);
}

// Delta^L(i y) on the line, Delta^L(y) on circles, in scalar C.
template <class C>
C translation_vandermonde(const EnsembleSpec& spec) {
  const Shape shape = spec.line_shape();
  std::vector<C> v;
  for (double y : spec.y) v.push_back(spec.geometry == Geometry::linear ? C(0.0, y) : C(y));
  return weighted_vandermonde<C>(v, shape.L);
}

template <class C>
C power(C base, int e) {
  C r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

EnsembleSpec one_dimensional_target(const EnsembleSpec& spec) {
  EnsembleSpec t = spec;
  t.id = spec.id + "-1d";
  t.kind = EnsembleKind::monocharge;
  t.L = spec.line_shape().R1();
  t.K = 1;
  t.line_charges.clear();
  t.y = {spec.geometry == Geometry::linear ? 0.0 : 1.0};
  return t;
}

bool check_monotone(const std::vector<LimitPoint>& pts, double floor) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].error > pts[i - 1].error && pts[i].error > floor) return false;
  }
  return true;
}

}  // namespace

Complex extended_precision_partition(const EnsembleSpec& spec) { return to_double(generic_partition<HP>(spec)); }
Complex generic_route_partition(const EnsembleSpec& spec) { return generic_partition<Complex>(spec); }

std::vector<double> collapsed_translations(const EnsembleSpec& spec, double s) {
  std::vector<double> y(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    y[k] = spec.geometry == Geometry::linear ? s * spec.y.at(k) : 1.0 + s * (k + 1);
  }
  return y;
}

std::vector<double> separated_translations(const EnsembleSpec& spec, double h) {
  std::vector<double> y(spec.K);
  for (int k = 0; k < spec.K; ++k) y[k] = spec.geometry == Geometry::linear ? k * h : 1.0 + h * (k + 1);
  return y;
}

double fit_order(std::span<const double> distance, std::span<const double> errors, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < distance.size(); ++i) {
    if (!(errors[i] > floor) || !(distance[i] > 0)) continue;
    const double lx = std::log(distance[i]), ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

LimitReport collapsed_limit_check(const EnsembleSpec& spec, std::span<const double> scales,
                                  const LimitOptions& opts) {
  spec.validate();
  if (spec.kind == EnsembleKind::multicomponent) {
    throw InvalidArgument("collapsed_limit_check: monocharge or homogeneous spec required");
  }
  LimitReport rep;
  rep.kind = "collapsed";
  const Complex z1 = partition_function(one_dimensional_target(spec)).value;
  std::vector<double> dist, errs;
  for (double s : scales) {
    EnsembleSpec at = spec;
    at.y = collapsed_translations(spec, s);
    Complex ratio, target;
    if (opts.extended_precision) {
      const HP z = generic_partition<HP>(at);
      const HP d = power(translation_vandermonde<HP>(at), spec.M);
      ratio = to_double(HP(z / d));
      const HP phase = HP(abs(d)) / d;
      target = to_double(phase) * z1;
    } else {
      const Complex z = partition_function(at).value;
      const Complex d = power(translation_vandermonde<Complex>(at), spec.M);
      ratio = z / d;
      target = std::abs(d) / d * z1;
    }
    rep.target = target;
    const double err = std::abs(ratio - target) / std::abs(target);
    rep.points.push_back({s, ratio, err});
    dist.push_back(s);
    errs.push_back(err);
  }
  if (spec.K == 1) rep.notes.push_back("K = 1: nothing collapses, the ratio is exact");
  rep.order = fit_order(dist, errs, opts.noise_floor);
  rep.monotone = check_monotone(rep.points, opts.noise_floor);
  const bool all_floor = std::all_of(errs.begin(), errs.end(), [&](double e) { return e <= opts.noise_floor; });
  rep.passed = rep.monotone && (all_floor || rep.order >= opts.min_order - opts.order_tolerance);
  return rep;
}

double separated_log_normalisation(const EnsembleSpec& spec, double h) {
  const Shape shape = spec.line_shape();
  const int K = shape.count();
  const double pairs = 0.5 * spec.M * (spec.M - 1);
  double s = 0.0;
  if (spec.geometry == Geometry::linear) {
    for (int j = 0; j < K; ++j) {
      for (int k = j + 1; k < K; ++k) {
        const double d = (k - j) * h;
        s += shape.L[j] * shape.L[k] * std::log1p(d * d);
      }
    }
  } else {
    for (int j = 0; j < K; ++j) {
      for (int k = 0; k < K; ++k) {
        if (j != k) s += shape.L[j] * shape.L[k] * std::log1p(h * std::abs(k - j));
      }
      s += shape.L[j] * shape.L[j] * std::log1p(h * (j + 1));
    }
  }
  return pairs * s;
}

double separated_limit_factor(const EnsembleSpec& spec, std::span<const double> x) {
  const Shape shape = spec.line_shape();
  const int K = shape.count();
  int beta = 0;
  for (int l : shape.L) beta += l * l;
  double logv = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (std::size_t n = m + 1; n < x.size(); ++n) {
      if (spec.geometry == Geometry::linear) {
        logv += beta * std::log(std::abs(x[n] - x[m]));
      } else {
        const auto em = std::polar(1.0, x[m]), en = std::polar(1.0, x[n]);
        logv += beta * std::log(std::abs(en - em));
        for (int j = 0; j < K; ++j) {
          for (int k = 0; k < K; ++k) {
            if (j == k) continue;
            const double r = std::abs((k + 1.0) * em - (j + 1.0) * en) / std::abs(k - j);
            logv += shape.L[j] * shape.L[k] * std::log(r);
          }
        }
      }
    }
  }
  return std::exp(logv);
}

double separated_integrand_ratio(const EnsembleSpec& spec, std::span<const double> x, double h) {
  const Shape shape = spec.line_shape();
  const int K = shape.count();
  const auto y = separated_translations(spec, h);
  const bool line = spec.geometry == Geometry::linear;
  auto point = [&](std::size_t m, int k) {
    return line ? std::complex<double>(x[m], y[k]) : std::polar(y[k], x[m]);
  };
  double logv = 0.0;
  // all particle pairs, minus the same-constellation ones (they make |Delta^L(y)|^M)
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (std::size_t n = m + 1; n < x.size(); ++n) {
      for (int j = 0; j < K; ++j) {
        for (int k = 0; k < K; ++k) {
          logv += shape.L[j] * shape.L[k] * std::log(std::abs(point(n, k) - point(m, j)));
        }
      }
    }
  }
  logv -= separated_log_normalisation(spec, h);
  return std::exp(logv) / separated_limit_factor(spec, x);
}

LimitReport separated_limit_check(const EnsembleSpec& spec, std::span<const double> hs,
                                  const SeparatedOptions& opts) {
  spec.validate();
  if (spec.kind == EnsembleKind::multicomponent) {
    throw InvalidArgument("separated_limit_check: monocharge or homogeneous spec required");
  }
  LimitReport rep;
  rep.kind = "separated";
  rep.target = 1.0;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<std::vector<double>> samples;
  for (int p = 0; p < opts.sample_points; ++p) {
    std::vector<double> x(spec.M);
    for (auto& v : x) v = spec.geometry == Geometry::linear ? normal(rng) : angle(rng);
    std::sort(x.begin(), x.end());
    samples.push_back(std::move(x));
  }
  std::vector<double> dist, errs;
  for (double h : hs) {
    double worst = 0.0;
    Complex worst_ratio = 1.0;
    for (const auto& x : samples) {
      const double r = separated_integrand_ratio(spec, x, h);
      if (std::abs(r - 1.0) >= worst) {
        worst = std::abs(r - 1.0);
        worst_ratio = r;
      }
    }
    rep.points.push_back({h, worst_ratio, worst});
    dist.push_back(1.0 / h);
    errs.push_back(worst);
  }
  if (spec.geometry == Geometry::circular) {
    rep.notes.push_back("circular target includes the angular factor |k e^{ix_m} - j e^{ix_n}| / |k - j| for cross-circle pairs");
  }
  if (opts.partition_ratio && spec.geometry == Geometry::linear && spec.M == 2) {
    // Z ratio against int_{x1<x2} |x2 - x1|^beta e^{-kappa (x1^2 + x2^2)}
    const Shape shape = spec.line_shape();
    int beta = 0;
    for (int l : shape.L) beta += l * l;
    const double kappa = 0.5 * shape.R1() * spec.strength;
    const double z1 = std::pow(2.0, 0.5 * beta) * std::tgamma(0.5 * (beta + 1)) /
                      (2.0 * std::pow(kappa, 0.5 * (beta + 1))) * std::sqrt(std::numbers::pi / kappa);
    for (double h : hs) {
      EnsembleSpec at = spec;
      at.y = separated_translations(spec, h);
      try {
        const Complex z = partition_function(at).value;
        const double logd = std::log(std::abs(translation_vandermonde<Complex>(at)));
        const double scale = std::exp(spec.M * logd + separated_log_normalisation(spec, h));
        const Complex ratio = std::abs(z) / scale;
        rep.partition.push_back({h, ratio, std::abs(ratio - z1) / z1});
      } catch (const std::exception& e) {
        rep.notes.push_back("partition ratio at h=" + std::to_string(h) + ": " + e.what());
      }
    }
  }
  rep.order = fit_order(dist, errs, opts.noise_floor);
  rep.monotone = check_monotone(rep.points, opts.noise_floor);
  const bool all_floor = std::all_of(errs.begin(), errs.end(), [&](double e) { return e <= opts.noise_floor; });
  rep.passed = rep.monotone && (all_floor || rep.order >= opts.min_order - opts.order_tolerance);
  return rep;
}

}  // namespace constellation
