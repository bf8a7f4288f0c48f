#include "constellation/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "constellation/parallel.hpp"
#include "constellation/quadrature.hpp"

namespace constellation {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kShards = 64;

struct Particle {
  int constellation;
  int line;
  int charge;
};

// per-constellation line charges
std::vector<std::vector<int>> constellation_charges(const EnsembleSpec& spec, std::span<const int> species,
                                                    std::size_t count) {
  std::vector<std::vector<int>> out;
  for (std::size_t m = 0; m < count; ++m) {
    if (spec.kind == EnsembleKind::multicomponent) {
      out.emplace_back(spec.K, spec.charges.at(species[m]));
    } else {
      out.push_back(spec.line_shape().L);
    }
  }
  return out;
}

double log_omega(std::span<const double> x, const std::vector<std::vector<int>>& q, const EnsembleSpec& spec) {
  const bool line = spec.geometry == Geometry::linear;
  const std::size_t M = x.size();
  const int K = spec.K;
  double logv = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      // partners later in the same constellation
      for (int l = k + 1; l < K; ++l) {
        const double d = std::abs(spec.y[l] - spec.y[k]);
        logv += q[m][k] * q[m][l] * std::log(d);
      }
      for (std::size_t n = m + 1; n < M; ++n) {
        for (int l = 0; l < K; ++l) {
          double d;
          if (line) {
            d = std::hypot(x[n] - x[m], spec.y[l] - spec.y[k]);
          } else {
            const std::complex<double> za = std::polar(spec.y[k], x[m]);
            const std::complex<double> zb = std::polar(spec.y[l], x[n]);
            d = std::abs(zb - za);
          }
          if (d == 0.0) return -INFINITY;
          logv += q[m][k] * q[n][l] * std::log(d);
        }
      }
    }
    if (line) {
      const int r1 = std::accumulate(q[m].begin(), q[m].end(), 0);
      logv -= r1 * spec.strength * 0.5 * x[m] * x[m];
    }
  }
  return logv;
}

double omega(std::span<const double> x, const std::vector<std::vector<int>>& q, const EnsembleSpec& spec) {
  const double l = log_omega(x, q, spec);
  return std::isinf(l) ? 0.0 : std::exp(l);
}

// distinct species words with the given counts, in lexicographic order
std::vector<std::vector<int>> species_words(std::span<const int> populations) {
  std::vector<int> word;
  for (std::size_t j = 0; j < populations.size(); ++j) word.insert(word.end(), populations[j], static_cast<int>(j));
  std::vector<std::vector<int>> out;
  do {
    out.push_back(word);
  } while (std::next_permutation(word.begin(), word.end()));
  return out;
}

double smallest_kappa(const EnsembleSpec& spec) {
  if (spec.kind == EnsembleKind::multicomponent) {
    int lmin = *std::min_element(spec.charges.begin(), spec.charges.end());
    return 0.5 * spec.K * lmin * spec.strength;
  }
  return 0.5 * spec.line_shape().R1() * spec.strength;
}

int growth_degree(const EnsembleSpec& spec, const std::vector<std::vector<int>>& q) {
  // largest total interaction exponent of one constellation
  int total = 0;
  std::vector<int> r(q.size());
  for (std::size_t m = 0; m < q.size(); ++m) {
    r[m] = std::accumulate(q[m].begin(), q[m].end(), 0);
    total += r[m];
  }
  int best = 0;
  for (int rm : r) best = std::max(best, rm * (total - rm));
  (void)spec;
  return best;
}

struct NestedIntegrator {
  const EnsembleSpec& spec;
  const std::vector<std::vector<int>>& q;
  double lower, panel_width;
  int m;
  std::vector<double> x;
  std::uint64_t evaluations = 0;

  // integrates x[0..level] below `upper`, x[level+1..] fixed
  double integrate(int level, double upper) {
    if (!(upper > lower)) return 0.0;
    const GaussRule& g = gauss_legendre(m);
    const int panels = std::max(1, static_cast<int>(std::ceil((upper - lower) / panel_width - 1e-12)));
    const double width = (upper - lower) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lower + (p + 0.5) * width;
      for (int i = 0; i < m; ++i) {
        x[level] = mid + 0.5 * width * g.nodes[i];
        const double w = 0.5 * width * g.weights[i];
        if (level == 0) {
          ++evaluations;
          total += w * omega(x, q, spec);
        } else {
          total += w * integrate(level - 1, x[level]);
        }
      }
    }
    return total;
  }
};

}  // namespace

double boltzmann_factor(std::span<const double> x, const EnsembleSpec& spec) {
  if (spec.kind == EnsembleKind::multicomponent) {
    throw InvalidArgument("boltzmann_factor: use boltzmann_factor_species for multicomponent specs");
  }
  const auto q = constellation_charges(spec, {}, x.size());
  return omega(x, q, spec);
}

double boltzmann_factor_species(std::span<const double> x, std::span<const int> species,
                                const EnsembleSpec& spec) {
  if (species.size() != x.size()) throw DimensionMismatch("boltzmann_factor_species: label count");
  const auto q = constellation_charges(spec, species, x.size());
  return omega(x, q, spec);
}

OracleResult oracle_partition(const EnsembleSpec& spec, const OracleConfig& cfg) {
  spec.validate();
  if (spec.grand_canonical()) throw InvalidArgument("oracle_partition: fixed populations required");
  std::vector<std::vector<int>> words;
  std::size_t count = 0;
  double symmetry = 1.0;  // 1 / prod M_j! for Monte Carlo over all of R^n
  if (spec.kind == EnsembleKind::multicomponent) {
    words = species_words(spec.populations);
    for (int m : spec.populations) {
      count += m;
      symmetry /= std::tgamma(m + 1.0);
    }
  } else {
    count = static_cast<std::size_t>(spec.M);
    words.emplace_back(count, 0);
    symmetry = 1.0 / std::tgamma(count + 1.0);
  }
  OracleResult out;
  if (count == 0) {
    out.value = 1.0;
    out.method = "empty";
    return out;
  }
  const bool line = spec.geometry == Geometry::linear;
  double lo = 0.0, hi = kTwoPi;
  if (line) {
    std::vector<int> labels(count, 0);
    if (spec.kind == EnsembleKind::multicomponent) labels = words.front();
    const auto q = constellation_charges(spec, labels, count);
    const double X = cfg.truncation > 0.0
                         ? cfg.truncation
                         : gaussian_truncation(smallest_kappa(spec), growth_degree(spec, q), 1e-17);
    lo = -X;
    hi = X;
  }

  if (cfg.method == OracleConfig::Method::nested_quadrature) {
    if (static_cast<int>(count) > cfg.max_nested_particles) {
      throw ResourceLimitExceeded("oracle_partition: nested quadrature supports at most " +
                                  std::to_string(cfg.max_nested_particles) + " constellations");
    }
    const int m = std::max(2, cfg.points_per_panel);
    const double panel_width = (hi - lo) / std::max(1, cfg.nodes_per_dim / m);
    double total = 0.0;
    for (const auto& word : words) {
      const auto q = constellation_charges(spec, word, count);
      NestedIntegrator integ{spec, q, lo, panel_width, m, std::vector<double>(count, 0.0)};
      total += integ.integrate(static_cast<int>(count) - 1, hi);
      out.evaluations += integ.evaluations;
    }
    out.value = total;
    out.method = "nested_quadrature";
    return out;
  }

  // Monte Carlo over all positions with a fixed label assignment
  std::vector<int> labels = words.front();
  const auto q = constellation_charges(spec, labels, count);
  std::vector<double> kappa(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    kappa[i] = 0.5 * std::accumulate(q[i].begin(), q[i].end(), 0) * spec.strength;
  }
  const std::uint64_t per_shard = std::max<std::uint64_t>(1, cfg.samples / kShards);
  std::vector<double> sums(kShards, 0.0), squares(kShards, 0.0);
  parallel_chunks(kShards, 1, [&](std::size_t, std::size_t, std::size_t shard) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(shard)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    std::vector<double> x(count);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t it = 0; it < per_shard; ++it) {
      double log_proposal = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        if (line) {
          const double sigma = 1.0 / std::sqrt(2.0 * kappa[i]);
          const double u = normal(rng);
          x[i] = sigma * u;
          log_proposal += -0.5 * u * u - std::log(sigma * std::sqrt(kTwoPi));
        } else {
          x[i] = uniform(rng);
          log_proposal -= std::log(kTwoPi);
        }
      }
      const double lw = log_omega(x, q, spec);
      const double f = std::isinf(lw) ? 0.0 : std::exp(lw - log_proposal);
      s += f;
      s2 += f * f;
    }
    sums[shard] = s;
    squares[shard] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < kShards; ++i) {
    s += sums[i];
    s2 += squares[i];
  }
  const double n = static_cast<double>(per_shard * kShards);
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  out.value = symmetry * mean;
  out.std_error = symmetry * std::sqrt(var / n);
  out.evaluations = per_shard * kShards;
  out.method = "monte_carlo";
  out.flagged = cfg.tolerance > 0.0 && out.std_error > cfg.tolerance * std::abs(out.value);
  return out;
}

}  // namespace constellation
