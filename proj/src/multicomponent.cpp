#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "constellation/ensembles.hpp"

namespace constellation {
namespace {

constexpr std::uint64_t kWordCap = 1'000'000;
constexpr int kSymbolicDimensionCap = 16;

std::vector<Block> species_blocks(const EnsembleSpec& spec, std::span<const int> populations) {
  std::vector<Block> blocks;
  for (int j = 0; j < spec.species(); ++j) {
    blocks.push_back({Shape::uniform(spec.charges[j], spec.K), species_measure(spec, j, populations)});
  }
  return blocks;
}

bool any_half_integer(const std::vector<Block>& blocks, std::span<const int> populations) {
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if ((populations.empty() || populations[j] > 0) && blocks[j].measure.half_integer()) return true;
  }
  return false;
}

FugacityForm lift(const Form& f, const FugacityPoly& weight) {
  std::vector<FugacityForm::Term> terms;
  for (const auto& t : f.terms()) terms.push_back({t.mask, weight.scaled(t.coeff)});
  return FugacityForm::from_terms(f.dim(), std::move(terms));
}

Form embed_with_tail(const Form& f, int ext_dim) {
  // f ^ eps_{ext_dim}
  return wedge(f.embedded(ext_dim), Form::range_product(ext_dim, ext_dim, ext_dim));
}

/// sum_even z_j gamma_j + sum_{odd j,k} z_j z_k eta_{jk} [+ sum_odd z_j gamma_j ^ eps_{N+1}]
FugacityForm generating_form(FormBuilder& builder, const EnsembleSpec& spec, int n) {
  const int J = spec.species();
  const bool odd_n = n % 2 == 1;
  const int dim = odd_n ? n + 1 : n;
  FugacityForm w(dim);
  for (int j = 0; j < J; ++j) {
    const int g = spec.charges[j] * spec.K;
    if (g > n) continue;
    const FugacityPoly zj = FugacityPoly::variable(j, J);
    if (g % 2 == 0) {
      w += lift(builder.gamma(j).embedded(dim), zj);
    } else {
      if (odd_n) w += lift(embed_with_tail(builder.gamma(j), dim), zj);
      for (int k = 0; k < J; ++k) {
        const int h = spec.charges[k] * spec.K;
        if (h % 2 == 0 || g + h > n) continue;
        w += lift(builder.eta(j, k).embedded(dim), zj * FugacityPoly::variable(k, J));
      }
    }
  }
  return w;
}

Form numeric_generating_form(FormBuilder& builder, const EnsembleSpec& spec, int n) {
  const int J = spec.species();
  const bool odd_n = n % 2 == 1;
  const int dim = odd_n ? n + 1 : n;
  Form w(dim);
  for (int j = 0; j < J; ++j) {
    const int g = spec.charges[j] * spec.K;
    if (g > n) continue;
    const Complex zj = spec.fugacities[j];
    if (g % 2 == 0) {
      w += builder.gamma(j).embedded(dim) * zj;
    } else {
      if (odd_n) w += embed_with_tail(builder.gamma(j), dim) * zj;
      for (int k = 0; k < J; ++k) {
        const int h = spec.charges[k] * spec.K;
        if (h % 2 == 0 || g + h > n) continue;
        w += builder.eta(j, k).embedded(dim) * (zj * spec.fugacities[k]);
      }
    }
  }
  return w;
}

void fill_stats(Diagnostics& d, const FormBuilder& builder) {
  const FormStats s = builder.stats();
  d.candidate_terms = s.candidates;
  d.kept_terms = s.kept;
  d.dropped_terms = s.dropped;
  d.quadrature = builder.quadrature_description();
}

void require_agreement(const std::string& what, Complex a, Complex b, double rel, double floor) {
  const double diff = std::abs(a - b);
  if (diff > rel * std::max(std::abs(a), std::abs(b)) + floor) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": routes disagree (" << a << " vs " << b << ")";
    throw IntegrityError(msg.str());
  }
}

double form_mass(const Form& f) {
  double s = 0.0;
  for (const auto& t : f.terms()) s += std::abs(t.coeff);
  return s;
}

}  // namespace

std::uint64_t word_count(std::span<const int> counts) {
  std::uint64_t total = 1;
  int placed = 0;
  for (int c : counts) {
    for (int i = 1; i <= c; ++i) {
      ++placed;
      total = total * static_cast<std::uint64_t>(placed) / static_cast<std::uint64_t>(i);
      if (total > kWordCap * 1000) return total;
    }
  }
  return total;
}

std::vector<std::vector<int>> admissible_populations(std::span<const int> charges, int K, int dimension) {
  std::vector<std::vector<int>> out;
  if (K < 1 || dimension < 0 || dimension % K != 0) return out;
  const int target = dimension / K;
  std::vector<int> current(charges.size(), 0);
  auto rec = [&](auto&& self, std::size_t j, int remaining) -> void {
    if (j == charges.size()) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    for (int m = 0; m * charges[j] <= remaining; ++m) {
      current[j] = m;
      self(self, j + 1, remaining - m * charges[j]);
    }
    current[j] = 0;
  };
  rec(rec, 0, target);
  return out;
}

PartitionResult canonical_multicomponent_Z(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  spec.validate();
  if (spec.kind != EnsembleKind::multicomponent || spec.populations.empty()) {
    throw InvalidArgument("canonical_multicomponent_Z: multicomponent spec with populations required");
  }
  const int n = spec.dimension();
  const int J = spec.species();
  PartitionResult r;
  auto& d = r.diagnostics;
  d.dimension = n;
  d.effective_dimension = n;
  if (n == 0) {
    r.value = 1.0;
    r.route = "berezin";
    r.case_label = "empty";
    r.routes.push_back({"berezin", r.value, 0.0});
    return r;
  }
  FormBuilder builder(spec, species_blocks(spec, spec.populations), n, settings);
  d.half_integer_phase = any_half_integer(builder.blocks(), spec.populations);
  if (d.half_integer_phase) d.notes.push_back("half_integer_phase");

  // even-grade species
  Form even = Form::constant(n, 1.0);
  std::vector<int> odd_species, odd_counts;
  for (int j = 0; j < J; ++j) {
    const int m = spec.populations[j];
    if (m == 0) continue;
    if ((spec.charges[j] * spec.K) % 2 == 0) {
      even = wedge(even, divided_power(builder.gamma(j), m));
    } else {
      odd_species.push_back(j);
      odd_counts.push_back(m);
    }
  }
  const int odd_total = std::accumulate(odd_counts.begin(), odd_counts.end(), 0);
  const std::uint64_t words = word_count(odd_counts);
  if (words > kWordCap) {
    throw ResourceLimitExceeded("canonical_multicomponent_Z: " + std::to_string(words) +
                                " shuffle words exceed the enumeration cap");
  }
  d.enumerated_words = odd_species.empty() ? 0 : words;

  // sum over species words, consecutive letters paired into eta forms and a
  // trailing gamma when the odd count is odd
  Form odd_sum(n);
  std::vector<int> counts = odd_counts;
  auto dfs = [&](auto&& self, const Form& partial, int remaining) -> void {
    if (partial.is_zero()) return;
    if (remaining == 0) {
      odd_sum += partial;
      return;
    }
    if (remaining == 1) {
      for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] > 0) odd_sum += wedge(partial, builder.gamma(odd_species[a]));
      }
      return;
    }
    for (std::size_t a = 0; a < counts.size(); ++a) {
      if (counts[a] == 0) continue;
      --counts[a];
      for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b] == 0) continue;
        --counts[b];
        self(self, wedge(partial, builder.eta(odd_species[a], odd_species[b])), remaining - 2);
        ++counts[b];
      }
      ++counts[a];
    }
  };
  dfs(dfs, even, odd_total);
  long pairs = odd_total / 2;
  for (long m = 2; m <= pairs; ++m) odd_sum = odd_sum.divided_by(m);
  const Complex value = odd_sum.coefficient(full_mask(n));

  r.value = value;
  r.route = "berezin";
  r.case_label = odd_species.empty() ? (spec.K % 2 == 0 ? "all_even_fast_path" : "even_species")
                                     : "shuffle_pairing";
  r.routes.push_back({"berezin", value, 0.0});

  // independent route: coefficient extraction from the symbolic generating form
  if (n <= kSymbolicDimensionCap) {
    const FugacityForm w = generating_form(builder, spec, n);
    const FugacityPoly poly = be_vol(w);
    const Complex coeff = poly.coefficient(spec.populations);
    double mass = 1.0;
    for (int j = 0; j < J; ++j) {
      if (spec.populations[j] > 0) mass *= std::pow(form_mass(builder.gamma(j)), spec.populations[j]);
    }
    require_agreement(spec.id + " (generating function)", value, coeff, kGeneratingTolerance, 1e-13 * mass);
    const double diff = std::abs(value - coeff);
    r.routes.front().est_error = diff;
    r.routes.push_back({"generating_function", coeff, diff});
  } else {
    d.notes.push_back("generating_function_skipped");
  }
  fill_stats(d, builder);
  return r;
}

PartitionResult isocharge_grand_canonical_Z(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  spec.validate();
  if (spec.kind != EnsembleKind::multicomponent || !spec.grand_canonical()) {
    throw InvalidArgument("isocharge_grand_canonical_Z: multicomponent spec with total_charge required");
  }
  const int n = *spec.total_charge;
  const int J = spec.species();
  PartitionResult r;
  auto& d = r.diagnostics;
  d.dimension = n;
  d.effective_dimension = n % 2 ? n + 1 : n;
  const auto pops = admissible_populations(spec.charges, spec.K, n);
  bool all_even = true;
  for (int l : spec.charges) all_even = all_even && (l * spec.K) % 2 == 0;

  // canonical value of every admissible population
  FugacityPoly from_canonical;
  Complex population_sum{};
  for (const auto& m : pops) {
    EnsembleSpec c = spec;
    c.populations = m;
    c.total_charge.reset();
    c.fugacities.clear();
    const PartitionResult pr = canonical_multicomponent_Z(c, settings);
    r.canonical_values[m] = pr.value;
    d.enumerated_words += pr.diagnostics.enumerated_words;
    d.half_integer_phase = d.half_integer_phase || pr.diagnostics.half_integer_phase;
    FugacityPoly mono(pr.value);
    Complex zpow = pr.value;
    for (int j = 0; j < J; ++j) {
      for (int p = 0; p < m[j]; ++p) {
        mono = mono * FugacityPoly::variable(j, J);
        zpow *= spec.fugacities[j];
      }
    }
    from_canonical = from_canonical + mono;
    population_sum += zpow;
  }
  if (d.half_integer_phase) d.notes.push_back("half_integer_phase");
  r.routes.push_back({"population_sum", population_sum, 0.0});

  if (spec.geometry == Geometry::circular) {
    // circular phases depend on the populations, so only the population sum applies
    r.value = population_sum;
    r.route = "population_sum";
    r.case_label = "grand_canonical_population_sum";
    r.polynomial = from_canonical;
    return r;
  }

  const std::vector<int> zero(static_cast<std::size_t>(J), 0);
  FormBuilder builder(spec, species_blocks(spec, zero), n, settings);
  r.case_label = all_even ? "grand_canonical_all_even" : "grand_canonical";
  if (n == 0) {
    r.value = 1.0;
    r.route = "berezin";
    r.polynomial = FugacityPoly(1);
    r.routes.push_back({"berezin", r.value, 0.0});
    return r;
  }
  const Form numeric = numeric_generating_form(builder, spec, n);
  const Complex be = be_vol(numeric, d.effective_dimension - n);
  double scale = 0.0;
  for (const auto& [m, v] : r.canonical_values) {
    Complex zpow = 1.0;
    for (int j = 0; j < J; ++j) {
      for (int p = 0; p < m[j]; ++p) zpow *= spec.fugacities[j];
    }
    scale += std::abs(v * zpow);
  }
  require_agreement(spec.id + " (population sum)", be, population_sum, kGeneratingTolerance, 1e-12 * scale);
  r.value = be;
  r.route = "berezin";
  r.routes.push_back({"berezin", be, std::abs(be - population_sum)});

  if (n <= kSymbolicDimensionCap) {
    const FugacityPoly poly = be_vol(generating_form(builder, spec, n));
    for (const auto& [m, v] : r.canonical_values) {
      require_agreement(spec.id + " (coefficient of population)", poly.coefficient(m), v,
                        kGeneratingTolerance, 1e-12 * scale);
    }
    const Complex sym = poly.evaluate(spec.fugacities);
    r.routes.push_back({"generating_function", sym, std::abs(sym - be)});
    r.polynomial = poly;
  } else {
    r.polynomial = from_canonical;
    d.notes.push_back("generating_function_skipped");
  }
  fill_stats(d, builder);
  return r;
}

}  // namespace constellation
