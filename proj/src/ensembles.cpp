#include "constellation/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "constellation/parallel.hpp"

namespace constellation {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kSubsetChunk = 16;

// sign of prod_{j<k} (y_k - y_j)^{w_jk}
double translation_sign(std::span<const double> y, const std::function<long(int, int)>& weight) {
  double sign = 1.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t k = j + 1; k < y.size(); ++k) {
      if (y[k] < y[j] && (weight(static_cast<int>(j), static_cast<int>(k)) % 2 != 0)) sign = -sign;
    }
  }
  return sign;
}

long choose2(long n) { return n * (n - 1) / 2; }

std::vector<Complex> column_table(const PolynomialFamily& fam, const Block& block,
                                  Geometry geometry, std::span<const double> y, double x) {
  const int n = fam.size();
  const std::vector<Complex> yc(y.begin(), y.end());
  const auto cols = geometry == Geometry::linear
                        ? line_columns<Complex>(Complex(x, 0.0), yc, block.shape.L)
                        : circle_columns<Complex>(Complex(x, 0.0), yc, block.shape.L);
  const int g = static_cast<int>(cols.size());
  std::vector<Complex> table(static_cast<std::size_t>(n) * g);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < g; ++c) table[static_cast<std::size_t>(r) * g + c] = fam.value(r + 1, cols[c].l, cols[c].z);
  }
  return table;
}

Complex subset_minor(const std::vector<Complex>& table, int g, Mask t) {
  SquareMatrix<Complex> a(g);
  int r = 0;
  for (Mask m = t; m; m &= m - 1, ++r) {
    const std::size_t row = static_cast<std::size_t>(std::countr_zero(m));
    for (int c = 0; c < g; ++c) a(r, c) = table[row * g + c];
  }
  return determinant(std::move(a));
}

int block_degree(const Block& b, int n) {
  const int g = b.grade();
  int d = 0;
  for (int r = n - g + 1; r <= n; ++r) d += r - 1;
  for (int l : b.shape.L) d -= static_cast<int>(choose2(l));
  return std::max(d, 0);
}

}  // namespace

Measure constellation_measure(const EnsembleSpec& spec) {
  const Shape shape = spec.line_shape();
  const auto w = [&](int j, int k) { return static_cast<long>(shape.L[j]) * shape.L[k]; };
  const double sign = translation_sign(spec.y, w);
  if (spec.geometry == Geometry::linear) {
    return Measure::line(sign * minus_i_power(shape.R2()), 0.5 * shape.R1() * spec.strength);
  }
  Measure mu = Measure::circle(shape.R3() * (spec.M - 1), 2 * shape.R2());
  mu.phase *= sign;
  return mu;
}

Measure species_measure(const EnsembleSpec& spec, int j, std::span<const int> populations) {
  if (j < 0 || j >= spec.species()) throw InvalidArgument("species_measure: species out of range");
  const long Lj = spec.charges[j];
  const long K = spec.K;
  const auto w = [&](int, int) { return Lj * Lj; };
  const double sign = translation_sign(spec.y, w);
  if (spec.geometry == Geometry::linear) {
    return Measure::line(sign * minus_i_power(Lj * Lj * choose2(K)), 0.5 * K * Lj * spec.strength);
  }
  long T = -Lj;
  for (std::size_t k = 0; k < populations.size(); ++k) T += static_cast<long>(spec.charges[k]) * populations[k];
  Measure mu = Measure::circle(K * K * Lj * T, 2 * Lj * Lj * choose2(K));
  mu.phase *= sign;
  return mu;
}

Measure circular_measure(const EnsembleSpec& spec) {
  if (spec.geometry != Geometry::circular) throw InvalidArgument("circular_measure: spec is linear");
  if (spec.kind == EnsembleKind::multicomponent) return species_measure(spec, 0, spec.populations);
  return constellation_measure(spec);
}

struct FormBuilder::Impl {
  struct BlockData {
    Block block;
    int degree = 0;
    std::vector<Mask> subsets;
    bool grid_ready = false;
    std::vector<Complex> F;      // subsets x grid nodes: minor * density
    std::vector<Complex> R;      // running integrals of F
    std::vector<double> Rabs;    // running integrals of |F|
    bool exact_ready = false;
    std::vector<Complex> c0;     // circle minors at x = 0
    std::vector<long> twice_m;   // their doubled frequencies
    std::optional<Form> gamma;
  };

  EnsembleSpec spec;
  PolynomialFamily fam;
  int n = 0;
  QuadratureSettings qs;
  std::vector<BlockData> data;
  std::vector<Block> blocks;
  std::map<std::pair<int, int>, Form> eta_cache;
  std::optional<CompositeGrid> grid;
  FormStats stats;
  std::string description;
  bool exact = false;

  void ensure_grid() {
    if (grid) return;
    int dmax = 0;
    for (const auto& d : data) dmax = std::max(dmax, d.degree);
    if (spec.geometry == Geometry::linear) {
      double kmin = 1e300, kmax = 0.0;
      for (const auto& b : blocks) {
        kmin = std::min(kmin, b.measure.kappa);
        kmax = std::max(kmax, b.measure.kappa);
      }
      const double X = gaussian_truncation(kmin, dmax, qs.tail);
      const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * X * std::sqrt(kmax) / qs.panel_width)));
      grid.emplace(-X, X, panels, qs.points_per_panel);
    } else {
      long fmax = 0;
      for (const auto& b : blocks) fmax = std::max(fmax, std::abs(b.measure.twice_frequency()));
      const double omega = dmax + 0.5 * static_cast<double>(fmax) + 1.0;
      const int panels = std::max(8, static_cast<int>(std::ceil(kTwoPi * omega / 8.0)));
      grid.emplace(0.0, kTwoPi, panels, qs.points_per_panel);
    }
    std::ostringstream out;
    out << "composite-GL[" << grid->lower() << ',' << grid->upper() << "] " << grid->panels() << "x"
        << grid->points_per_panel();
    append_description(out.str());
  }

  void append_description(const std::string& s) {
    if (description.find(s) != std::string::npos) return;
    if (!description.empty()) description += "; ";
    description += s;
  }

  void ensure_grid_tables(int b) {
    auto& d = data[b];
    if (d.grid_ready) return;
    ensure_grid();
    const std::size_t nodes = grid->size();
    const std::size_t count = d.subsets.size();
    if (count * nodes > qs.max_table_entries) {
      throw ResourceLimitExceeded("minor table of " + std::to_string(count) + " subsets x " +
                                  std::to_string(nodes) + " nodes exceeds the table cap");
    }
    const int g = d.block.grade();
    std::vector<std::vector<Complex>> tables(nodes);
    std::vector<Complex> density(nodes);
    parallel_chunks(nodes, 8, [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t j = lo; j < hi; ++j) {
        const double x = grid->nodes()[j];
        tables[j] = column_table(fam, d.block, spec.geometry, spec.y, x);
        density[j] = d.block.measure.density(x);
      }
    });
    d.F.assign(count * nodes, Complex{});
    d.R.assign(count * nodes, Complex{});
    d.Rabs.assign(count * nodes, 0.0);
    parallel_chunks(count, kSubsetChunk, [&](std::size_t lo, std::size_t hi, std::size_t) {
      std::vector<Complex> row(nodes), absrow(nodes);
      for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
          row[j] = subset_minor(tables[j], g, d.subsets[i]) * density[j];
          absrow[j] = std::abs(row[j]);
        }
        const auto run = grid->running_integral(row);
        const auto runabs = grid->running_integral(absrow);
        for (std::size_t j = 0; j < nodes; ++j) {
          d.F[i * nodes + j] = row[j];
          d.R[i * nodes + j] = run[j];
          d.Rabs[i * nodes + j] = runabs[j].real();
        }
      }
    });
    d.grid_ready = true;
  }

  void ensure_exact_tables(int b) {
    auto& d = data[b];
    if (d.exact_ready) return;
    const int g = d.block.grade();
    const auto table = column_table(fam, d.block, spec.geometry, spec.y, 0.0);
    long shift = 0;
    for (int l : d.block.shape.L) shift += choose2(l);
    d.c0.resize(d.subsets.size());
    d.twice_m.resize(d.subsets.size());
    for (std::size_t i = 0; i < d.subsets.size(); ++i) {
      d.c0[i] = subset_minor(table, g, d.subsets[i]);
      long m = -shift;
      for (Mask t = d.subsets[i]; t; t &= t - 1) m += std::countr_zero(t);
      d.twice_m[i] = 2 * m;
    }
    d.exact_ready = true;
    append_description("exact-circular");
  }

  Form finish(std::vector<Form::Term> terms, const std::vector<double>& mass, std::size_t candidates) {
    std::vector<Form::Term> kept;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double c = std::abs(terms[i].coeff);
      if (c == 0.0) continue;
      if (c < qs.drop_relative * mass[i]) {
        ++dropped;
        continue;
      }
      kept.push_back(terms[i]);
    }
    stats.candidates += candidates;
    stats.dropped += dropped;
    stats.kept += kept.size();
    return Form::from_terms(n, std::move(kept));
  }

  Form build_gamma(int b) {
    auto& d = data[b];
    const int g = d.block.grade();
    const Measure& mu = d.block.measure;
    const std::size_t count = d.subsets.size();
    std::vector<Form::Term> terms(count);
    std::vector<double> mass(count, 0.0);
    if (count == 0) return Form(n);
    if (exact) {
      ensure_exact_tables(b);
      for (std::size_t i = 0; i < count; ++i) {
        const Complex moment = circle_moment(d.twice_m[i] + mu.twice_frequency());
        terms[i] = {d.subsets[i], mu.phase * d.c0[i] * moment};
      }
      return finish(std::move(terms), mass, count);
    }
    if (spec.geometry == Geometry::linear) {
      const int nodes = (d.degree + 1) / 2 + 1 + qs.hermite_margin;
      const GaussRule& gh = gauss_hermite(std::max(nodes, 2));
      const double s = 1.0 / std::sqrt(mu.kappa);
      std::vector<std::vector<Complex>> tables(gh.size());
      for (int j = 0; j < gh.size(); ++j) {
        tables[j] = column_table(fam, d.block, spec.geometry, spec.y, gh.nodes[j] * s);
      }
      std::ostringstream out;
      out << "gauss-hermite(" << gh.size() << ")";
      append_description(out.str());
      parallel_chunks(count, kSubsetChunk, [&](std::size_t lo, std::size_t hi, std::size_t) {
        for (std::size_t i = lo; i < hi; ++i) {
          Complex acc{};
          double abs_acc = 0.0;
          for (int j = 0; j < gh.size(); ++j) {
            const Complex v = subset_minor(tables[j], g, d.subsets[i]);
            acc += gh.weights[j] * v;
            abs_acc += gh.weights[j] * std::abs(v);
          }
          if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag())) {
            throw QuadratureError("gamma coefficient for subset " +
                                  IndexSubset::from_mask(d.subsets[i], n).to_string() + " is not finite");
          }
          terms[i] = {d.subsets[i], mu.phase * s * acc};
          mass[i] = s * abs_acc;
        }
      });
      return finish(std::move(terms), mass, count);
    }
    ensure_grid_tables(b);
    const std::size_t nodes = grid->size();
    for (std::size_t i = 0; i < count; ++i) {
      Complex acc{};
      double abs_acc = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        acc += grid->weights()[j] * d.F[i * nodes + j];
        abs_acc += grid->weights()[j] * std::abs(d.F[i * nodes + j]);
      }
      terms[i] = {d.subsets[i], acc};
      mass[i] = abs_acc;
    }
    return finish(std::move(terms), mass, count);
  }

  Form build_eta(int b1, int b2) {
    auto& d1 = data[b1];
    auto& d2 = data[b2];
    const int g = d1.block.grade() + d2.block.grade();
    if (g > n || d1.subsets.empty() || d2.subsets.empty()) return Form(n);
    const std::size_t c1 = d1.subsets.size();
    const std::size_t chunks = (c1 + kSubsetChunk - 1) / kSubsetChunk;
    std::vector<std::unordered_map<Mask, std::pair<Complex, double>>> partial(chunks);
    std::size_t candidates = 0;
    for (Mask t : d1.subsets) {
      for (Mask s : d2.subsets) candidates += (t & s) == 0;
    }
    if (exact) {
      ensure_exact_tables(b1);
      ensure_exact_tables(b2);
      const Measure& m1 = d1.block.measure;
      const Measure& m2 = d2.block.measure;
      const Complex phase = m1.phase * m2.phase;
      parallel_chunks(c1, kSubsetChunk, [&](std::size_t lo, std::size_t hi, std::size_t chunk) {
        auto& acc = partial[chunk];
        for (std::size_t i = lo; i < hi; ++i) {
          const Mask t = d1.subsets[i];
          for (std::size_t k = 0; k < d2.subsets.size(); ++k) {
            const Mask s = d2.subsets[k];
            if (t & s) continue;
            const Complex v = phase * d1.c0[i] * d2.c0[k] *
                              circle_ordered_moment(d1.twice_m[i] + m1.twice_frequency(),
                                                    d2.twice_m[k] + m2.twice_frequency());
            auto& slot = acc[t | s];
            slot.first += static_cast<double>(merge_sign(t, s)) * v;
          }
        }
      });
    } else {
      ensure_grid_tables(b1);
      ensure_grid_tables(b2);
      const std::size_t nodes = grid->size();
      const auto& W = grid->weights();
      parallel_chunks(c1, kSubsetChunk, [&](std::size_t lo, std::size_t hi, std::size_t chunk) {
        auto& acc = partial[chunk];
        for (std::size_t i = lo; i < hi; ++i) {
          const Mask t = d1.subsets[i];
          const Complex* R = &d1.R[i * nodes];
          const double* Ra = &d1.Rabs[i * nodes];
          for (std::size_t k = 0; k < d2.subsets.size(); ++k) {
            const Mask s = d2.subsets[k];
            if (t & s) continue;
            const Complex* G = &d2.F[k * nodes];
            Complex v{};
            double m = 0.0;
            for (std::size_t j = 0; j < nodes; ++j) {
              v += W[j] * G[j] * R[j];
              m += W[j] * std::abs(G[j]) * Ra[j];
            }
            auto& slot = acc[t | s];
            slot.first += static_cast<double>(merge_sign(t, s)) * v;
            slot.second += m;
          }
        }
      });
    }
    std::map<Mask, std::pair<Complex, double>> total;
    for (auto& acc : partial) {
      // fixed key order within each chunk keeps the reduction deterministic
      std::vector<std::pair<Mask, std::pair<Complex, double>>> sorted(acc.begin(), acc.end());
      std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [mask, v] : sorted) {
        auto& slot = total[mask];
        slot.first += v.first;
        slot.second += v.second;
      }
    }
    std::vector<Form::Term> terms;
    std::vector<double> mass;
    for (auto& [mask, v] : total) {
      terms.push_back({mask, v.first});
      mass.push_back(v.second);
    }
    return finish(std::move(terms), mass, candidates);
  }
};

FormBuilder::FormBuilder(const EnsembleSpec& spec, std::vector<Block> blocks, int dimension,
                         QuadratureSettings settings)
    : impl_(std::make_unique<Impl>()) {
  auto& I = *impl_;
  I.spec = spec;
  I.n = dimension;
  I.qs = settings;
  I.fam = spec.family.build(dimension);
  I.blocks = blocks;
  I.exact = spec.geometry == Geometry::circular && I.fam.is_monomial() && settings.exact_circular;
  for (auto& b : blocks) {
    if (b.shape.count() != spec.K) throw DimensionMismatch("FormBuilder: block shape differs from K");
    Impl::BlockData d;
    d.block = b;
    if (b.grade() <= dimension) {
      d.degree = block_degree(b, dimension);
      d.subsets = k_subsets(dimension, b.grade());
    }
    I.data.push_back(std::move(d));
  }
}

FormBuilder::~FormBuilder() = default;
FormBuilder::FormBuilder(FormBuilder&&) noexcept = default;
FormBuilder& FormBuilder::operator=(FormBuilder&&) noexcept = default;

int FormBuilder::dimension() const { return impl_->n; }
const std::vector<Block>& FormBuilder::blocks() const { return impl_->blocks; }
bool FormBuilder::exact_circular() const { return impl_->exact; }

const Form& FormBuilder::gamma(int b) {
  auto& d = impl_->data.at(static_cast<std::size_t>(b));
  if (!d.gamma) d.gamma = impl_->build_gamma(b);
  return *d.gamma;
}

const Form& FormBuilder::eta(int b1, int b2) {
  if (b1 < 0 || b2 < 0 || b1 >= static_cast<int>(impl_->data.size()) ||
      b2 >= static_cast<int>(impl_->data.size())) {
    throw InvalidArgument("FormBuilder::eta: block index out of range");
  }
  auto key = std::make_pair(b1, b2);
  auto it = impl_->eta_cache.find(key);
  if (it == impl_->eta_cache.end()) it = impl_->eta_cache.emplace(key, impl_->build_eta(b1, b2)).first;
  return it->second;
}

FormStats FormBuilder::stats() const { return impl_->stats; }

std::string FormBuilder::quadrature_description() const { return impl_->description; }

namespace {

FormBuilder single_block_builder(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  if (spec.kind == EnsembleKind::multicomponent) {
    throw InvalidArgument("use the species variants for multicomponent specs");
  }
  spec.validate();
  return FormBuilder(spec, {Block{spec.line_shape(), constellation_measure(spec)}}, spec.dimension(), settings);
}

std::vector<Block> species_block_list(const EnsembleSpec& spec, std::span<const int> populations) {
  std::vector<Block> blocks;
  for (int j = 0; j < spec.species(); ++j) {
    blocks.push_back({Shape::uniform(spec.charges[j], spec.K), species_measure(spec, j, populations)});
  }
  return blocks;
}

}  // namespace

Form gamma_form(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  auto builder = single_block_builder(spec, settings);
  return builder.gamma(0);
}

Form eta_form(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  auto builder = single_block_builder(spec, settings);
  return builder.eta(0, 0);
}

Form gamma_form_species(const EnsembleSpec& spec, int j, const QuadratureSettings& settings) {
  spec.validate();
  if (spec.populations.empty()) throw InvalidArgument("gamma_form_species: populations required");
  FormBuilder builder(spec, species_block_list(spec, spec.populations), spec.dimension(), settings);
  return builder.gamma(j);
}

Form eta_form_pair(const EnsembleSpec& spec, int j, int k, const QuadratureSettings& settings) {
  spec.validate();
  if (spec.populations.empty()) throw InvalidArgument("eta_form_pair: populations required");
  FormBuilder builder(spec, species_block_list(spec, spec.populations), spec.dimension(), settings);
  return builder.eta(j, k);
}

AssembledOmega assemble_omega(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  auto builder = single_block_builder(spec, settings);
  AssembledOmega out;
  const int g = spec.block_grade();
  const int n = spec.dimension();
  out.block_grade = g;
  out.dimension = n;
  out.effective_dimension = n;
  out.half_integer_phase = builder.blocks()[0].measure.half_integer();
  if (spec.M == 0) {
    out.omega = Form(0);
    out.case_label = "empty";
    out.pf_M = 0;
    return out;
  }
  if (g % 2 == 0) {
    out.omega = builder.gamma(0);
    out.case_label = "even_block";
    out.pf_M = spec.M;
  } else if (spec.M % 2 == 0) {
    out.omega = builder.eta(0, 0);
    out.case_label = "odd_block_even_M";
    out.pf_M = spec.M / 2;
  } else {
    const int ext = n + g;
    if (ext > kMaxDimension) throw ResourceLimitExceeded("extended dimension exceeds 64");
    const Form xi = Form::range_product(ext, n + 1, ext);
    out.omega = builder.eta(0, 0).embedded(ext) + wedge(builder.gamma(0).embedded(ext), xi);
    out.case_label = "odd_block_odd_M";
    out.effective_dimension = ext;
    out.pf_M = (spec.M + 1) / 2;
  }
  out.stats = builder.stats();
  out.quadrature = builder.quadrature_description();
  return out;
}

namespace {

double coefficient_scale(const Form& omega, int power) {
  double s = 0.0;
  for (const auto& t : omega.terms()) s += std::abs(t.coeff);
  double scale = 1.0;
  for (int m = 1; m <= power; ++m) scale *= s / m;
  return scale;
}

void check_agreement(const std::string& what, Complex a, Complex b, double rel, double floor) {
  const double diff = std::abs(a - b);
  if (diff > rel * std::max(std::abs(a), std::abs(b)) + floor) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": routes disagree (" << a << " vs " << b << ", |diff| = " << diff << ")";
    throw IntegrityError(msg.str());
  }
}

}  // namespace

PartitionResult partition_function(const EnsembleSpec& spec, const QuadratureSettings& settings) {
  if (spec.kind == EnsembleKind::multicomponent) {
    return spec.grand_canonical() ? isocharge_grand_canonical_Z(spec, settings)
                                  : canonical_multicomponent_Z(spec, settings);
  }
  const AssembledOmega a = assemble_omega(spec, settings);
  PartitionResult r;
  r.case_label = a.case_label;
  auto& d = r.diagnostics;
  d.dimension = a.dimension;
  d.effective_dimension = a.effective_dimension;
  d.block_grade = a.block_grade;
  d.candidate_terms = a.stats.candidates;
  d.kept_terms = a.stats.kept;
  d.dropped_terms = a.stats.dropped;
  d.quadrature = a.quadrature;
  d.half_integer_phase = a.half_integer_phase;
  if (a.half_integer_phase) d.notes.push_back("half_integer_phase");

  const Complex pf = hyperpfaffian(a.omega, a.pf_M);
  const Complex be = be_vol(a.omega, a.effective_dimension - a.dimension);
  const double diff = std::abs(pf - be);
  check_agreement(spec.id, pf, be, kRouteTolerance, 1e-13 * coefficient_scale(a.omega, a.pf_M));
  r.value = pf;
  r.route = "hyperpfaffian";
  r.routes.push_back({"hyperpfaffian", pf, diff});
  r.routes.push_back({"berezin", be, diff});
  if (std::abs(pf.imag()) > 1e-8 * std::max(std::abs(pf), 1e-300)) {
    d.imaginary_part = true;
    d.notes.push_back("imaginary_part");
  }
  return r;
}

}  // namespace constellation
