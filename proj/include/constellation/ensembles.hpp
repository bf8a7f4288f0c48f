#pragma once

// gamma / eta forms of constellation ensembles, the parity-dependent
// assembly of omega, and partition functions for every ensemble kind.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "constellation/ensemble_spec.hpp"
#include "constellation/form.hpp"
#include "constellation/fugacity.hpp"
#include "constellation/measures.hpp"

namespace constellation {

struct QuadratureSettings {
  int hermite_margin = 4;         // Gauss-Hermite points beyond the exactness minimum
  int points_per_panel = 16;      // composite Gauss-Legendre panels
  double panel_width = 1.0;       // line panel width in units of 1/sqrt(kappa)
  double tail = 1e-18;            // line truncation tail
  double drop_relative = 1e-14;   // coefficient drop threshold relative to |integrand| mass
  bool exact_circular = true;     // closed-form circle integrals for the monomial family
  std::size_t max_table_entries = 50'000'000;
};

/// One block of columns: the per-line charges of a constellation together
/// with its measure.
struct Block {
  Shape shape;
  Measure measure;
  int grade() const { return shape.R1(); }
};

/// Measure of one constellation in a monocharge or homogeneous ensemble.
Measure constellation_measure(const EnsembleSpec& spec);
/// Measure of a constellation of species j (multicomponent). The circular
/// phase depends on the populations.
Measure species_measure(const EnsembleSpec& spec, int j, std::span<const int> populations);
/// The circular measure of `spec` (first species for multicomponent specs).
Measure circular_measure(const EnsembleSpec& spec);

struct FormStats {
  std::size_t candidates = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

/// Computes gamma and eta forms for a list of blocks sharing one polynomial
/// family, translation vector and ambient dimension. Minor tables at the
/// quadrature nodes are computed once per block and reused.
class FormBuilder {
 public:
  FormBuilder(const EnsembleSpec& spec, std::vector<Block> blocks, int dimension,
              QuadratureSettings settings = {});
  ~FormBuilder();
  FormBuilder(FormBuilder&&) noexcept;
  FormBuilder& operator=(FormBuilder&&) noexcept;

  int dimension() const;
  const std::vector<Block>& blocks() const;
  bool exact_circular() const;

  /// sum_t (int minor_t dmu_b) eps_t over |t| = grade(b).
  const Form& gamma(int b);
  /// sum_{t,s} (int int_{x1<x2} minor_t(x1) minor_s(x2) dmu_b1 dmu_b2) eps_t ^ eps_s.
  const Form& eta(int b1, int b2);

  FormStats stats() const;
  std::string quadrature_description() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Forms of a monocharge or homogeneous spec.
Form gamma_form(const EnsembleSpec& spec, const QuadratureSettings& settings = {});
Form eta_form(const EnsembleSpec& spec, const QuadratureSettings& settings = {});
/// eta_{j,k} of a multicomponent spec with fixed populations.
Form eta_form_pair(const EnsembleSpec& spec, int j, int k, const QuadratureSettings& settings = {});
/// gamma_j of a multicomponent spec with fixed populations.
Form gamma_form_species(const EnsembleSpec& spec, int j, const QuadratureSettings& settings = {});

struct AssembledOmega {
  Form omega;
  std::string case_label;
  int block_grade = 0;
  int dimension = 0;            // N
  int effective_dimension = 0;  // N or N + g after the xi extension
  int pf_M = 0;                 // Hyperpfaffian exponent
  FormStats stats;
  std::string quadrature;
  bool half_integer_phase = false;
};

/// Parity case analysis for monocharge / homogeneous specs:
///   even block grade g:        omega = gamma,           Z = PF(omega, M)
///   odd g, even M:             omega = eta,             Z = PF(omega, M/2)
///   odd g, odd M:              omega = eta + gamma ^ xi_g on N + g dimensions,
///                              Z = PF(omega, (M+1)/2)
AssembledOmega assemble_omega(const EnsembleSpec& spec, const QuadratureSettings& settings = {});

struct RouteValue {
  std::string route;
  Complex value;
  double est_error = 0.0;
};

struct Diagnostics {
  int dimension = 0;
  int effective_dimension = 0;
  int block_grade = 0;
  std::size_t candidate_terms = 0;
  std::size_t kept_terms = 0;
  std::size_t dropped_terms = 0;
  std::size_t enumerated_words = 0;
  std::string quadrature;
  bool half_integer_phase = false;
  bool imaginary_part = false;
  std::vector<std::string> notes;
};

struct PartitionResult {
  Complex value;
  std::string route;
  std::string case_label;
  std::vector<RouteValue> routes;
  Diagnostics diagnostics;
  std::optional<FugacityPoly> polynomial;  // grand canonical generating polynomial
  std::map<std::vector<int>, Complex> canonical_values;  // grand canonical: per population
};

/// Relative tolerance for agreement between independent evaluation routes.
inline constexpr double kRouteTolerance = 1e-10;
inline constexpr double kGeneratingTolerance = 1e-8;

/// Partition function of any spec: monocharge / homogeneous via the parity
/// cases (Hyperpfaffian and BE_vol routes), multicomponent via the canonical
/// or grand canonical constructions. Throws IntegrityError when routes
/// disagree.
PartitionResult partition_function(const EnsembleSpec& spec, const QuadratureSettings& settings = {});

/// Canonical multicomponent partition function with fixed populations.
PartitionResult canonical_multicomponent_Z(const EnsembleSpec& spec,
                                           const QuadratureSettings& settings = {});

/// Isocharge grand canonical partition function at fixed dimension with the
/// spec's fugacities; also returns the generating polynomial and the
/// canonical value of every admissible population.
PartitionResult isocharge_grand_canonical_Z(const EnsembleSpec& spec,
                                            const QuadratureSettings& settings = {});

/// All population vectors M with K * (charges . M) = dimension.
std::vector<std::vector<int>> admissible_populations(std::span<const int> charges, int K,
                                                     int dimension);

/// Number of species words (shuffles) with the given letter counts.
std::uint64_t word_count(std::span<const int> counts);

}  // namespace constellation
