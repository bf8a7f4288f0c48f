#pragma once

// Brute-force partition functions straight from the Boltzmann factor,
// independent of the alternant / exterior algebra machinery.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "constellation/ensemble_spec.hpp"

namespace constellation {

struct OracleConfig {
  enum class Method { nested_quadrature, monte_carlo };
  Method method = Method::nested_quadrature;
  int nodes_per_dim = 96;       // nested: points across the whole domain
  int points_per_panel = 8;     // nested: Gauss-Legendre panel size
  double truncation = 0.0;      // line half-width; 0 picks one from the weight
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240611;
  int max_nested_particles = 4;
  double tolerance = 0.0;       // flag results whose error estimate exceeds this (0: never)
};

struct OracleResult {
  Complex value;
  double std_error = 0.0;
  std::string method;
  std::uint64_t evaluations = 0;
  bool flagged = false;
};

/// Omega at constellation positions x (any order) for a monocharge or
/// homogeneous spec: the product over all particle pairs of
/// |z_a - z_b|^{q_a q_b}, times e^{-R1 U(x_m)} on the line.
double boltzmann_factor(std::span<const double> x, const EnsembleSpec& spec);

/// Same for a multicomponent spec; species[m] labels constellation m.
double boltzmann_factor_species(std::span<const double> x, std::span<const int> species,
                                const EnsembleSpec& spec);

/// Z = int_{x_1 < ... < x_M} Omega (monocharge / homogeneous), or
/// (1 / prod M_j!) int Omega over all positions (multicomponent, fixed
/// populations), by nested quadrature over the ordered simplex or by Monte
/// Carlo with weight-matched proposals.
OracleResult oracle_partition(const EnsembleSpec& spec, const OracleConfig& cfg = {});

}  // namespace constellation
