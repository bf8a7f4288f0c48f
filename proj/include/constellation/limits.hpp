#pragma once

// Collapsed (y -> 0) and separated (h -> infinity) limits of homogeneous
// constellation ensembles, checked against one-dimensional targets.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "constellation/ensemble_spec.hpp"
#include "constellation/form.hpp"

namespace constellation {

struct LimitPoint {
  double parameter = 0.0;  // s (collapsed) or h (separated)
  Complex ratio;
  double error = 0.0;
};

struct LimitReport {
  std::string kind;
  Complex target;
  std::vector<LimitPoint> points;     // partition ratios (collapsed) or integrand errors (separated)
  std::vector<LimitPoint> partition;  // separated only: Z ratios when a closed-form target exists
  double order = 0.0;                 // fitted log-log slope of the error sequence
  bool monotone = true;
  bool passed = false;
  std::vector<std::string> notes;
};

struct LimitOptions {
  bool extended_precision = true;  // minors in 50 digits; needed once they cancel below 1e-10
  double noise_floor = 1e-13;
  double min_order = 1.0;
  double order_tolerance = 0.05;  // slack on the fitted slope; order-1 sequences approach 1 from below
};

struct SeparatedOptions : LimitOptions {
  int sample_points = 20;
  std::uint64_t seed = 7;
  bool partition_ratio = true;  // also compare Z ratios for linear M = 2
};

/// Z of a monocharge / homogeneous spec via a separate route that evaluates
/// minors in 50-digit arithmetic (quadrature nodes stay double).
Complex extended_precision_partition(const EnsembleSpec& spec);
/// Same route in double precision, for cross-checking.
Complex generic_route_partition(const EnsembleSpec& spec);

/// Translation vectors used by the limits: s * y0 on the line, 1 + s k on
/// circles (k = 1..K).
std::vector<double> collapsed_translations(const EnsembleSpec& spec, double s);
/// (k - 1) h on the line, 1 + h k on circles.
std::vector<double> separated_translations(const EnsembleSpec& spec, double h);

/// Z(y(s)) / Delta^L(i y)^M (line) or Z / Delta^L(y)^M (circle) for each
/// scale s, against the charge-R1 one-dimensional partition function.
LimitReport collapsed_limit_check(const EnsembleSpec& spec, std::span<const double> scales,
                                  const LimitOptions& opts = {});

/// |Delta^L(z)| / (|Delta^L(y)|^M G(h)) divided by the limiting
/// one-dimensional factor at constellation positions x.
double separated_integrand_ratio(const EnsembleSpec& spec, std::span<const double> x, double h);
/// The one-dimensional limiting factor itself: |Delta(x)|^{sum L_k^2} on the
/// line; on circles |Delta(e^{ix})|^{sum L_k^2} times the angular factor
/// prod_{m<n} prod_{j != k} (|k e^{i x_m} - j e^{i x_n}| / |k - j|)^{L_j L_k}.
double separated_limit_factor(const EnsembleSpec& spec, std::span<const double> x);
/// log of G (line) or P (circle) normalisations.
double separated_log_normalisation(const EnsembleSpec& spec, double h);

LimitReport separated_limit_check(const EnsembleSpec& spec, std::span<const double> hs,
                                  const SeparatedOptions& opts = {});

/// Least-squares slope of log(error) against log(distance to the limit),
/// ignoring errors below `floor`.
double fit_order(std::span<const double> distance, std::span<const double> errors, double floor);

}  // namespace constellation
