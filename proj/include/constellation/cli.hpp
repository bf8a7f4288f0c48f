#pragma once

// Batch front-end: JSON run configs, result files and verification suites.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "constellation/ensemble_spec.hpp"
#include "constellation/errors.hpp"
#include "constellation/oracle.hpp"

namespace constellation::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIntegrityFailure = 2, kResourceLimit = 3 };

struct OracleSettings {
  bool enabled = false;
  OracleConfig config;
  double tolerance = 1e-6;  // relative agreement demanded from the oracle
};

struct Sweep {
  std::string name;
  std::string spec_id;
  std::string parameter;  // "y[k]", "strength", "fugacities[j]", "M"
  std::vector<double> values;
};

struct RunConfig {
  std::vector<EnsembleSpec> specs;
  OracleSettings oracle;
  std::vector<Sweep> sweeps;
  std::uint64_t seed = 0;
};

/// Parses a config document. Errors are ConfigError with a
/// "<source>:<line>: <path>: <message>" text.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Sets a sweep parameter on a copy of `spec`; throws ConfigError for
/// unknown parameters.
EnsembleSpec with_parameter(const EnsembleSpec& spec, const std::string& parameter, double value);

struct RunOptions {
  std::optional<int> dimension_cap;
  bool timing = false;
};

/// Runs every spec and sweep, writing results.csv, results.json and
/// sweep_<name>.csv into `out`. Returns an ExitCode.
int run(const RunConfig& cfg, const std::filesystem::path& out, const RunOptions& opts, std::ostream& log);

/// Named property suites: algebra, determinants, limits, selection-rule.
std::vector<std::string> suite_names();
int verify(const std::string& suite, std::uint64_t seed, std::ostream& out);

/// The CSV header shared by results.csv and sweep files.
std::string csv_header();

}  // namespace constellation::cli
