#include <iostream>

#include "CLI11.hpp"
#include "constellation/cli.hpp"
#include "constellation/parallel.hpp"

namespace cli = constellation::cli;

int main(int argc, char** argv) {
  CLI::App app{"Constellation ensemble partition functions"};
  app.require_subcommand(1);

  std::string config, out_dir;
  std::optional<int> threads, cap;
  bool timing = false;
  auto* run = app.add_subcommand("run", "evaluate every spec and sweep in a config");
  run->add_option("config", config, "config JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (default: CONSTELLATION_THREADS or 1)");
  run->add_option("--cap", cap, "dimension cap N for every spec");
  run->add_flag("--timing", timing, "record wall times (output is then not reproducible)");

  std::string suite;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "algebra | determinants | limits | selection-rule | all")->required();
  verify->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (*run) {
      if (threads) constellation::set_thread_count(*threads);
      const auto cfg = cli::load_config(config);
      return cli::run(cfg, out_dir, {cap, timing}, std::cerr);
    }
    return cli::verify(suite, seed, std::cout);
  } catch (const constellation::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return cli::kConfigError;
  } catch (const constellation::ResourceLimitExceeded& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return cli::kResourceLimit;
  } catch (const constellation::IntegrityError& e) {
    std::cerr << "integrity failure: " << e.what() << "\n";
    return cli::kIntegrityFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  }
}
