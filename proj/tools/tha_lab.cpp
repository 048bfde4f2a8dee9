#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "cli_config.hpp"
#include "tha/error.hpp"

namespace {

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("THA_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw tha::ConfigError("THA_LAB_THREADS must be a positive integer");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trojan-horse attack simulator for a three-state polarization encoder"};
  app.require_subcommand(1);

  tha::cli::CommonOptions opts;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 0;

  const char* commands[][2] = {
      {"bounds", "Analytic guess-probability bounds versus mean photon number"},
      {"trace", "Synthesize a photodiode trace with hidden ground truth"},
      {"attack", "Attack a stored trace (strong) or simulate click statistics (weak)"},
      {"sweep", "Accuracy versus attenuation or mean photon number"},
      {"plan", "Countermeasure attenuation budget and security report"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config_path, "JSON config or an earlier run's manifest.json");
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "OpenMP threads (fallback: THA_LAB_THREADS)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const auto* sub = app.get_subcommands().front();
    if (!config_path.empty()) opts.config = config_path;
    if (sub->count("--seed")) opts.seed = seed;
    opts.out = out;
    if (const int n = resolve_threads(threads); n > 0) omp_set_num_threads(n);

    const auto config = tha::cli::load_config(opts);
    const auto files = tha::cli::run_command(command, config, opts.out);
    for (const auto& f : files) std::cout << (opts.out / f).string() << '\n';
    return 0;
  } catch (const tha::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
}
