#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tha/io.hpp"

namespace tha::cli {

struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
};

/// Reads the config file (or an earlier run's manifest) and applies flag
/// overrides. Missing file means an empty object.
io::Json load_config(const CommonOptions& opts);

/// Runs one command, writing its artifacts and manifest.json under `out`.
/// Returns the written file names, relative to `out`.
std::vector<std::string> run_command(const std::string& command, const io::Json& config,
                                     const std::filesystem::path& out);

io::Json manifest(const std::string& command, const io::Json& config, const std::vector<std::string>& outputs);

}  // namespace tha::cli
