#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace entropy_lab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

/// Runs the command line (argv[0] is the program name) and returns the exit
/// code. Errors are reported on `err`; nothing is thrown.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ, taken from SOURCE_DATE_EPOCH when set.
std::string timestamp();

struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t master_seed = 0;
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;
};

struct ReproduceConfig {
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  bool paper_scale = false;
  int threads = 0;
};

/// Writes every table and figure series into out_dir together with
/// DISCREPANCIES.md and manifest.json. A table that fails is logged and
/// skipped; the return value lists the failed tables.
std::vector<std::string> reproduce(const ReproduceConfig& cfg, std::ostream& log);

}  // namespace entropy_lab::cli
