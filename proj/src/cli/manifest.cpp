#include <cstdlib>
#include <ctime>
#include <fstream>
#include <string>

#include "entropy_lab/cli/cli.hpp"
#include "entropy_lab/errors.hpp"

namespace entropy_lab::cli {

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) throw InputError("SOURCE_DATE_EPOCH is not a valid epoch");
    t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["master_seed"] = master_seed;
  j["timestamp"] = timestamp();
  j["config"] = config;
  j["outputs"] = outputs;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace entropy_lab::cli
