#pragma once

// Run manifest written next to every CLI output: enough to rerun the command
// and get the same numbers.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semirace {

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string version = SEMIRACE_VERSION;
  std::optional<std::uint64_t> seed;
  std::string rng_algorithm;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> results;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  void write(const std::filesystem::path& path) const;
};

// Current UTC time as ISO-8601 with a trailing Z.
std::string utc_timestamp();

}  // namespace semirace
