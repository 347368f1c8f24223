#include "semirace/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "semirace/error.hpp"

namespace semirace {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["parameters"] = parameters;
  if (seed) j["seed"] = *seed;
  if (!rng_algorithm.empty()) j["rng"] = rng_algorithm;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["outputs"] = outputs;
  j["results"] = results;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rng")) m.rng_algorithm = j.at("rng").get<std::string>();
    m.started_utc = j.value("started_utc", "");
    m.finished_utc = j.value("finished_utc", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.results = j.value("results", std::map<std::string, std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad manifest: ") + e.what());
  }
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << to_json();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace semirace
