#include "io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "polydrive/version.hpp"

namespace polydrive::cli {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

nlohmann::json make_manifest(const std::string& command, nlohmann::json parameters) {
  return nlohmann::json{{"command", command},
                        {"parameters", std::move(parameters)},
                        {"version", kVersion},
                        {"timestamp", iso8601_utc_now()}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out)
    throw std::invalid_argument("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.good())
    throw std::invalid_argument("failed to write " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

LoadedPulse load_pulse_file(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = read_json_file(path);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("unreadable pulse file " + path.string() + ": " + e.what());
  }
  if (!j.contains("pulse") || !j["pulse"].is_array())
    throw std::invalid_argument("pulse file " + path.string() + " has no \"pulse\" array");

  LoadedPulse loaded;
  for (const auto& v : j["pulse"]) {
    if (!v.is_number())
      throw std::invalid_argument("pulse file " + path.string() + " has non-numeric components");
    loaded.pulse.amplitudes.push_back(v.get<double>());
  }
  if (j.contains("manifest") && j["manifest"].contains("parameters"))
    loaded.manifest_parameters = j["manifest"]["parameters"];
  return loaded;
}

}  // namespace polydrive::cli
