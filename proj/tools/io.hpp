#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "polydrive/types.hpp"

namespace polydrive::cli {

/// Shortest exact decimal for CSV cells: 17 significant digits round-trip.
std::string format_double(double value);

std::string iso8601_utc_now();

/// Manifest block embedded in every output: command name, full parameter
/// set, library version and timestamp.
nlohmann::json make_manifest(const std::string& command, nlohmann::json parameters);

void write_text_file(const std::filesystem::path& path, const std::string& content);
nlohmann::json read_json_file(const std::filesystem::path& path);

struct LoadedPulse {
  Pulse pulse;
  nlohmann::json manifest_parameters;  // null when the file carries no manifest
};

/// Reads a pulse JSON file as written by the optimize command: a "pulse"
/// array of real amplitudes, optionally accompanied by its manifest.
LoadedPulse load_pulse_file(const std::filesystem::path& path);

}  // namespace polydrive::cli
