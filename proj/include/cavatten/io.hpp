#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cavatten/experiment.hpp"

// Boundary serialization. Units at the boundary follow lab conventions:
// GHz / MHz / us / mK with unit-suffixed JSON keys and CSV columns; SI
// internally. JSON config parsing is strict: an unknown key is an error
// naming the offending path, not a warning.
//
// Data CSV files carry full double precision; human-facing display rounding
// lives in format.hpp and never touches these files.
namespace cavatten::io {

using json = nlohmann::json;

// --- JSON configs (strict; errors name the JSON path) ---
modes::ResonatorSpec resonator_from_json(const json& j, const std::string& path);
dephasing::TransmonSpec transmon_from_json(const json& j, const std::string& path);
thermal::ThermalEnvironment environment_from_json(const json& j, const std::string& path);
experiment::DeviceConfig device_config_from_json(const json& j, const std::string& path = "$");

json resonator_to_json(const modes::ResonatorSpec& spec);
json transmon_to_json(const dephasing::TransmonSpec& spec);
json environment_to_json(const thermal::ThermalEnvironment& env);
json device_config_to_json(const experiment::DeviceConfig& cfg);

// --- sweep datasets ---
// CSV schema: axis,value,t1_us,t1_err,t2e_us,t2e_err,tphi_us
// axis is "n_add" (value dimensionless) or "temperature" (value in mK);
// tphi_us prints "inf" when relaxation-limited.
std::string sweep_to_csv(const experiment::SweepDataset& ds);
// Rebuilds points from the CSV columns (derived quantities recomputed from
// t1/t2e); seed/config/warnings come from the sidecar when available.
experiment::SweepDataset sweep_from_csv(const std::string& csv_text);
json sweep_sidecar_json(const experiment::SweepDataset& ds);
void apply_sweep_sidecar(experiment::SweepDataset& ds, const json& sidecar);

// --- traces ---
// CSV schema: time_us,population,sigma
std::string trace_to_csv(const experiment::Trace& trace);
experiment::Trace trace_from_csv(const std::string& csv_text);

// --- files ---
std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary file in the same directory plus rename, so readers
// never observe a half-written file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// --- run manifest ---
// Every file-writing run leaves exactly one manifest.json beside its outputs;
// a stochastic run is reproducible from the manifest alone (command, config
// snapshot, seed). Deliberately carries no timestamps or host details so
// reruns are byte-identical.
struct RunManifest {
  std::string command_line;
  std::string tool_version;
  bool seeded = false;
  std::uint64_t seed = 0;
  json config;  // effective inputs after defaulting
  std::vector<std::string> outputs;
};
json manifest_to_json(const RunManifest& manifest);

}  // namespace cavatten::io
