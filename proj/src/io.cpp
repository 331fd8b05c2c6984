#include "cavatten/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace cavatten::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config error at " + path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : allowed)
      if (item.key() == key) known = true;
    if (!known) fail(path, "unknown key \"" + item.key() + "\"");
  }
}

double num_at(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double num_or(const json& j, const std::string& path, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string string_at(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

// Full-fidelity numeric formatting for data files.
std::string data_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_data_number(const std::string& tok, const char* context) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(context) + ": bad number \"" + tok + "\"");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

modes::ResonatorSpec resonator_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"f_ghz", "kappa_i_mhz", "kappa_c1_mhz", "kappa_c2_mhz"});
  modes::ResonatorSpec spec;
  spec.f_hz = num_at(j, path, "f_ghz") * 1e9;
  spec.kappa_i_hz = num_or(j, path, "kappa_i_mhz", 0) * 1e6;
  spec.kappa_c1_hz = num_or(j, path, "kappa_c1_mhz", 0) * 1e6;
  spec.kappa_c2_hz = num_or(j, path, "kappa_c2_mhz", 0) * 1e6;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return spec;
}

json resonator_to_json(const modes::ResonatorSpec& spec) {
  return json{{"f_ghz", spec.f_hz / 1e9},
              {"kappa_i_mhz", spec.kappa_i_hz / 1e6},
              {"kappa_c1_mhz", spec.kappa_c1_hz / 1e6},
              {"kappa_c2_mhz", spec.kappa_c2_hz / 1e6}};
}

dephasing::TransmonSpec transmon_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"f_ge_ghz", "alpha_ghz", "chi_mhz", "t1_us"});
  dephasing::TransmonSpec spec;
  spec.f_ge_hz = num_at(j, path, "f_ge_ghz") * 1e9;
  spec.anharmonicity_hz = num_or(j, path, "alpha_ghz", 0) * 1e9;
  spec.chi_hz = num_at(j, path, "chi_mhz") * 1e6;
  const double t1_us = num_or(j, path, "t1_us", 0);
  if (t1_us < 0) fail(path + ".t1_us", "must be >= 0");
  spec.gamma1_per_s = t1_us > 0 ? 1.0 / (t1_us * 1e-6) : 0.0;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return spec;
}

json transmon_to_json(const dephasing::TransmonSpec& spec) {
  return json{{"f_ge_ghz", spec.f_ge_hz / 1e9},
              {"alpha_ghz", spec.anharmonicity_hz / 1e9},
              {"chi_mhz", spec.chi_hz / 1e6},
              {"t1_us", spec.gamma1_per_s > 0 ? 1e6 / spec.gamma1_per_s : 0.0}};
}

thermal::ThermalEnvironment environment_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"ports", "chain", "source_temperature_k"});
  thermal::ThermalEnvironment env;
  if (!j.contains("ports") || !j.at("ports").is_array())
    fail(path, "missing key \"ports\" (array)");
  std::size_t idx = 0;
  for (const auto& pj : j.at("ports")) {
    const std::string ppath = path + ".ports[" + std::to_string(idx++) + "]";
    require_object(pj, ppath);
    check_keys(pj, ppath, {"label", "rate_mhz", "occupation"});
    thermal::BathPort port;
    port.label = string_at(pj, ppath, "label");
    port.rate_hz = num_at(pj, ppath, "rate_mhz") * 1e6;
    port.occupation = num_at(pj, ppath, "occupation");
    env.ports.push_back(std::move(port));
  }
  if (j.contains("chain")) {
    if (!j.at("chain").is_array()) fail(path + ".chain", "expected an array");
    idx = 0;
    for (const auto& cj : j.at("chain")) {
      const std::string cpath = path + ".chain[" + std::to_string(idx++) + "]";
      require_object(cj, cpath);
      check_keys(cj, cpath, {"attenuation_db", "temperature_k"});
      env.chain.push_back(
          {num_at(cj, cpath, "attenuation_db"), num_at(cj, cpath, "temperature_k")});
    }
  }
  env.source_temperature_k = num_or(j, path, "source_temperature_k", 300.0);
  try {
    env.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return env;
}

json environment_to_json(const thermal::ThermalEnvironment& env) {
  json ports = json::array();
  for (const auto& p : env.ports)
    ports.push_back(
        {{"label", p.label}, {"rate_mhz", p.rate_hz / 1e6}, {"occupation", p.occupation}});
  json chain = json::array();
  for (const auto& c : env.chain)
    chain.push_back({{"attenuation_db", c.attenuation_db}, {"temperature_k", c.temperature_k}});
  return json{
      {"ports", ports}, {"chain", chain}, {"source_temperature_k", env.source_temperature_k}};
}

experiment::DeviceConfig device_config_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path, {"transmon", "readout", "environment", "gamma_extra_per_s",
                       "gamma_slow_per_s", "t1_jitter"});
  experiment::DeviceConfig cfg;
  if (!j.contains("transmon")) fail(path, "missing key \"transmon\"");
  if (!j.contains("readout")) fail(path, "missing key \"readout\"");
  if (!j.contains("environment")) fail(path, "missing key \"environment\"");
  cfg.transmon = transmon_from_json(j.at("transmon"), path + ".transmon");
  cfg.readout = resonator_from_json(j.at("readout"), path + ".readout");
  cfg.environment = environment_from_json(j.at("environment"), path + ".environment");
  cfg.gamma_extra_per_s = num_or(j, path, "gamma_extra_per_s", 0);
  cfg.gamma_slow_per_s = num_or(j, path, "gamma_slow_per_s", 0);
  cfg.t1_jitter = num_or(j, path, "t1_jitter", 0);
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return cfg;
}

json device_config_to_json(const experiment::DeviceConfig& cfg) {
  return json{{"transmon", transmon_to_json(cfg.transmon)},
              {"readout", resonator_to_json(cfg.readout)},
              {"environment", environment_to_json(cfg.environment)},
              {"gamma_extra_per_s", cfg.gamma_extra_per_s},
              {"gamma_slow_per_s", cfg.gamma_slow_per_s},
              {"t1_jitter", cfg.t1_jitter}};
}

static const char* sweep_header = "axis,value,t1_us,t1_err,t2e_us,t2e_err,tphi_us";

std::string sweep_to_csv(const experiment::SweepDataset& ds) {
  std::ostringstream out;
  out << sweep_header << "\n";
  const bool is_temp = ds.axis == experiment::SweepAxis::temperature;
  for (const auto& pt : ds.points) {
    const double value = is_temp ? pt.axis_value * 1e3 : pt.axis_value;  // K -> mK
    out << (is_temp ? "temperature" : "n_add") << ',' << data_number(value) << ','
        << data_number(pt.coherence.t1_s.value * 1e6) << ','
        << data_number(pt.coherence.t1_s.err * 1e6) << ','
        << data_number(pt.coherence.t2e_s.value * 1e6) << ','
        << data_number(pt.coherence.t2e_s.err * 1e6) << ','
        << data_number(pt.coherence.t_phi_s * 1e6) << "\n";
  }
  return out.str();
}

experiment::SweepDataset sweep_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sweep CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != sweep_header)
    throw std::invalid_argument(std::string("sweep CSV: expected header \"") + sweep_header +
                                "\"");
  experiment::SweepDataset ds;
  bool axis_set = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv_line(line);
    const std::string where = "sweep CSV line " + std::to_string(line_no);
    if (cols.size() != 7) throw std::invalid_argument(where + ": expected 7 columns");
    experiment::SweepAxis axis;
    if (cols[0] == "n_add") {
      axis = experiment::SweepAxis::n_add;
    } else if (cols[0] == "temperature") {
      axis = experiment::SweepAxis::temperature;
    } else {
      throw std::invalid_argument(where + ": unknown axis \"" + cols[0] + "\"");
    }
    if (!axis_set) {
      ds.axis = axis;
      axis_set = true;
    } else if (axis != ds.axis) {
      throw std::invalid_argument(where + ": mixed axis kinds");
    }
    experiment::SweepPoint pt;
    const double raw = parse_data_number(cols[1], where.c_str());
    pt.axis_value = axis == experiment::SweepAxis::temperature ? raw / 1e3 : raw;  // mK -> K
    const dephasing::Measured t1 = {parse_data_number(cols[2], where.c_str()) * 1e-6,
                                    parse_data_number(cols[3], where.c_str()) * 1e-6};
    const dephasing::Measured t2e = {parse_data_number(cols[4], where.c_str()) * 1e-6,
                                     parse_data_number(cols[5], where.c_str()) * 1e-6};
    parse_data_number(cols[6], where.c_str());  // tphi column is derived; recomputed below
    pt.coherence = dephasing::pure_dephasing_from_times(t1, t2e);
    ds.points.push_back(pt);
  }
  if (ds.points.empty()) throw std::invalid_argument("sweep CSV: no data rows");
  return ds;
}

json sweep_sidecar_json(const experiment::SweepDataset& ds) {
  return json{{"axis", ds.axis == experiment::SweepAxis::temperature ? "temperature" : "n_add"},
              {"seed", ds.seed},
              {"config", device_config_to_json(ds.config)},
              {"warnings", ds.warnings}};
}

void apply_sweep_sidecar(experiment::SweepDataset& ds, const json& sidecar) {
  const std::string path = "$";
  require_object(sidecar, path);
  check_keys(sidecar, path, {"axis", "seed", "config", "warnings"});
  const std::string axis = string_at(sidecar, path, "axis");
  if (axis != "n_add" && axis != "temperature") fail(path + ".axis", "unknown axis");
  const auto file_axis =
      axis == "n_add" ? experiment::SweepAxis::n_add : experiment::SweepAxis::temperature;
  if (!ds.points.empty() && file_axis != ds.axis)
    fail(path + ".axis", "sidecar axis disagrees with the CSV");
  ds.axis = file_axis;
  if (sidecar.contains("seed")) {
    if (!sidecar.at("seed").is_number_unsigned()) fail(path + ".seed", "expected an unsigned integer");
    ds.seed = sidecar.at("seed").get<std::uint64_t>();
  }
  if (sidecar.contains("config"))
    ds.config = device_config_from_json(sidecar.at("config"), path + ".config");
  if (sidecar.contains("warnings")) {
    if (!sidecar.at("warnings").is_array()) fail(path + ".warnings", "expected an array");
    ds.warnings.clear();
    for (const auto& w : sidecar.at("warnings")) {
      if (!w.is_string()) fail(path + ".warnings", "expected strings");
      ds.warnings.push_back(w.get<std::string>());
    }
  }
}

static const char* trace_header = "time_us,population,sigma";

std::string trace_to_csv(const experiment::Trace& trace) {
  std::ostringstream out;
  out << trace_header << "\n";
  for (std::size_t i = 0; i < trace.times_s.size(); ++i) {
    out << data_number(trace.times_s[i] * 1e6) << ',' << data_number(trace.populations[i]) << ','
        << data_number(trace.sigmas[i]) << "\n";
  }
  return out.str();
}

experiment::Trace trace_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trace_header)
    throw std::invalid_argument(std::string("trace CSV: expected header \"") + trace_header +
                                "\"");
  experiment::Trace tr;
  tr.shots = 1;  // unknown for external data; irrelevant to fitting
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv_line(line);
    const std::string where = "trace CSV line " + std::to_string(line_no);
    if (cols.size() != 3) throw std::invalid_argument(where + ": expected 3 columns");
    tr.times_s.push_back(parse_data_number(cols[0], where.c_str()) * 1e-6);
    tr.populations.push_back(parse_data_number(cols[1], where.c_str()));
    tr.sigmas.push_back(parse_data_number(cols[2], where.c_str()));
  }
  tr.validate();
  return tr;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

json manifest_to_json(const RunManifest& manifest) {
  json j{{"command", manifest.command_line},
         {"tool_version", manifest.tool_version},
         {"config", manifest.config},
         {"outputs", manifest.outputs}};
  if (manifest.seeded) j["seed"] = manifest.seed;
  return j;
}

}  // namespace cavatten::io
