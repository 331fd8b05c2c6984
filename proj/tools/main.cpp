// cavatten: photon-noise budgets, attenuator design estimates, and coherence
// analysis for dispersively read-out superconducting qubits.
//
// Exit codes: 0 success, 1 validation error, 2 numerical non-convergence,
// 3 acceptance failure (reproduce only).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cavatten/acceptance.hpp"
#include "cavatten/analysis.hpp"
#include "cavatten/design.hpp"
#include "cavatten/experiment.hpp"
#include "cavatten/format.hpp"
#include "cavatten/io.hpp"
#include "cavatten/modes.hpp"
#include "cavatten/thermal.hpp"

namespace {

namespace fs = std::filesystem;
using cavatten::io::json;

// Global options live on the root app; subcommand callbacks run before the
// root callback in CLI11, so they resolve these lazily through the accessors.
struct Global {
  bool json_mode = false;
  CLI::Option* seed_opt = nullptr;
  std::uint64_t seed_value = 0;
  CLI::Option* out_opt = nullptr;
  std::string out_value;
  std::string command_line;
  int exit_code = 0;

  std::optional<std::uint64_t> seed() const {
    if (seed_opt && seed_opt->count()) return seed_value;
    if (const char* env = std::getenv("CAVATTEN_SEED")) {
      try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        return v;
      } catch (const std::exception&) {
        throw std::invalid_argument("CAVATTEN_SEED is not an unsigned integer");
      }
    }
    return std::nullopt;
  }
  std::optional<std::string> out_dir() const {
    if (out_opt && out_opt->count()) return out_value;
    return std::nullopt;
  }
};

std::uint64_t require_seed(const Global& g) {
  if (const auto s = g.seed()) return *s;
  throw std::invalid_argument("--seed is required for stochastic commands (or set CAVATTEN_SEED)");
}

// Text and JSON carry the same displayed values: both go through the same
// 10-significant-digit rounding, so parsing either yields identical numbers.
class Result {
 public:
  explicit Result(bool json_mode) : json_mode_(json_mode) {}

  void num(const std::string& key, double v) {
    if (std::isfinite(v)) {
      payload_[key] = cavatten::fmt::display_round(v);
    } else {
      payload_[key] = cavatten::fmt::number(v);  // "inf"/"nan" as strings
    }
    lines_ += key + " = " + cavatten::fmt::number(v) + "\n";
  }
  void str(const std::string& key, const std::string& v) {
    payload_[key] = v;
    lines_ += key + " = " + v + "\n";
  }
  void flag(const std::string& key, bool v) {
    payload_[key] = v;
    lines_ += key + std::string(" = ") + (v ? "true" : "false") + "\n";
  }
  void raw_text(const std::string& block) { text_block_ = block; }
  void array(const std::string& key, json arr) { payload_[key] = std::move(arr); }

  void print() const {
    if (json_mode_) {
      std::cout << payload_.dump(2) << "\n";
    } else if (!text_block_.empty()) {
      std::cout << text_block_;
    } else {
      std::cout << lines_;
    }
  }

 private:
  bool json_mode_;
  json payload_ = json::object();
  std::string lines_;
  std::string text_block_;
};

json load_json_file(const std::string& path) {
  const std::string text = cavatten::io::read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config error in " + path + ": " + e.what());
  }
}

// Writes outputs plus the run manifest; every file-writing run leaves exactly
// one manifest.json beside its outputs.
void write_outputs(const Global& g, const std::vector<std::pair<std::string, std::string>>& files,
                   json config_snapshot, bool seeded) {
  const auto out = g.out_dir();
  const fs::path dir = out ? fs::path(*out) : fs::path(".");
  fs::create_directories(dir);
  cavatten::io::RunManifest manifest;
  manifest.command_line = g.command_line;
  manifest.tool_version = CAVATTEN_VERSION;
  manifest.seeded = seeded;
  manifest.seed = seeded && g.seed() ? *g.seed() : 0;
  manifest.config = std::move(config_snapshot);
  for (const auto& [name, content] : files) {
    cavatten::io::atomic_write_text(dir / name, content);
    manifest.outputs.push_back(name);
  }
  cavatten::io::atomic_write_text(dir / "manifest.json",
                                  cavatten::io::manifest_to_json(manifest).dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("points must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(points));
  if (points == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < points; ++i)
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return v;
}

// ---------------------------------------------------------------- thermal --
void add_thermal(CLI::App& app, Global& g) {
  auto* thermal = app.add_subcommand("thermal", "Photon occupation and noise-budget calculations");
  thermal->require_subcommand(1);

  {
    auto* cmd = thermal->add_subcommand("occupation", "Bose-Einstein occupation of a mode");
    auto f_ghz = std::make_shared<double>(0);
    auto t_mk = std::make_shared<double>(0);
    cmd->add_option("--f-ghz", *f_ghz, "Mode frequency in GHz")->required();
    cmd->add_option("--t-mk", *t_mk, "Bath temperature in mK")->required();
    cmd->callback([&g, f_ghz, t_mk] {
      const double nbar = cavatten::thermal::bose_einstein_occupation(*f_ghz * 1e9, *t_mk * 1e-3);
      Result r(g.json_mode);
      r.num("nbar", nbar);
      r.print();
    });
  }
  {
    auto* cmd = thermal->add_subcommand("temperature", "Effective temperature of an occupation");
    auto f_ghz = std::make_shared<double>(0);
    auto nbar = std::make_shared<double>(0);
    cmd->add_option("--f-ghz", *f_ghz, "Mode frequency in GHz")->required();
    cmd->add_option("--nbar", *nbar, "Mean photon number")->required();
    cmd->callback([&g, f_ghz, nbar] {
      const double t = cavatten::thermal::effective_temperature(*f_ghz * 1e9, *nbar);
      Result r(g.json_mode);
      r.num("t_eff_mk", t * 1e3);
      r.print();
    });
  }
  {
    auto* cmd = thermal->add_subcommand("mixed", "Rate-weighted multi-bath occupation");
    auto rates = std::make_shared<std::vector<double>>();
    auto occs = std::make_shared<std::vector<double>>();
    auto f_ghz = std::make_shared<double>(0);
    cmd->add_option("--rate-mhz", *rates, "Port coupling rates in MHz")->required()->expected(-1);
    cmd->add_option("--occupation", *occs, "Port occupations (same order)")->required()->expected(-1);
    auto* fopt = cmd->add_option("--f-ghz", *f_ghz, "Optional frequency for T_eff of the mix");
    cmd->callback([&g, rates, occs, f_ghz, fopt] {
      if (rates->size() != occs->size())
        throw std::invalid_argument("--rate-mhz and --occupation need the same count");
      std::vector<cavatten::thermal::BathPort> ports;
      for (std::size_t i = 0; i < rates->size(); ++i)
        ports.push_back({"port" + std::to_string(i), (*rates)[i] * 1e6, (*occs)[i]});
      const double nbar = cavatten::thermal::mixed_bath_occupation(ports);
      Result r(g.json_mode);
      r.num("nbar", nbar);
      if (fopt->count() && nbar > 0)
        r.num("t_eff_mk", cavatten::thermal::effective_temperature(*f_ghz * 1e9, nbar) * 1e3);
      r.print();
    });
  }
  {
    auto* cmd = thermal->add_subcommand("chain", "Occupation after an attenuation chain");
    auto config = std::make_shared<std::string>();
    auto f_ghz = std::make_shared<double>(0);
    cmd->add_option("--config", *config, "ThermalEnvironment JSON file")->required();
    cmd->add_option("--f-ghz", *f_ghz, "Mode frequency in GHz")->required();
    cmd->callback([&g, config, f_ghz] {
      const auto env = cavatten::io::environment_from_json(load_json_file(*config), "$");
      const double f = *f_ghz * 1e9;
      const double n_source =
          cavatten::thermal::bose_einstein_occupation(f, env.source_temperature_k);
      const double n_out = cavatten::thermal::attenuation_chain_occupation(env, f);
      Result r(g.json_mode);
      r.num("nbar_source", n_source);
      r.num("nbar_device_input", n_out);
      if (n_out > 0) r.num("t_eff_mk", cavatten::thermal::effective_temperature(f, n_out) * 1e3);
      r.print();
    });
  }
}

// ----------------------------------------------------------------- design --
double resolve_resistivity(const std::string& material, double resistivity) {
  if (!material.empty()) {
    const auto mat = cavatten::design::lookup_material(material);
    if (!mat) throw std::invalid_argument("unknown material \"" + material + "\"");
    return mat->resistivity_ohm_m;
  }
  if (resistivity > 0) return resistivity;
  throw std::invalid_argument("provide --material or --resistivity-ohm-m");
}

void add_design(CLI::App& app, Global& g) {
  auto* design = app.add_subcommand("design", "Attenuator design estimates");
  design->require_subcommand(1);

  {
    auto* cmd = design->add_subcommand("skin-depth", "Classical skin depth");
    auto material = std::make_shared<std::string>();
    auto rho = std::make_shared<double>(0);
    auto f_ghz = std::make_shared<double>(0);
    cmd->add_option("--material", *material, "Built-in material (copper, brass)");
    cmd->add_option("--resistivity-ohm-m", *rho, "Resistivity in ohm-m");
    cmd->add_option("--f-ghz", *f_ghz, "Frequency in GHz")->required();
    cmd->callback([&g, material, rho, f_ghz] {
      const double r = resolve_resistivity(*material, *rho);
      Result res(g.json_mode);
      res.num("skin_depth_um", cavatten::design::skin_depth(r, *f_ghz * 1e9) * 1e6);
      res.print();
    });
  }
  {
    auto* cmd = design->add_subcommand("q", "Internal Q from the gap geometry");
    auto material = std::make_shared<std::string>();
    auto rho = std::make_shared<double>(0);
    auto f_ghz = std::make_shared<double>(0);
    auto gap_um = std::make_shared<double>(0);
    auto gfac = std::make_shared<double>(1.0);
    cmd->add_option("--material", *material, "Built-in material (copper, brass)");
    cmd->add_option("--resistivity-ohm-m", *rho, "Resistivity in ohm-m");
    cmd->add_option("--f-ghz", *f_ghz, "Frequency in GHz")->required();
    cmd->add_option("--gap-um", *gap_um, "Plate gap in um")->required();
    cmd->add_option("--geometry-factor", *gfac, "Geometry factor G (default 1)");
    cmd->callback([&g, material, rho, f_ghz, gap_um, gfac] {
      const double r = resolve_resistivity(*material, *rho);
      const double f = *f_ghz * 1e9;
      const double delta = cavatten::design::skin_depth(r, f);
      cavatten::design::AttenuatorGeometry geom;
      geom.gap_m = *gap_um * 1e-6;
      geom.geometry_factor = *gfac;
      const auto est = cavatten::design::q_estimate(geom, delta, f);
      Result res(g.json_mode);
      res.num("skin_depth_um", delta * 1e6);
      res.num("q_internal", est.q_internal);
      res.num("kappa_i_mhz", est.kappa_i_hz / 1e6);
      res.print();
    });
  }
  {
    auto* cmd = design->add_subcommand("frequency", "Half-wave frequency and cryogenic shift");
    auto length_mm = std::make_shared<double>(0);
    auto correction = std::make_shared<double>(1.0);
    auto f_rt_ghz = std::make_shared<double>(0);
    auto contraction = std::make_shared<double>(0);
    auto* lopt = cmd->add_option("--length-mm", *length_mm, "Resonant length in mm");
    cmd->add_option("--correction", *correction, "Effective-length correction (default 1)");
    auto* fopt = cmd->add_option("--f-rt-ghz", *f_rt_ghz, "Measured room-temperature frequency");
    auto* copt =
        cmd->add_option("--contraction", *contraction, "Fractional contraction on cooldown");
    lopt->excludes(fopt);
    cmd->callback([&g, length_mm, correction, f_rt_ghz, contraction, lopt, fopt, copt] {
      double f_rt;
      if (lopt->count()) {
        cavatten::design::AttenuatorGeometry geom;
        geom.length_m = *length_mm * 1e-3;
        geom.effective_length_correction = *correction;
        f_rt = cavatten::design::halfwave_frequency(geom);
      } else if (fopt->count()) {
        f_rt = *f_rt_ghz * 1e9;
      } else {
        throw std::invalid_argument("provide --length-mm or --f-rt-ghz");
      }
      Result res(g.json_mode);
      res.num("f_ghz", f_rt / 1e9);
      if (copt->count())
        res.num("f_cold_ghz", cavatten::design::contracted_frequency(f_rt, *contraction) / 1e9);
      res.print();
    });
  }
  {
    auto* cmd = design->add_subcommand("conductivity", "Conductivity gain from linewidths");
    auto rt = std::make_shared<double>(0);
    auto cold = std::make_shared<double>(0);
    cmd->add_option("--kappa-rt-mhz", *rt, "Room-temperature linewidth in MHz")->required();
    cmd->add_option("--kappa-cold-mhz", *cold, "Cold linewidth in MHz")->required();
    cmd->callback([&g, rt, cold] {
      Result res(g.json_mode);
      res.num("conductivity_ratio",
              cavatten::design::conductivity_ratio_from_linewidths(*rt * 1e6, *cold * 1e6));
      res.print();
    });
  }
  {
    auto* cmd = design->add_subcommand("check", "Check a design against the requirements");
    auto config = std::make_shared<std::string>();
    auto target = std::make_shared<double>(0);
    auto tol_mhz = std::make_shared<double>(25.0);
    cmd->add_option("--config", *config, "ResonatorSpec JSON file")->required();
    cmd->add_option("--target-ghz", *target, "Target center frequency in GHz")->required();
    cmd->add_option("--center-tolerance-mhz", *tol_mhz, "Centering tolerance in MHz (default 25)");
    cmd->callback([&g, config, target, tol_mhz] {
      const auto spec = cavatten::io::resonator_from_json(load_json_file(*config), "$");
      cavatten::design::RequirementWindow win;
      win.center_tolerance_hz = *tol_mhz * 1e6;
      const auto rep = cavatten::design::check_requirements(spec, *target * 1e9, win);
      Result res(g.json_mode);
      res.num("f_ghz", rep.f_hz / 1e9);
      res.num("target_ghz", rep.target_f_hz / 1e9);
      res.num("insertion_loss_db", rep.insertion_loss_db);
      res.num("bandwidth_mhz", rep.bandwidth_hz / 1e6);
      res.flag("centered", rep.centered);
      res.flag("attenuation_ok", rep.attenuation_ok);
      res.flag("bandwidth_ok", rep.bandwidth_ok);
      res.flag("all_ok", rep.all_ok());
      res.print();
    });
  }
}

// -------------------------------------------------------------- hybridize --
void add_hybridize(CLI::App& app, Global& g) {
  auto* hyb = app.add_subcommand("hybridize", "Two-mode hybridization problems");
  hyb->require_subcommand(1);

  {
    auto* cmd = hyb->add_subcommand("forward", "Dressed modes from bare modes and coupling");
    auto fa = std::make_shared<double>(0);
    auto fb = std::make_shared<double>(0);
    auto gm = std::make_shared<double>(0);
    cmd->add_option("--fa-ghz", *fa, "Bare frequency of cavity a in GHz")->required();
    cmd->add_option("--fb-ghz", *fb, "Bare frequency of cavity b in GHz")->required();
    cmd->add_option("--g-mhz", *gm, "Coupling in MHz")->required();
    cmd->callback([&g, fa, fb, gm] {
      const auto pair = cavatten::modes::hybridize(*fa * 1e9, *fb * 1e9, *gm * 1e6);
      Result res(g.json_mode);
      res.num("f_minus_ghz", pair.lower.f_hz / 1e9);
      res.num("f_plus_ghz", pair.upper.f_hz / 1e9);
      res.num("p_lower_in_a", pair.lower.participations[0].fraction);
      res.num("p_upper_in_a", pair.upper.participations[0].fraction);
      res.num("splitting_mhz", (pair.upper.f_hz - pair.lower.f_hz) / 1e6);
      res.print();
    });
  }
  {
    auto* cmd = hyb->add_subcommand("invert", "Bare modes from dressed frequencies");
    auto fm = std::make_shared<double>(0);
    auto fp = std::make_shared<double>(0);
    auto p = std::make_shared<double>(0);
    cmd->add_option("--f-minus-ghz", *fm, "Lower dressed frequency in GHz")->required();
    cmd->add_option("--f-plus-ghz", *fp, "Upper dressed frequency in GHz")->required();
    cmd->add_option("--participation", *p, "Lower mode's participation in cavity a")->required();
    cmd->callback([&g, fm, fp, p] {
      const auto bare = cavatten::modes::infer_coupling(*fm * 1e9, *fp * 1e9, *p);
      Result res(g.json_mode);
      res.num("fa_ghz", bare.f_a_hz / 1e9);
      res.num("fb_ghz", bare.f_b_hz / 1e9);
      res.num("delta_mhz", (bare.f_b_hz - bare.f_a_hz) / 1e6);
      res.num("g_mhz", bare.g_hz / 1e6);
      res.print();
    });
  }
}

// --------------------------------------------------------------- simulate --
void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void add_simulate(CLI::App& app, Global& g) {
  auto* sim = app.add_subcommand("simulate", "Generate synthetic datasets (writes files)");
  sim->require_subcommand(1);

  {
    auto* cmd = sim->add_subcommand("trace", "Binomially sampled decay trace");
    auto kind_name = std::make_shared<std::string>("t1");
    auto rate = std::make_shared<double>(0);
    auto t_max_us = std::make_shared<double>(0);
    auto points = std::make_shared<int>(25);
    auto shots = std::make_shared<std::int64_t>(1000);
    auto exact = std::make_shared<bool>(false);
    auto name = std::make_shared<std::string>("trace");
    cmd->add_option("--kind", *kind_name, "t1, ramsey, or echo (default t1)")
        ->check(CLI::IsMember({"t1", "ramsey", "echo"}));
    cmd->add_option("--rate-per-s", *rate, "True decay rate in 1/s")->required();
    cmd->add_option("--t-max-us", *t_max_us, "Last sample time in us")->required();
    cmd->add_option("--points", *points, "Number of time points (default 25)");
    cmd->add_option("--shots", *shots, "Shots per point (default 1000)");
    cmd->add_flag("--exact", *exact, "Infinite-shots limit (no sampling noise)");
    cmd->add_option("--name", *name, "Output base name (default trace)");
    cmd->callback([&g, kind_name, rate, t_max_us, points, shots, exact, name] {
      const std::uint64_t seed = *exact ? 0 : require_seed(g);
      cavatten::experiment::TraceKind kind = cavatten::experiment::TraceKind::t1;
      if (*kind_name == "ramsey") kind = cavatten::experiment::TraceKind::ramsey;
      if (*kind_name == "echo") kind = cavatten::experiment::TraceKind::echo;
      const auto times = linspace(0, *t_max_us * 1e-6, *points);
      const auto trace = cavatten::experiment::simulate_trace(kind, *rate, times, *shots, seed,
                                                              std::nullopt, *exact);
      json cfg{{"kind", *kind_name},     {"rate_per_s", *rate}, {"t_max_us", *t_max_us},
               {"points", *points},      {"shots", *shots},     {"exact", *exact}};
      write_outputs(g, {{*name + ".csv", cavatten::io::trace_to_csv(trace)}}, cfg, !*exact);
      Result res(g.json_mode);
      res.str("output", *name + ".csv");
      res.num("points", static_cast<double>(trace.times_s.size()));
      res.print();
    });
  }
  {
    auto* cmd = sim->add_subcommand("injection", "Noise-injection sweep");
    auto config = std::make_shared<std::string>();
    auto n_add_max = std::make_shared<double>(0.01);
    auto points = std::make_shared<int>(8);
    auto n_add_list = std::make_shared<std::vector<double>>();
    auto repeats = std::make_shared<int>(10);
    auto name = std::make_shared<std::string>("injection");
    cmd->add_option("--config", *config, "DeviceConfig JSON file")->required();
    cmd->add_option("--n-add-max", *n_add_max, "Largest added occupation (default 0.01)");
    cmd->add_option("--points", *points, "Number of sweep points (default 8)");
    cmd->add_option("--n-add", *n_add_list, "Explicit n_add values (overrides the grid)")
        ->expected(-1);
    cmd->add_option("--repeats", *repeats, "Measurements per point (default 10)");
    cmd->add_option("--name", *name, "Output base name (default injection)");
    cmd->callback([&g, config, n_add_max, points, n_add_list, repeats, name] {
      const std::uint64_t seed = require_seed(g);
      const auto cfg = cavatten::io::device_config_from_json(load_json_file(*config));
      const auto n_add =
          n_add_list->empty() ? linspace(0, *n_add_max, *points) : *n_add_list;
      auto ds = cavatten::experiment::simulate_noise_injection_sweep(cfg, n_add, *repeats, seed);
      ds.seed = seed;
      print_warnings(ds.warnings);
      json snapshot{{"device", cavatten::io::device_config_to_json(cfg)},
                    {"n_add", n_add},
                    {"repeats", *repeats}};
      write_outputs(g,
                    {{*name + ".csv", cavatten::io::sweep_to_csv(ds)},
                     {*name + ".json", cavatten::io::sweep_sidecar_json(ds).dump(2) + "\n"}},
                    snapshot, true);
      Result res(g.json_mode);
      res.str("output", *name + ".csv");
      res.num("points", static_cast<double>(ds.points.size()));
      res.num("n_th", cfg.thermal_occupation());
      res.print();
    });
  }
  {
    auto* cmd = sim->add_subcommand("temperature", "Temperature sweep");
    auto config = std::make_shared<std::string>();
    auto t_min = std::make_shared<double>(13.0);
    auto t_max = std::make_shared<double>(120.0);
    auto points = std::make_shared<int>(12);
    auto repeats = std::make_shared<int>(10);
    auto name = std::make_shared<std::string>("temperature");
    cmd->add_option("--config", *config, "DeviceConfig JSON file")->required();
    cmd->add_option("--t-min-mk", *t_min, "Lowest temperature in mK (default 13)");
    cmd->add_option("--t-max-mk", *t_max, "Highest temperature in mK (default 120)");
    cmd->add_option("--points", *points, "Number of sweep points (default 12)");
    cmd->add_option("--repeats", *repeats, "Measurements per point (default 10)");
    cmd->add_option("--name", *name, "Output base name (default temperature)");
    cmd->callback([&g, config, t_min, t_max, points, repeats, name] {
      const std::uint64_t seed = require_seed(g);
      const auto cfg = cavatten::io::device_config_from_json(load_json_file(*config));
      const auto temps = linspace(*t_min * 1e-3, *t_max * 1e-3, *points);
      auto ds = cavatten::experiment::simulate_temperature_sweep(cfg, temps, seed, *repeats);
      ds.seed = seed;
      print_warnings(ds.warnings);
      json snapshot{{"device", cavatten::io::device_config_to_json(cfg)},
                    {"temperatures_k", temps},
                    {"repeats", *repeats}};
      write_outputs(g,
                    {{*name + ".csv", cavatten::io::sweep_to_csv(ds)},
                     {*name + ".json", cavatten::io::sweep_sidecar_json(ds).dump(2) + "\n"}},
                    snapshot, true);
      Result res(g.json_mode);
      res.str("output", *name + ".csv");
      res.num("points", static_cast<double>(ds.points.size()));
      res.print();
    });
  }
}

// -------------------------------------------------------------------- fit --
void add_fit(CLI::App& app, Global& g) {
  auto* fit = app.add_subcommand("fit", "Fit traces and extract photon numbers");
  fit->require_subcommand(1);

  {
    auto* cmd = fit->add_subcommand("trace", "Exponential fit of a decay trace CSV");
    auto input = std::make_shared<std::string>();
    cmd->add_option("--input", *input, "Trace CSV (time_us,population,sigma)")->required();
    cmd->callback([&g, input] {
      const auto trace = cavatten::io::trace_from_csv(cavatten::io::read_text_file(*input));
      const auto f = cavatten::analysis::fit_exponential(trace);
      Result res(g.json_mode);
      res.num("rate_per_s", f.rate_per_s.estimate);
      res.num("rate_ci_low", f.rate_per_s.ci_low);
      res.num("rate_ci_high", f.rate_per_s.ci_high);
      if (f.rate_per_s.estimate > 0)
        res.num("time_constant_us", 1e6 / f.rate_per_s.estimate);
      res.num("amplitude", f.amplitude.estimate);
      res.num("baseline", f.baseline.estimate);
      res.num("chi2", f.chi2);
      res.num("iterations", f.iterations);
      res.str("method", f.method);
      res.print();
      if (g.out_dir()) {
        json out{{"rate_per_s", f.rate_per_s.estimate},
                 {"rate_ci_low", f.rate_per_s.ci_low},
                 {"rate_ci_high", f.rate_per_s.ci_high},
                 {"amplitude", f.amplitude.estimate},
                 {"baseline", f.baseline.estimate},
                 {"chi2", f.chi2},
                 {"method", f.method}};
        write_outputs(g, {{"fit_trace.json", out.dump(2) + "\n"}}, json{{"input", *input}}, false);
      }
    });
  }
  {
    auto* cmd = fit->add_subcommand("nth", "Residual photon number from a sweep CSV");
    auto input = std::make_shared<std::string>();
    auto kappa_mhz = std::make_shared<double>(0);
    auto chi_mhz = std::make_shared<double>(0);
    auto config = std::make_shared<std::string>();
    auto fix_slope = std::make_shared<bool>(false);
    auto gamma_offset = std::make_shared<double>(0);
    auto n_boot = std::make_shared<int>(1000);
    auto coverage = std::make_shared<double>(0.95);
    cmd->add_option("--input", *input, "Sweep CSV")->required();
    auto* kopt = cmd->add_option("--kappa-mhz", *kappa_mhz, "Total linewidth in MHz");
    auto* xopt = cmd->add_option("--chi-mhz", *chi_mhz, "Dispersive shift in MHz");
    cmd->add_option("--config", *config, "DeviceConfig JSON supplying kappa/chi");
    cmd->add_flag("--fix-slope", *fix_slope, "Pin the slope to the analytic value");
    cmd->add_option("--gamma-offset-per-s", *gamma_offset,
                    "Known non-photon dephasing (fixed-slope mode)");
    cmd->add_option("--bootstrap", *n_boot, "Bootstrap resamples (default 1000)");
    cmd->add_option("--coverage", *coverage, "CI coverage (default 0.95)");
    cmd->callback([&g, input, kappa_mhz, chi_mhz, config, fix_slope, gamma_offset, n_boot,
                   coverage, kopt, xopt] {
      auto ds = cavatten::io::sweep_from_csv(cavatten::io::read_text_file(*input));
      // kappa/chi resolution: flags, then --config, then the CSV's sidecar.
      double kappa_hz = 0, chi_hz = 0;
      if (kopt->count() && xopt->count()) {
        kappa_hz = *kappa_mhz * 1e6;
        chi_hz = *chi_mhz * 1e6;
      } else if (!config->empty()) {
        const auto cfg = cavatten::io::device_config_from_json(load_json_file(*config));
        kappa_hz = cfg.readout.kappa_total_hz();
        chi_hz = cfg.transmon.chi_hz;
      } else {
        const fs::path sidecar = fs::path(*input).replace_extension(".json");
        if (!fs::exists(sidecar))
          throw std::invalid_argument(
              "provide --kappa-mhz/--chi-mhz, --config, or a sweep sidecar JSON");
        cavatten::io::apply_sweep_sidecar(ds, load_json_file(sidecar.string()));
        kappa_hz = ds.config.readout.kappa_total_hz();
        chi_hz = ds.config.transmon.chi_hz;
      }
      if (ds.axis != cavatten::experiment::SweepAxis::n_add)
        throw std::invalid_argument("fit nth needs a noise-injection sweep (axis n_add)");

      cavatten::analysis::ExtractionOptions opts;
      opts.fix_slope = *fix_slope;
      opts.gamma_offset_per_s = *gamma_offset;
      opts.n_bootstrap = *n_boot;
      opts.coverage = *coverage;
      if (*n_boot > 0) opts.seed = require_seed(g);
      const auto ext =
          cavatten::analysis::extract_nth(ds.points, kappa_hz, chi_hz, opts);
      Result res(g.json_mode);
      res.num("n_th", ext.n_th.estimate);
      res.num("n_th_ci_low", ext.n_th.ci_low);
      res.num("n_th_ci_high", ext.n_th.ci_high);
      res.num("n_th_floored", std::max(0.0, ext.n_th.estimate));
      res.num("slope_per_s", ext.slope_per_s.estimate);
      res.num("slope_ci_low", ext.slope_per_s.ci_low);
      res.num("slope_ci_high", ext.slope_per_s.ci_high);
      res.num("analytic_slope_per_s", ext.analytic_slope_per_s);
      res.num("intercept_per_s", ext.intercept_per_s);
      res.num("n_points", ext.n_points);
      res.num("bootstrap_kept", ext.bootstrap_kept);
      res.flag("slope_fixed", ext.slope_fixed);
      res.flag("indeterminate", ext.indeterminate);
      res.print();
      if (g.out_dir()) {
        json out{{"n_th", ext.n_th.estimate},
                 {"ci_low", ext.n_th.ci_low},
                 {"ci_high", ext.n_th.ci_high},
                 {"coverage", *coverage},
                 {"slope_per_s", ext.slope_per_s.estimate},
                 {"analytic_slope_per_s", ext.analytic_slope_per_s},
                 {"indeterminate", ext.indeterminate},
                 {"n_bootstrap", *n_boot}};
        write_outputs(g, {{"fit_nth.json", out.dump(2) + "\n"}}, json{{"input", *input}},
                      *n_boot > 0);
      }
    });
  }
}

// ----------------------------------------------------------------- report --
void add_report(CLI::App& app, Global& g) {
  auto* cmd = app.add_subcommand("report", "Coherence summary table for device rows");
  auto config = std::make_shared<std::string>();
  cmd->add_option("--config", *config, "Rows JSON ({\"rows\": [...]})")->required();
  cmd->callback([&g, config] {
    const json root = load_json_file(*config);
    if (!root.is_object() || !root.contains("rows") || !root.at("rows").is_array())
      throw std::invalid_argument("config error at $: expected an object with a \"rows\" array");
    for (const auto& item : root.items())
      if (item.key() != "rows")
        throw std::invalid_argument("config error at $: unknown key \"" + item.key() + "\"");

    std::vector<cavatten::analysis::ReportRow> rows;
    std::size_t idx = 0;
    for (const auto& rj : root.at("rows")) {
      const std::string path = "$.rows[" + std::to_string(idx++) + "]";
      if (!rj.is_object()) throw std::invalid_argument("config error at " + path + ": expected an object");
      for (const auto& item : rj.items()) {
        static const std::vector<std::string> allowed = {"label",  "config",     "t1_us",
                                                         "t1_err_us", "t2e_us", "t2e_err_us"};
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
          throw std::invalid_argument("config error at " + path + ": unknown key \"" + item.key() +
                                      "\"");
      }
      cavatten::analysis::ReportRow row;
      row.label = rj.contains("label") ? rj.at("label").get<std::string>() : "row" + std::to_string(idx);
      if (!rj.contains("config"))
        throw std::invalid_argument("config error at " + path + ": missing key \"config\"");
      row.config = cavatten::io::device_config_from_json(rj.at("config"), path + ".config");
      const double t1 = rj.at("t1_us").get<double>() * 1e-6;
      const double t1e = rj.contains("t1_err_us") ? rj.at("t1_err_us").get<double>() * 1e-6 : 0;
      const double t2 = rj.at("t2e_us").get<double>() * 1e-6;
      const double t2e = rj.contains("t2e_err_us") ? rj.at("t2e_err_us").get<double>() * 1e-6 : 0;
      row.coherence = cavatten::dephasing::pure_dephasing_from_times({t1, t1e}, {t2, t2e});
      rows.push_back(std::move(row));
    }
    const auto report = cavatten::analysis::coherence_report(rows);

    Result res(g.json_mode);
    json jrows = json::array();
    for (const auto& r : report.rows) {
      json jr;
      jr["label"] = r.label;
      jr["f_ro_ghz"] = cavatten::fmt::display_round(r.f_ro_ghz);
      jr["kappa_i_mhz"] = cavatten::fmt::display_round(r.kappa_i_mhz);
      jr["kappa_c_mhz"] = cavatten::fmt::display_round(r.kappa_c_mhz);
      jr["chi_mhz"] = cavatten::fmt::display_round(r.chi_mhz);
      jr["t1_us"] = cavatten::fmt::display_round(r.t1_us);
      jr["t2e_us"] = cavatten::fmt::display_round(r.t2e_us);
      jr["ratio"] = cavatten::fmt::display_round(r.ratio);
      jr["ratio_err"] = cavatten::fmt::display_round(r.ratio_err);
      if (std::isfinite(r.t_phi_us)) {
        jr["t_phi_us"] = cavatten::fmt::display_round(r.t_phi_us);
      } else {
        jr["t_phi_us"] = cavatten::fmt::number(r.t_phi_us);
      }
      jr["nbar_bound"] = cavatten::fmt::display_round(r.nbar_bound);
      jr["t_eff_mk"] = cavatten::fmt::display_round(r.t_eff_mk);
      jr["below_sensitivity"] = r.below_sensitivity;
      jrows.push_back(std::move(jr));
    }
    res.array("rows", jrows);
    res.raw_text(report.text);
    res.print();
    if (g.out_dir()) {
      write_outputs(g, {{"report.txt", report.text}, {"report.csv", report.csv}},
                    json{{"input", *config}}, false);
    }
  });
}

// -------------------------------------------------------------- reproduce --
void add_reproduce(CLI::App& app, Global& g) {
  auto* cmd = app.add_subcommand("reproduce", "Run the acceptance suite");
  auto suite = std::make_shared<std::string>("all");
  cmd->add_option("--suite", *suite,
                  "all, dephasing, devices, thermal, transmission, hybridization, design, "
                  "extraction, coherence, properties");
  cmd->callback([&g, suite] {
    const auto results = cavatten::acceptance::run_suite(*suite);
    const bool ok = cavatten::acceptance::all_passed(results);
    if (g.json_mode) {
      json arr = json::array();
      for (const auto& r : results)
        arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      std::cout << json{{"criteria", arr}, {"all_pass", ok}}.dump(2) << "\n";
    } else {
      for (const auto& r : results) {
        std::printf("[%2d] %s %s: %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
      }
      std::printf("%s\n", ok ? "all criteria passed" : "ACCEPTANCE FAILURE");
    }
    if (!ok) g.exit_code = 3;
  });
}

}  // namespace

int main(int argc, char** argv) {
  Global g;
  for (int i = 0; i < argc; ++i) g.command_line += std::string(i ? " " : "") + argv[i];

  CLI::App app{"cavatten: thermal-photon noise budgets, cavity-attenuator design estimates, "
               "and qubit coherence analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_flag("--json", g.json_mode, "Emit JSON instead of text");
  g.seed_opt = app.add_option("--seed", g.seed_value,
                              "Master seed for stochastic commands (env: CAVATTEN_SEED)");
  g.out_opt = app.add_option("--out", g.out_value, "Output directory for file-writing commands");

  add_thermal(app, g);
  add_design(app, g);
  add_hybridize(app, g);
  add_simulate(app, g);
  add_fit(app, g);
  add_report(app, g);
  add_reproduce(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cavatten::analysis::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g.exit_code;
}
