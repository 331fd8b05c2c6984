// Python bindings for the cavatten core: thermal photon budgets, two-mode
// hybridization, dephasing/coherence algebra, attenuator design estimates,
// synthetic experiments, and the fitting/extraction pipeline.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cavatten/acceptance.hpp"
#include "cavatten/analysis.hpp"
#include "cavatten/constants.hpp"
#include "cavatten/dephasing.hpp"
#include "cavatten/design.hpp"
#include "cavatten/experiment.hpp"
#include "cavatten/io.hpp"
#include "cavatten/modes.hpp"
#include "cavatten/rng.hpp"
#include "cavatten/thermal.hpp"

namespace py = pybind11;
using namespace cavatten;

namespace {

nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_cavatten, m) {
  m.doc() = "Thermal-photon noise budgets, cavity-attenuator design estimates, and "
            "superconducting-qubit coherence analysis";
  m.attr("__version__") = CAVATTEN_VERSION;

  // ------------------------------------------------------------ constants --
  m.attr("PLANCK_J_S") = constants::planck_j_s;
  m.attr("BOLTZMANN_J_PER_K") = constants::boltzmann_j_per_k;
  m.attr("VACUUM_PERMEABILITY_H_PER_M") = constants::vacuum_permeability_h_per_m;
  m.attr("SPEED_OF_LIGHT_M_PER_S") = constants::speed_of_light_m_per_s;
  m.attr("DISPERSIVE_VALIDITY_LIMIT") = dephasing::dispersive_validity_limit;

  py::register_exception<analysis::NonConvergenceError>(m, "NonConvergenceError");

  // -------------------------------------------------------------- thermal --
  py::class_<thermal::BathPort>(m, "BathPort")
      .def(py::init<>())
      .def(py::init([](std::string label, double rate_hz, double occupation) {
             return thermal::BathPort{std::move(label), rate_hz, occupation};
           }),
           py::arg("label"), py::arg("rate_hz"), py::arg("occupation"))
      .def_readwrite("label", &thermal::BathPort::label)
      .def_readwrite("rate_hz", &thermal::BathPort::rate_hz)
      .def_readwrite("occupation", &thermal::BathPort::occupation);

  py::class_<thermal::ChainElement>(m, "ChainElement")
      .def(py::init<>())
      .def(py::init([](double attenuation_db, double temperature_k) {
             return thermal::ChainElement{attenuation_db, temperature_k};
           }),
           py::arg("attenuation_db"), py::arg("temperature_k"))
      .def_readwrite("attenuation_db", &thermal::ChainElement::attenuation_db)
      .def_readwrite("temperature_k", &thermal::ChainElement::temperature_k);

  py::class_<thermal::ThermalEnvironment>(m, "ThermalEnvironment")
      .def(py::init<>())
      .def_readwrite("ports", &thermal::ThermalEnvironment::ports)
      .def_readwrite("chain", &thermal::ThermalEnvironment::chain)
      .def_readwrite("source_temperature_k", &thermal::ThermalEnvironment::source_temperature_k)
      .def("validate", &thermal::ThermalEnvironment::validate);

  m.def("bose_einstein_occupation", &thermal::bose_einstein_occupation, py::arg("f_hz"),
        py::arg("t_k"), "Mean photon number of a mode at frequency f in a bath at temperature T");
  m.def("effective_temperature", &thermal::effective_temperature, py::arg("f_hz"),
        py::arg("occupation"), "Exact inverse of bose_einstein_occupation");
  m.def(
      "mixed_bath_occupation",
      [](const std::vector<thermal::BathPort>& ports) {
        return thermal::mixed_bath_occupation(ports);
      },
      py::arg("ports"), "Rate-weighted mean occupation of several baths");
  m.def(
      "propagate_chain",
      [](double n_in, const std::vector<thermal::ChainElement>& chain, double f_hz) {
        return thermal::propagate_chain(n_in, chain, f_hz);
      },
      py::arg("n_in"), py::arg("chain"), py::arg("f_hz"),
      "Photon flux after each chain element transmits and re-emits");
  m.def("attenuation_chain_occupation", &thermal::attenuation_chain_occupation, py::arg("env"),
        py::arg("f_hz"), "Occupation arriving at the device input from the source");

  // ---------------------------------------------------------------- modes --
  py::class_<modes::ResonatorSpec>(m, "ResonatorSpec")
      .def(py::init<>())
      .def_readwrite("f_hz", &modes::ResonatorSpec::f_hz)
      .def_readwrite("kappa_i_hz", &modes::ResonatorSpec::kappa_i_hz)
      .def_readwrite("kappa_c1_hz", &modes::ResonatorSpec::kappa_c1_hz)
      .def_readwrite("kappa_c2_hz", &modes::ResonatorSpec::kappa_c2_hz)
      .def("kappa_total_hz", &modes::ResonatorSpec::kappa_total_hz)
      .def("q_internal", &modes::ResonatorSpec::q_internal)
      .def("validate", &modes::ResonatorSpec::validate);

  py::class_<modes::Participation>(m, "Participation")
      .def_readonly("label", &modes::Participation::label)
      .def_readonly("fraction", &modes::Participation::fraction);

  py::class_<modes::HybridizedMode>(m, "HybridizedMode")
      .def_readonly("f_hz", &modes::HybridizedMode::f_hz)
      .def_readonly("participations", &modes::HybridizedMode::participations)
      .def_readonly("kappa_i_eff_hz", &modes::HybridizedMode::kappa_i_eff_hz)
      .def_readonly("kappa_c_eff_hz", &modes::HybridizedMode::kappa_c_eff_hz);

  py::class_<modes::HybridizedPair>(m, "HybridizedPair")
      .def_readonly("lower", &modes::HybridizedPair::lower)
      .def_readonly("upper", &modes::HybridizedPair::upper);

  py::class_<modes::BareModes>(m, "BareModes")
      .def_readonly("f_a_hz", &modes::BareModes::f_a_hz)
      .def_readonly("f_b_hz", &modes::BareModes::f_b_hz)
      .def_readonly("g_hz", &modes::BareModes::g_hz);

  py::class_<modes::Transmission>(m, "Transmission")
      .def_readonly("power_ratio", &modes::Transmission::power_ratio)
      .def_readonly("insertion_loss_db", &modes::Transmission::insertion_loss_db);

  m.def("hybridize", &modes::hybridize, py::arg("f_a_hz"), py::arg("f_b_hz"), py::arg("g_hz"),
        py::arg("label_a") = "a", py::arg("label_b") = "b",
        "Dressed modes of two coupled resonators");
  m.def("infer_coupling", &modes::infer_coupling, py::arg("f_minus_hz"), py::arg("f_plus_hz"),
        py::arg("p_lower_in_a"), "Bare modes from dressed frequencies and a participation");
  m.def(
      "effective_rate",
      [](const modes::HybridizedMode& mode,
         const std::vector<std::pair<std::string, double>>& bare_rates_hz) {
        return modes::effective_rate(mode, bare_rates_hz);
      },
      py::arg("mode"), py::arg("bare_rates_hz"), "Participation-weighted rate of a dressed mode");
  m.def(
      "readout_mode",
      [](const modes::HybridizedPair& pair, const std::string& cavity_label) {
        return modes::readout_mode(pair, cavity_label);
      },
      py::arg("pair"), py::arg("cavity_label"),
      "The dressed mode participating more in the named cavity");
  m.def("two_port_transmission", &modes::two_port_transmission, py::arg("kappa_i_hz"),
        py::arg("kappa_c1_hz"), py::arg("kappa_c2_hz"),
        "On-resonance power transmission of a two-port resonator");
  m.def("insertion_loss_to_coupling", &modes::insertion_loss_to_coupling,
        py::arg("insertion_loss_db"), py::arg("kappa_i_hz"),
        "Symmetric coupling rate that yields the stated insertion loss");
  m.def("reflection_response", &modes::reflection_response, py::arg("spec"),
        py::arg("detuning_hz"), "One-port reflection S11 at a detuning");

  // ------------------------------------------------------------ dephasing --
  py::class_<dephasing::TransmonSpec>(m, "TransmonSpec")
      .def(py::init<>())
      .def_readwrite("f_ge_hz", &dephasing::TransmonSpec::f_ge_hz)
      .def_readwrite("anharmonicity_hz", &dephasing::TransmonSpec::anharmonicity_hz)
      .def_readwrite("chi_hz", &dephasing::TransmonSpec::chi_hz)
      .def_readwrite("gamma1_per_s", &dephasing::TransmonSpec::gamma1_per_s)
      .def("validate", &dephasing::TransmonSpec::validate);

  py::class_<dephasing::Measured>(m, "Measured")
      .def(py::init<>())
      .def(py::init([](double value, double err) {
             return dephasing::Measured{value, err};
           }),
           py::arg("value"), py::arg("err") = 0.0)
      .def_readwrite("value", &dephasing::Measured::value)
      .def_readwrite("err", &dephasing::Measured::err)
      .def("__repr__", [](const dephasing::Measured& v) {
        return "Measured(value=" + std::to_string(v.value) + ", err=" + std::to_string(v.err) +
               ")";
      });

  py::class_<dephasing::CoherenceSet>(m, "CoherenceSet")
      .def(py::init<>())
      .def_readwrite("t1_s", &dephasing::CoherenceSet::t1_s)
      .def_readwrite("t2e_s", &dephasing::CoherenceSet::t2e_s)
      .def_readwrite("t2r_s", &dephasing::CoherenceSet::t2r_s)
      .def_readwrite("ratio", &dephasing::CoherenceSet::ratio)
      .def_readwrite("gamma_phi_per_s", &dephasing::CoherenceSet::gamma_phi_per_s)
      .def_readwrite("t_phi_s", &dephasing::CoherenceSet::t_phi_s)
      .def_readwrite("relaxation_limited", &dephasing::CoherenceSet::relaxation_limited)
      .def_readwrite("inconsistent", &dephasing::CoherenceSet::inconsistent);

  py::class_<dephasing::PhotonBound>(m, "PhotonBound")
      .def_readonly("nbar", &dephasing::PhotonBound::nbar)
      .def_readonly("t_eff_k", &dephasing::PhotonBound::t_eff_k)
      .def_readonly("below_sensitivity", &dephasing::PhotonBound::below_sensitivity)
      .def_readonly("coherence", &dephasing::PhotonBound::coherence);

  m.def("dephasing_slope_per_s", &dephasing::dephasing_slope_per_s, py::arg("kappa_hz"), py::arg("chi_hz"),
        "Dephasing rate per photon at fixed total linewidth and dispersive shift");
  m.def("thermal_dephasing_rate", &dephasing::thermal_dephasing_rate, py::arg("nbar"),
        py::arg("kappa_hz"), py::arg("chi_hz"), "Photon-induced pure dephasing rate in 1/s");
  m.def("pure_dephasing_from_times", &dephasing::pure_dephasing_from_times, py::arg("t1_s"),
        py::arg("t2e_s"), py::arg("t2r_s") = std::nullopt,
        "Pure-dephasing rate and flags from measured T1 and echo T2");
  m.def("photon_bound_from_coherence", &dephasing::photon_bound_from_coherence, py::arg("t1_s"),
        py::arg("t2e_s"), py::arg("kappa_hz"), py::arg("chi_hz"), py::arg("f_ro_hz"),
        "Residual photon number and effective temperature attributing all dephasing to photons");
  m.def("predict_coherence", &dephasing::predict_coherence, py::arg("t1_s"), py::arg("nbar"),
        py::arg("kappa_hz"), py::arg("chi_hz"), py::arg("gamma_extra_per_s") = 0.0,
        "Forward model for T2e given T1 and a photon population");

  // ----------------------------------------------------------------- design --
  py::class_<design::MaterialSpec>(m, "MaterialSpec")
      .def_readonly("name", &design::MaterialSpec::name)
      .def_readonly("resistivity_ohm_m", &design::MaterialSpec::resistivity_ohm_m)
      .def_readonly("reference_temperature_k", &design::MaterialSpec::reference_temperature_k)
      .def_readonly("cryo_linewidth_ratio", &design::MaterialSpec::cryo_linewidth_ratio);

  py::class_<design::AttenuatorGeometry>(m, "AttenuatorGeometry")
      .def(py::init<>())
      .def_readwrite("gap_m", &design::AttenuatorGeometry::gap_m)
      .def_readwrite("length_m", &design::AttenuatorGeometry::length_m)
      .def_readwrite("geometry_factor", &design::AttenuatorGeometry::geometry_factor)
      .def_readwrite("effective_length_correction",
                     &design::AttenuatorGeometry::effective_length_correction)
      .def("validate", &design::AttenuatorGeometry::validate);

  py::class_<design::QEstimate>(m, "QEstimate")
      .def_readonly("q_internal", &design::QEstimate::q_internal)
      .def_readonly("kappa_i_hz", &design::QEstimate::kappa_i_hz);

  py::class_<design::RequirementWindow>(m, "RequirementWindow")
      .def(py::init<>())
      .def_readwrite("center_tolerance_hz", &design::RequirementWindow::center_tolerance_hz)
      .def_readwrite("attenuation_min_db", &design::RequirementWindow::attenuation_min_db)
      .def_readwrite("attenuation_max_db", &design::RequirementWindow::attenuation_max_db)
      .def_readwrite("bandwidth_min_hz", &design::RequirementWindow::bandwidth_min_hz)
      .def_readwrite("bandwidth_max_hz", &design::RequirementWindow::bandwidth_max_hz);

  py::class_<design::RequirementReport>(m, "RequirementReport")
      .def_readonly("f_hz", &design::RequirementReport::f_hz)
      .def_readonly("target_f_hz", &design::RequirementReport::target_f_hz)
      .def_readonly("insertion_loss_db", &design::RequirementReport::insertion_loss_db)
      .def_readonly("bandwidth_hz", &design::RequirementReport::bandwidth_hz)
      .def_readonly("centered", &design::RequirementReport::centered)
      .def_readonly("attenuation_ok", &design::RequirementReport::attenuation_ok)
      .def_readonly("bandwidth_ok", &design::RequirementReport::bandwidth_ok)
      .def("all_ok", &design::RequirementReport::all_ok);

  m.def(
      "lookup_material",
      [](const std::string& name) { return design::lookup_material(name); }, py::arg("name"),
      "Built-in handbook material, or None");
  m.def("skin_depth", &design::skin_depth, py::arg("resistivity_ohm_m"), py::arg("f_hz"),
        "Classical skin depth");
  m.def("q_estimate", &design::q_estimate, py::arg("geometry"), py::arg("skin_depth_m"),
        py::arg("f_hz"), "Internal Q from the surface-to-volume picture (factor-of-3 estimate)");
  m.def("conductivity_ratio_from_linewidths", &design::conductivity_ratio_from_linewidths,
        py::arg("kappa_rt_hz"), py::arg("kappa_cold_hz"),
        "Conductivity gain on cooldown implied by a linewidth change");
  m.def("halfwave_frequency", &design::halfwave_frequency, py::arg("geometry"),
        "Fundamental half-wave frequency of the geometry");
  m.def("contracted_frequency", &design::contracted_frequency, py::arg("f_rt_hz"),
        py::arg("contraction"), "Resonant frequency after cryogenic length contraction");
  m.def(
      "check_requirements",
      [](const modes::ResonatorSpec& spec, double target_f_hz,
         std::optional<design::RequirementWindow> window) {
        return design::check_requirements(spec, target_f_hz,
                                          window.value_or(design::RequirementWindow{}));
      },
      py::arg("spec"), py::arg("target_f_hz"), py::arg("window") = py::none(),
      "Centering / attenuation / bandwidth check of an attenuator design");

  // ------------------------------------------------------------ experiment --
  py::enum_<experiment::TraceKind>(m, "TraceKind")
      .value("t1", experiment::TraceKind::t1)
      .value("ramsey", experiment::TraceKind::ramsey)
      .value("echo", experiment::TraceKind::echo);

  py::class_<experiment::TraceModel>(m, "TraceModel")
      .def(py::init<>())
      .def(py::init([](double amplitude, double baseline) {
             return experiment::TraceModel{amplitude, baseline};
           }),
           py::arg("amplitude"), py::arg("baseline"))
      .def_readwrite("amplitude", &experiment::TraceModel::amplitude)
      .def_readwrite("baseline", &experiment::TraceModel::baseline);

  py::class_<experiment::Trace>(m, "Trace")
      .def(py::init<>())
      .def_readwrite("kind", &experiment::Trace::kind)
      .def_readwrite("times_s", &experiment::Trace::times_s)
      .def_readwrite("populations", &experiment::Trace::populations)
      .def_readwrite("sigmas", &experiment::Trace::sigmas)
      .def_readwrite("shots", &experiment::Trace::shots)
      .def("validate", &experiment::Trace::validate);

  py::class_<experiment::DeviceConfig>(m, "DeviceConfig")
      .def(py::init<>())
      .def_readwrite("transmon", &experiment::DeviceConfig::transmon)
      .def_readwrite("readout", &experiment::DeviceConfig::readout)
      .def_readwrite("environment", &experiment::DeviceConfig::environment)
      .def_readwrite("gamma_extra_per_s", &experiment::DeviceConfig::gamma_extra_per_s)
      .def_readwrite("gamma_slow_per_s", &experiment::DeviceConfig::gamma_slow_per_s)
      .def_readwrite("t1_jitter", &experiment::DeviceConfig::t1_jitter)
      .def("validate", &experiment::DeviceConfig::validate)
      .def("thermal_occupation", &experiment::DeviceConfig::thermal_occupation);

  py::enum_<experiment::SweepAxis>(m, "SweepAxis")
      .value("n_add", experiment::SweepAxis::n_add)
      .value("temperature", experiment::SweepAxis::temperature);

  py::class_<experiment::SweepPoint>(m, "SweepPoint")
      .def(py::init<>())
      .def_readwrite("axis_value", &experiment::SweepPoint::axis_value)
      .def_readwrite("coherence", &experiment::SweepPoint::coherence);

  py::class_<experiment::SweepDataset>(m, "SweepDataset")
      .def(py::init<>())
      .def_readwrite("axis", &experiment::SweepDataset::axis)
      .def_readwrite("points", &experiment::SweepDataset::points)
      .def_readwrite("seed", &experiment::SweepDataset::seed)
      .def_readwrite("config", &experiment::SweepDataset::config)
      .def_readwrite("warnings", &experiment::SweepDataset::warnings);

  m.def("default_trace_model", &experiment::default_trace_model, py::arg("kind"));
  m.def(
      "simulate_trace",
      [](experiment::TraceKind kind, double rate_per_s, const std::vector<double>& times_s,
         std::int64_t shots, std::uint64_t seed, std::optional<experiment::TraceModel> model,
         bool exact) {
        return experiment::simulate_trace(kind, rate_per_s, times_s, shots, seed, model, exact);
      },
      py::arg("kind"), py::arg("rate_per_s"), py::arg("times_s"), py::arg("shots") = 1000,
      py::arg("seed") = 0, py::arg("model") = py::none(), py::arg("exact") = false,
      "Binomially sampled decay trace (deterministic per seed)");
  m.def(
      "simulate_noise_injection_sweep",
      [](const experiment::DeviceConfig& cfg, const std::vector<double>& n_add, int repeats,
         std::uint64_t seed) {
        return experiment::simulate_noise_injection_sweep(cfg, n_add, repeats, seed);
      },
      py::arg("config"), py::arg("n_add"), py::arg("repeats"), py::arg("seed"),
      "Coherence vs injected photon number");
  m.def(
      "simulate_temperature_sweep",
      [](const experiment::DeviceConfig& cfg, const std::vector<double>& temperatures_k,
         std::uint64_t seed, int repeats) {
        return experiment::simulate_temperature_sweep(cfg, temperatures_k, seed, repeats);
      },
      py::arg("config"), py::arg("temperatures_k"), py::arg("seed"), py::arg("repeats") = 10,
      "Coherence vs stage temperature");

  // -------------------------------------------------------------- analysis --
  py::class_<analysis::FitResult>(m, "FitResult")
      .def_readonly("estimate", &analysis::FitResult::estimate)
      .def_readonly("ci_low", &analysis::FitResult::ci_low)
      .def_readonly("ci_high", &analysis::FitResult::ci_high)
      .def_readonly("coverage", &analysis::FitResult::coverage)
      .def_readonly("residual_norm", &analysis::FitResult::residual_norm)
      .def_readonly("n_bootstrap", &analysis::FitResult::n_bootstrap)
      .def_readonly("seed", &analysis::FitResult::seed);

  py::class_<analysis::ExponentialFit>(m, "ExponentialFit")
      .def_readonly("rate_per_s", &analysis::ExponentialFit::rate_per_s)
      .def_readonly("amplitude", &analysis::ExponentialFit::amplitude)
      .def_readonly("baseline", &analysis::ExponentialFit::baseline)
      .def_readonly("converged", &analysis::ExponentialFit::converged)
      .def_readonly("iterations", &analysis::ExponentialFit::iterations)
      .def_readonly("method", &analysis::ExponentialFit::method)
      .def_readonly("chi2", &analysis::ExponentialFit::chi2);

  py::class_<analysis::NthExtraction>(m, "NthExtraction")
      .def_readonly("n_th", &analysis::NthExtraction::n_th)
      .def_readonly("slope_per_s", &analysis::NthExtraction::slope_per_s)
      .def_readonly("analytic_slope_per_s", &analysis::NthExtraction::analytic_slope_per_s)
      .def_readonly("intercept_per_s", &analysis::NthExtraction::intercept_per_s)
      .def_readonly("slope_fixed", &analysis::NthExtraction::slope_fixed)
      .def_readonly("indeterminate", &analysis::NthExtraction::indeterminate)
      .def_readonly("n_points", &analysis::NthExtraction::n_points)
      .def_readonly("bootstrap_kept", &analysis::NthExtraction::bootstrap_kept);

  py::class_<analysis::ReportRow>(m, "ReportRow")
      .def(py::init<>())
      .def_readwrite("label", &analysis::ReportRow::label)
      .def_readwrite("config", &analysis::ReportRow::config)
      .def_readwrite("coherence", &analysis::ReportRow::coherence);

  py::class_<analysis::CoherenceReportRow>(m, "CoherenceReportRow")
      .def_readonly("label", &analysis::CoherenceReportRow::label)
      .def_readonly("f_ro_ghz", &analysis::CoherenceReportRow::f_ro_ghz)
      .def_readonly("kappa_i_mhz", &analysis::CoherenceReportRow::kappa_i_mhz)
      .def_readonly("kappa_c_mhz", &analysis::CoherenceReportRow::kappa_c_mhz)
      .def_readonly("chi_mhz", &analysis::CoherenceReportRow::chi_mhz)
      .def_readonly("t1_us", &analysis::CoherenceReportRow::t1_us)
      .def_readonly("t2e_us", &analysis::CoherenceReportRow::t2e_us)
      .def_readonly("ratio", &analysis::CoherenceReportRow::ratio)
      .def_readonly("ratio_err", &analysis::CoherenceReportRow::ratio_err)
      .def_readonly("t_phi_us", &analysis::CoherenceReportRow::t_phi_us)
      .def_readonly("nbar_bound", &analysis::CoherenceReportRow::nbar_bound)
      .def_readonly("t_eff_mk", &analysis::CoherenceReportRow::t_eff_mk)
      .def_readonly("below_sensitivity", &analysis::CoherenceReportRow::below_sensitivity);

  py::class_<analysis::CoherenceReport>(m, "CoherenceReport")
      .def_readonly("rows", &analysis::CoherenceReport::rows)
      .def_readonly("text", &analysis::CoherenceReport::text)
      .def_readonly("csv", &analysis::CoherenceReport::csv);

  m.def("fit_exponential", &analysis::fit_exponential, py::arg("trace"),
        "Weighted least-squares fit of baseline + amplitude * exp(-rate t)");
  m.def(
      "extract_nth",
      [](const std::vector<experiment::SweepPoint>& points, double kappa_hz, double chi_hz,
         bool fix_slope, double gamma_offset_per_s, int n_bootstrap, double coverage,
         std::uint64_t seed) {
        analysis::ExtractionOptions opts;
        opts.fix_slope = fix_slope;
        opts.gamma_offset_per_s = gamma_offset_per_s;
        opts.n_bootstrap = n_bootstrap;
        opts.coverage = coverage;
        opts.seed = seed;
        return analysis::extract_nth(points, kappa_hz, chi_hz, opts);
      },
      py::arg("points"), py::arg("kappa_hz"), py::arg("chi_hz"), py::arg("fix_slope") = false,
      py::arg("gamma_offset_per_s") = 0.0, py::arg("n_bootstrap") = 1000,
      py::arg("coverage") = 0.95, py::arg("seed") = 0,
      "Residual photon number from a noise-injection sweep");
  m.def(
      "coherence_report",
      [](const std::vector<analysis::ReportRow>& rows) { return analysis::coherence_report(rows); },
      py::arg("rows"), "Per-device coherence summary with photon/temperature bounds");

  // -------------------------------------------------------------------- io --
  m.def(
      "device_config_from_json",
      [](const std::string& text) { return io::device_config_from_json(parse_json(text)); },
      py::arg("text"), "Parse a DeviceConfig from strict JSON text");
  m.def(
      "device_config_to_json",
      [](const experiment::DeviceConfig& cfg) { return io::device_config_to_json(cfg).dump(2); },
      py::arg("config"), "Serialize a DeviceConfig to JSON text");
  m.def("sweep_to_csv", &io::sweep_to_csv, py::arg("dataset"));
  m.def("sweep_from_csv", &io::sweep_from_csv, py::arg("csv_text"));
  m.def(
      "sweep_sidecar_json",
      [](const experiment::SweepDataset& ds) { return io::sweep_sidecar_json(ds).dump(2); },
      py::arg("dataset"), "Provenance sidecar (axis, seed, config, warnings) as JSON text");
  m.def(
      "apply_sweep_sidecar",
      [](experiment::SweepDataset& ds, const std::string& text) {
        io::apply_sweep_sidecar(ds, parse_json(text));
      },
      py::arg("dataset"), py::arg("sidecar_text"),
      "Restore seed/config/warnings from a sidecar onto a parsed dataset");
  m.def("trace_to_csv", &io::trace_to_csv, py::arg("trace"));
  m.def("trace_from_csv", &io::trace_from_csv, py::arg("csv_text"));

  // ------------------------------------------------------------ acceptance --
  py::class_<acceptance::CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &acceptance::CriterionResult::id)
      .def_readonly("name", &acceptance::CriterionResult::name)
      .def_readonly("passed", &acceptance::CriterionResult::pass)
      .def_readonly("detail", &acceptance::CriterionResult::detail);

  m.def("run_suite", &acceptance::run_suite, py::arg("suite") = "all",
        "Run the acceptance criteria and return per-criterion results");
  m.def(
      "all_passed",
      [](const std::vector<acceptance::CriterionResult>& results) {
        return acceptance::all_passed(results);
      },
      py::arg("results"));

  // ------------------------------------------------------------------- rng --
  m.def("child_seed", &rng::child_seed, py::arg("master"), py::arg("stream"), py::arg("index"),
        "Deterministic per-work-unit seed derivation");
}
