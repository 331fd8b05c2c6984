"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import cavatten as cv

F_RO = 7.573e9
CHI = 1.2e6
KAPPA_TOTAL = 13.3e6

CONFIG_JSON = """
{
  "transmon": {"f_ge_ghz": 4.75, "alpha_ghz": 0.25, "chi_mhz": 1.2, "t1_us": 100.0},
  "readout": {"f_ghz": 7.573, "kappa_i_mhz": 11.4, "kappa_c1_mhz": 1.9},
  "environment": {
    "ports": [
      {"label": "internal", "rate_mhz": 11.4, "occupation": 0.0},
      {"label": "input", "rate_mhz": 1.9, "occupation": 2.8e-3}
    ]
  },
  "gamma_extra_per_s": 0.0,
  "gamma_slow_per_s": 0.0,
  "t1_jitter": 0.0
}
"""


def test_occupation_and_temperature_round_trip():
    nbar = cv.bose_einstein_occupation(F_RO, 65.776811774e-3)
    assert nbar == pytest.approx(4.0e-3, rel=1e-6)
    t_back = cv.effective_temperature(F_RO, nbar)
    assert t_back == pytest.approx(65.776811774e-3, rel=1e-12)
    # deep cold: occupation underflows to exactly zero, never negative
    assert cv.bose_einstein_occupation(F_RO, 1e-6) == 0.0


def test_dephasing_slope_peaks_at_kappa_equal_chi():
    peak = cv.dephasing_slope_per_s(CHI, CHI)
    assert peak == pytest.approx(math.pi * CHI, rel=1e-12)
    for kappa in [0.1e6, 0.5e6, 2e6, 10e6, 50e6]:
        assert cv.dephasing_slope_per_s(kappa, CHI) <= peak * (1 + 1e-12)


def test_config_json_round_trip():
    cfg = cv.device_config_from_json(CONFIG_JSON)
    assert cfg.thermal_occupation() == pytest.approx(4.0e-4, rel=1e-12)
    back = cv.device_config_from_json(cv.device_config_to_json(cfg))
    assert back.thermal_occupation() == cfg.thermal_occupation()
    assert back.readout.kappa_total_hz() == pytest.approx(KAPPA_TOTAL, rel=1e-12)
    with pytest.raises((ValueError, RuntimeError)):
        cv.device_config_from_json('{"transmon": 3}')


def test_injection_sweep_recovers_residual_occupation():
    cfg = cv.device_config_from_json(CONFIG_JSON)
    sweep = cv.simulate_noise_injection_sweep(cfg, [0.0, 1e-3, 2e-3, 4e-3], repeats=5, seed=3)
    assert sweep.seed == 3
    extraction = cv.extract_nth(sweep.points, KAPPA_TOTAL, CHI, n_bootstrap=0)
    # zero-jitter simulation is the exact forward model, so recovery is sharp
    assert not extraction.indeterminate
    assert extraction.n_th.estimate == pytest.approx(4.0e-4, rel=1e-6)
    assert extraction.slope_per_s.estimate == pytest.approx(extraction.analytic_slope_per_s, rel=1e-6)


def test_sweep_csv_round_trip():
    cfg = cv.device_config_from_json(CONFIG_JSON)
    sweep = cv.simulate_noise_injection_sweep(cfg, [0.0, 2e-3], repeats=3, seed=9)
    parsed = cv.sweep_from_csv(cv.sweep_to_csv(sweep))
    cv.apply_sweep_sidecar(parsed, cv.sweep_sidecar_json(sweep))
    assert parsed.seed == 9
    assert [p.axis_value for p in parsed.points] == [p.axis_value for p in sweep.points]


def test_fit_exponential_on_exact_trace():
    times = [i * 16e-6 for i in range(25)]
    trace = cv.simulate_trace(cv.TraceKind.t1, 1e4, times, shots=500, exact=True)
    fit = cv.fit_exponential(trace)
    assert fit.converged
    assert fit.rate_per_s.estimate == pytest.approx(1e4, rel=1e-6)
    assert fit.amplitude.estimate == pytest.approx(1.0, rel=1e-6)


def test_predict_coherence_matches_rate_algebra():
    pred = cv.predict_coherence(100e-6, 4.0e-4, KAPPA_TOTAL, CHI)
    gamma_phi = cv.thermal_dephasing_rate(4.0e-4, KAPPA_TOTAL, CHI)
    assert 1.0 / pred.t2e_s.value == pytest.approx(1.0 / (2 * 100e-6) + gamma_phi, rel=1e-12)


def test_hybridize_infer_coupling_round_trip():
    pair = cv.hybridize(7.5e9, 7.6e9, 25e6)
    p_a = next(p.fraction for p in pair.lower.participations if p.label == "a")
    bare = cv.infer_coupling(pair.lower.f_hz, pair.upper.f_hz, p_a)
    assert bare.g_hz == pytest.approx(25e6, rel=1e-9)
    assert bare.f_a_hz == pytest.approx(7.5e9, rel=1e-9)


def test_design_requirement_check():
    spec = cv.ResonatorSpec()
    spec.f_hz = 7.66e9
    spec.kappa_i_hz = 30e6
    spec.kappa_c1_hz = 3e6
    spec.kappa_c2_hz = 3e6
    report = cv.check_requirements(spec, 7.66e9)
    assert report.centered and report.attenuation_ok and report.bandwidth_ok
    assert report.all_ok()


def test_acceptance_suite_runs():
    results = cv.run_suite("dephasing")
    assert results and all(r.passed for r in results)
