import math

import pytest

import dfsphoton as dp


def test_params_and_detuning():
    p = dp.PhysicalParams.from_purcell(10, 1e4)
    assert p.n_atoms == 10
    assert p.purcell == pytest.approx(1e4)
    assert dp.optimal_detuning(p) == pytest.approx(0.01)
    with pytest.raises(ValueError):
        dp.PhysicalParams(0, 0.01)


def test_simulate_single_photon():
    p = dp.PhysicalParams.from_purcell(10, 1e4)
    r = dp.simulate_target(dp.TargetSuperposition.fock(1), p)
    assert 0.0 < r["infidelity"] < 0.05
    assert r["segments"] == 2
    assert all(b <= a + 1e-12 for a, b in zip(r["norm_history"], r["norm_history"][1:]))


def test_plan_has_alternating_segments():
    seq = dp.plan_superposition(dp.TargetSuperposition.phi(2), 10, omega_r=2e-3, delta_e=0.1)
    kinds = [s["kind"] for s in seq["segments"]]
    assert len(kinds) == 4
    assert kinds[0] != kinds[1]


def test_photonics():
    overlap, loss = dp.overlap_hp_closed(2, 10)
    assert loss == pytest.approx(1.386e-3, abs=1e-6)
    assert overlap + loss == pytest.approx(1.0)
    assert dp.overlap_hp_numeric(2, 10).real == pytest.approx(overlap, abs=1e-4)
    a = dp.amplitude_exact([0.0], 10)
    assert abs(a - dp.amplitude_hp([0.0], 10)) < 1e-15
    assert abs(a) == pytest.approx(math.sqrt(10) / 5)


def test_analytics_and_feasibility():
    p = dp.PhysicalParams.from_purcell(10, 1e4)
    b = dp.error_rates(1, 10, 2e-4, 0.01, p)
    assert b["model"] == "deterministic"
    assert b["per_step_infidelity"] > 0
    t = dp.total_infidelities(2, p)
    assert 0 < t["combined_fidelity"] < 1
    f = dp.feasibility()
    assert f["purcell"]["purcell_ratio"] == pytest.approx(47.7, abs=0.5)
    assert f["propagation"]["l_prop_over_lambda_a"] == pytest.approx(15915, abs=1)
