import json
import math

import numpy as np
import pytest

import twistspdc as ts


def default_pump(beta, t, sign=1):
    setup = ts.Setup()
    return setup.pump(ts.NormalizedPoint(beta, t, sign)), setup.phase_matching()


def test_coherent_benchmark():
    pump, pm = default_pump(1.0, 0.0)
    eigs = ts.closed_form_eigs(pump, pm)
    assert eigs.lambda_minus == pytest.approx(0.23937, abs=1e-4)
    assert eigs.lambda_plus == pytest.approx(2.4270, abs=1e-3)
    spec = ts.pt_spectrum(pump, pm)
    assert spec[0] == pytest.approx(eigs.lambda_minus, rel=1e-6)
    assert spec[3] == pytest.approx(eigs.lambda_plus, rel=1e-6)


def test_report_dict_keys():
    report = ts.evaluate_point(ts.Setup(), ts.NormalizedPoint(0.1, 1.0))
    d = report.to_dict()
    assert list(d)[:3] == ["beta", "t_norm", "u_inv_m"]
    assert list(d)[-4:] == ["pump_oam", "photon_oam", "a_plus", "a_minus"]
    assert d["npt_entangled"] is True
    assert d["mancini_violated"] is False
    assert report.photon_oam == pytest.approx(report.pump_oam / 2)


def test_gaussian_toolbox():
    omega = ts.symplectic_form(2)
    assert omega.shape == (4, 4)
    vac = 0.5 * np.eye(4)
    assert ts.symplectic_spectrum(vac) == pytest.approx([0.5, 0.5])
    assert ts.purity(vac) == pytest.approx(1.0)
    assert ts.is_physical(vac)
    assert not ts.is_physical(0.4 * np.eye(4))
    s, nu = ts.williamson(np.diag([1.0, 1.0, 2.0, 2.0]))
    assert np.allclose(s @ omega @ s.T, omega)
    with pytest.raises(ts.Error):
        ts.symplectic_spectrum(np.eye(3))
    with pytest.raises(ValueError):
        ts.purity(-np.eye(2))


def test_pump_and_mixture():
    pump, _ = default_pump(0.5, 0.5)
    v = ts.pump_cm(pump)
    assert ts.purity(v) == pytest.approx(0.25, rel=1e-9)
    model = ts.mixture_model(pump)
    scale = np.sqrt(np.outer(np.diag(v), np.diag(v)))
    assert np.max(np.abs(model.component_cm + model.ensemble_cov - v) / scale) < 1e-9
    samples = ts.sample_component_means(model, 1000, 3)
    assert samples.shape == (1000, 4)
    assert np.array_equal(samples, ts.sample_component_means(model, 1000, 3))
    with pytest.raises(ts.InfeasibleWaist):
        ts.mixture_model(default_pump(0.05, 1.0)[0], "symmetric-waist", 50e-6)
    bad = ts.TgsmParams.from_delta(50e-6, float("inf"), pump.k)
    bad.u = 1.0
    with pytest.raises(ts.Error):
        ts.pump_cm(bad)


def test_sweep_is_deterministic():
    a = ts.sweep_csv(ts.Setup(), (0.05, 1.0, 10), (0.0, 1.0, 3))
    b = ts.sweep_csv(ts.Setup(), (0.05, 1.0, 10), (0.0, 1.0, 3), threads=2)
    assert a == b
    lines = a.splitlines()
    assert lines[0].startswith("beta,t_norm,u_inv_m")
    assert len(lines) == 31
    rows = ts.sweep(ts.Setup(), (0.05, 1.0, 10), (0.0, 1.0, 3))
    assert len(rows) == 30
    assert all(not r["mancini_violated"] or r["npt_entangled"] for r in rows)
    assert math.isinf(rows[-3]["delta_m"])


def test_verify_and_decompose():
    passed, table = ts.verify(trials=20, seed=1)
    assert passed, table
    passed, table = ts.verify(trials=20, seed=1, tolerance=1e-15)
    assert not passed
    d = ts.decompose(ts.Setup(), ts.NormalizedPoint(0.5, 0.5), samples=20000, seed=2)
    assert d["feasible"] and d["z_within_5"]
    json.dumps(d)
    d = ts.decompose(ts.Setup(), ts.NormalizedPoint(0.05, 1.0), samples=1000, mode="symmetric-waist")
    assert d["feasible"] is False
