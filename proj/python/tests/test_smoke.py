import math

import numpy as np
import pytest

import pleader


def test_fbm_report():
    x = pleader.synthesize_process("fbm", length=1 << 14, hurst=0.7, seed=3)
    assert x.shape == (1 << 14,)
    rep = pleader.analyze(x, p=[0.5, math.inf])
    assert rep["format"] == "pleader-report"
    assert rep["index_convention"] == pleader.INDEX_CONVENTION
    c1 = rep["per_p"][0]["corrected_estimates"]["log_cumulants"][0]["value"]
    assert abs(c1 - 0.7) < 0.1
    pinf = rep["per_p"][1]
    for key in ("structure_functions", "cumulants"):
        assert pinf["corrected"][key] == pinf["uncorrected"][key]


def test_no_correction_drops_fields():
    x = pleader.synthesize_process("fbm", length=4096, seed=1)
    rep = pleader.analyze(x, p=[1.0], correction=False)
    assert "corrected" not in rep["per_p"][0]


def test_deterministic_synthesis():
    a = pleader.synthesize_process("mrw", length=2048, hurst=0.84, lam=0.28, seed=5, realization=2)
    b = pleader.synthesize_process("mrw", length=2048, hurst=0.84, lam=0.28, seed=5, realization=2)
    np.testing.assert_array_equal(a, b)


def test_dbwc_oracle_matches_pyramid_analysis():
    w = [0.3, 0.5, 0.7, 0.9]
    pyr = pleader.synthesize_cascade({"cascade": {"kind": "dbwc2d", "weights": w, "depth": 6,
                                                  "anisotropy": [1, 2, 0.5]}})
    rep = pleader.analyze_pyramid(pyr, p=[1.0], q=[2.0], mode="restricted")
    sf = rep["per_p"][0]["uncorrected"]["structure_functions"]
    values = sf["values"][0]
    for j in range(1, 7):
        oracle = pleader.oracle_dbwc_sf(w, [1, 2, 0.5], 1.0, 2.0, j, 6)
        assert values[j - 1] == pytest.approx(oracle, rel=1e-10)


def test_helpers():
    assert pleader.gamma_correction(1, 0.5) == pytest.approx(1.0)
    assert pleader.gamma_correction(3, 0.0) == pytest.approx(3.0)
    assert pleader.dbwc_eta([0.5] * 4, 2, 1.5) == pytest.approx(1.5)
    q = np.arange(-5, 5.25, 0.25)
    zeta = 0.8 * q - 0.04 * q * q
    assert pleader.legendre_at(q.tolist(), zeta.tolist(), 1, 0.8) == pytest.approx(1.0, abs=1e-3)
    rs = pleader.resample_rr([1.0] * 30, 4.0)
    np.testing.assert_allclose(rs, 1.0, atol=1e-12)


def test_errors_raise():
    with pytest.raises(pleader.PleaderError):
        pleader.synthesize_process("fbm", length=1000)
    with pytest.raises(ValueError):
        pleader.resample_rr([1.0, -0.5, 1.0])
    with pytest.raises(pleader.PleaderError):
        pleader.analyze(np.zeros((2, 2, 2)))


def test_benchmark():
    summary, table = pleader.run_benchmark({"preset": "dbwc2d", "cascade": {"depth": 5}, "p": [1.0],
                                            "threads": 1})
    assert summary["format"] == "pleader-bench"
    assert summary["summaries"][0]["se_ratio_exact"]
    assert table.startswith("estimator,corrected,p,p0,j1,j2,n,mean,bias,std,rmse")
