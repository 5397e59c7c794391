from pathlib import Path

import numpy as np
import pytest

import varsel

DATA = Path(__file__).resolve().parents[2] / "data"


def test_parameter_counts_and_bic():
    assert varsel.n_params("EEV", 5, 4) == 68
    assert varsel.n_params("VEI", 12, 3) == 52
    assert varsel.bic(-1241.006, 68, 200) == pytest.approx(-2842.298, abs=0.01)


def test_metrics():
    a = [0, 0, 1, 1, 2, 2]
    assert varsel.ari(a, a) == 1.0
    assert varsel.cer(a, [2, 2, 0, 0, 1, 1]) == 0.0
    assert varsel.class_error(a, [0, 0, 1, 1, 1, 2]) == pytest.approx(1 / 6)
    assert varsel.vser([0, 1], [0, 1], 10) == 0.0


def test_fit_crabs():
    x, names = varsel.read_csv(str(DATA / "crabs.csv"))
    assert names == ["FL", "RW", "CL", "CW", "BD"]
    res = varsel.fit(x, G=[1, 2, 3, 4, 5])
    assert res["model"] == "EEV"
    assert res["G"] == 4
    assert res["bic"] == pytest.approx(-2842.298, abs=0.5)
    assert np.all(np.diff(res["loglik_trace"]) >= -1e-8)


def test_select_crabs():
    x, names = varsel.read_csv(str(DATA / "crabs.csv"))
    res = varsel.select(x, names=names, G=[1, 2, 3, 4, 5])
    assert res["subset_names"] == ["CW", "RW", "FL", "BD"]
    assert res["report"].endswith("Selected subset: CW, RW, FL, BD\n")
    assert res["final_fit"]["G"] == 4
    assert len(res["trace"]) == 8


def test_generate_and_headlong():
    x, names, labels, truth = varsel.generate("twovar10", 300, seed=4)
    assert x.shape == (300, 10)
    res = varsel.select(x, G=[1, 2, 3, 4], search="headlong")
    assert sorted(res["subset"]) == sorted(truth)


def test_validation_errors():
    x, _, _, _ = varsel.generate("twovar5", 50, seed=1)
    with pytest.raises(ValueError):
        varsel.select(x, search="headlong", direction="backward")
    with pytest.raises(ValueError):
        varsel.n_params("XYZ", 2, 2)


def test_amdahl():
    P = list(range(1, 11))
    s = [1.0 / (0.13 + 0.87 / p) for p in P]
    f, s_max = varsel.amdahl_fit(P, s)
    assert f == pytest.approx(0.13, abs=1e-3)
    assert s_max == pytest.approx(1 / 0.13, rel=1e-2)
