import json
import math

import numpy as np
import pytest

import risbeam


def test_regime_distances_28ghz():
    d = math.sqrt(2) * 0.5
    d_qnf, d_ff = risbeam.regime_distances(d, 28e9)
    lam = 299792458.0 / 28e9
    assert d_ff == pytest.approx(2 * d * d / lam, rel=1e-12)
    assert d_qnf < d_ff
    assert risbeam.classify_regime(2 * d_ff, d, 28e9) == "far-field"


def test_focusing_is_matched():
    u_t = np.array([30.0, 80.0, 5.0])
    u_r = np.array([4.0, 2.0, -1.0])
    w = risbeam.focusing_profile(8, 8, u_t, u_r, 28e9)
    assert w.shape == (64,)
    assert risbeam.normalized_grcs(8, 8, w, u_t, u_r, 28e9) == pytest.approx(1.0, abs=1e-12)
    assert risbeam.normalized_grcs(8, 8, np.zeros(64), u_t, u_r, 28e9) < 0.5


def test_phase_length_checked():
    with pytest.raises(ValueError):
        risbeam.normalized_grcs(4, 4, np.zeros(3), np.ones(3), np.ones(3), 28e9)


def test_run_regime(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"freq_ghz": 28, "regime": {"side_m": [0.5]}}))
    code, out, err = risbeam.run("regime", str(cfg), str(tmp_path / "o"), seed=3, workers=1)
    assert code == 0, err
    assert (tmp_path / "o" / "manifest.json").exists()


def test_run_bad_config(tmp_path):
    code, _, err = risbeam.run("regime", str(tmp_path / "missing.json"), str(tmp_path))
    assert code == 4
    assert "error" in err
    assert "regime" in risbeam.subcommands()
