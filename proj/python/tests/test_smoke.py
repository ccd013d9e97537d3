import json
import math
import os

import numpy as np
import pytest

import bll


def test_grid_and_state_roundtrip():
    g = bll.make_grid(2, 16, 2 * math.pi)
    assert (g.dim, g.points) == (2, 16)
    s = bll.init_manufactured(g, seed=3, amplitude=0.1)
    assert s.p.shape == (16, 16)
    assert len(s.v) == 2
    t = bll.State(g, s.p, s.v, 0.5)
    np.testing.assert_array_equal(t.p, s.p)
    assert t.time == 0.5
    assert abs(float(np.max(np.abs(s.p))) - 0.1) < 1e-12


def test_bad_shapes_and_params_raise():
    g = bll.make_grid(1, 16, 1.0)
    with pytest.raises(bll.ValidationError):
        bll.State(g, np.zeros(8), [np.zeros(16)])
    with pytest.raises(bll.ValidationError):
        bll.ModelParams(epsilon=-1.0)
    with pytest.raises(bll.ValidationError):
        bll.make_grid(4, 16, 1.0)


def test_run_conserves_mean_and_stays_curl_free():
    g = bll.make_grid(2, 32, 2 * math.pi)
    s0 = bll.init_manufactured(g, seed=1, amplitude=0.05)
    params = bll.ModelParams(epsilon=0.1, pbar=1.0, dim=2)
    final, reports, dt, steps = bll.run(s0, params, bll.StepperConfig(t_end=0.5))
    assert steps > 0 and dt > 0
    assert abs(final.time - 0.5) < 1e-12
    assert abs(final.p.mean() - s0.p.mean()) < 1e-12
    assert bll.curl_norm(final) < 1e-9
    assert reports[-1]["h1"] < reports[0]["h1"]
    assert set(reports[0]) >= {"E3", "D3", "entropy", "min_density"}


def test_mms_orders():
    r = bll.mms_order_experiment(bll.Scheme.CNAB2)
    assert r["time_order"] >= 1.9
    assert r["space_ratio"] >= 100
    e = bll.mms_order_experiment(bll.Scheme.IMEXEuler, levels=3)
    assert 0.9 < e["time_order"] < 1.2


def test_scaling_and_sweep():
    t = bll.appendix_scaling_experiment("appendix2d", [1, 2], level=1.0, points=256)
    assert abs(t["values"]["p_sq"][1] / t["values"]["p_sq"][0] - 4.0) < 1e-3
    g = bll.make_grid(1, 32, 2 * math.pi)
    s0 = bll.init_manufactured(g, seed=2, amplitude=0.05)
    r = bll.diffusion_limit_sweep(s0, bll.ModelParams(dim=1), [0.04, 0.02, 0.01], 0.5)
    assert r["epsilons"] == [0.04, 0.02, 0.01]
    assert 1.5 < r["slope_h1"] < 2.5
    with pytest.raises(bll.ValidationError):
        bll.diffusion_limit_sweep(s0, bll.ModelParams(dim=1), [0.1], 0.5)


def test_config_and_cli(tmp_path):
    cfg = os.environ.get("BLL_DEFAULT_CONFIG")
    if not cfg:
        pytest.skip("default config path not provided")
    echo = json.loads(bll.load_config_json(cfg))
    assert echo["grid"]["dim"] == 2
    s = bll.initial_state_from_config(cfg)
    assert s.grid.points == echo["grid"]["points"]
    code, out, err = bll.run_cli(["verify", "--config", cfg, "--out", str(tmp_path)])
    assert code == 0, out + err
    assert "FAIL" not in out
    bad = tmp_path / "bad.json"
    bad.write_text('{"init": {"manufactured": {}}, "nonsense": 1}')
    code, _, err = bll.run_cli(["simulate", "--config", str(bad), "--out", str(tmp_path)])
    assert code == 2 and "nonsense" in err
