import math

import numpy as np
import pytest

import pglab


def grid(n, L=2 * math.pi):
    x = np.arange(n) * (L / n)
    return np.meshgrid(x, x, indexing="ij")


def test_lorentz_matches_lp_on_diagonal():
    X, Y = grid(32)
    f = pglab.Field(np.array([np.sin(X) * np.cos(2 * Y) + 0.3]))
    for p in (4 / 3, 2.0, 4.0):
        assert pglab.lorentz_norm(f, p, p) == pytest.approx(pglab.lp_norm(f, p), rel=1e-10)


def test_indicator_closed_form():
    values = np.zeros((1, 16, 16))
    values.reshape(-1)[: 64 * 3 : 3] = 1.0
    f = pglab.Field(values, L=8.0)
    assert pglab.lorentz_norm(f, 4.0, 1.0) == pytest.approx(8.0, rel=1e-12)


def test_field_roundtrip(tmp_path):
    X, Y = grid(16)
    a = np.stack([np.sin(X), np.cos(Y)])
    f = pglab.Field(a)
    assert (f.dim, f.N, f.components) == (2, 16, 2)
    path = str(tmp_path / "u.pglf")
    pglab.save_field(path, f)
    assert np.array_equal(pglab.load_field(path).to_numpy(), a)
    assert pglab.besov_norm(f, 0.5, 4 / 3, 1.0) > 0


def test_split_constant_series():
    t = np.linspace(0.0, 32.0, 3201)
    s = pglab.split_intervals(t, np.ones_like(t), 8.0, 4.0, 1.0)
    assert s["K"] == 2
    assert s["breakpoints"] == pytest.approx([0.0, 16.0, 32.0], abs=1e-8)
    assert pglab.k_bounds(16.0, 2.0) == 4


def test_bad_input_raises():
    with pytest.raises(ValueError):
        pglab.Field(np.zeros((1, 8, 9)))
    with pytest.raises(ValueError):
        pglab.run_scenario("colour = red\n", "/tmp")


def test_run_builtin(tmp_path):
    assert "calibration-2d" in pglab.builtin_scenarios()
    code, message, directory = pglab.run_builtin("calibration-2d", tmp_path, N=16, T=0.1)
    assert code == 0, message
    header = open(f"{directory}/monitors.csv").readline().strip().split(",")
    assert header[0] == "t" and "kinetic" in header
    code, message, _ = pglab.run_builtin("calibration-2d", tmp_path, name="cfl", u0_norm=50, dt=0.2)
    assert code == 2 and "CFL" in message
