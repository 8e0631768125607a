import math

import numpy as np
import pytest
from scipy.integrate import simpson

from levy_transience.densities import power_density
from levy_transience.errors import ConfigurationError, DegenerateModelError
from levy_transience.symbols import (
    StateGrid,
    brownian_drift,
    custom_model,
    eval_symbol,
    eval_symbol_batch,
    inf_re_symbol,
    isotropic_stable,
    model_from_config,
    radial_jump_model,
    radiality_check,
    sector_check,
    stable_like,
    sup_abs_im_symbol,
    sup_abs_symbol,
    symmetry_check,
)


def test_stable_symbol_value(stable_05_d1):
    val = eval_symbol(stable_05_d1, None, [2.0])
    assert val == pytest.approx(2.0 ** 0.5, rel=1e-12)
    assert val.imag == 0.0


def test_symbol_vanishes_at_zero_frequency(bm3, stable_05_d1):
    rj = radial_jump_model(power_density(1, 0.5, u0=1.0))
    for model in (bm3, stable_05_d1, rj):
        assert eval_symbol(model, None, np.zeros(model.d)) == 0j
        assert sup_abs_symbol(model, np.zeros(model.d)) == 0.0


def test_radial_jump_symbol_against_riemann_oracle():
    # n(u) = u^{-1.5} on u > 1, d = 1, xi = 1
    model = radial_jump_model(power_density(1, 0.5, u0=1.0))
    got = eval_symbol(model, None, [1.0]).real

    U = 1e4
    u = np.linspace(1.0, U, 1_000_001)
    core = simpson((1 - np.cos(u)) * u ** -1.5, x=u)
    pow_tail = 2.0 * U ** -0.5
    cos_tail = -math.sin(U) * U ** -1.5 + 1.5 * math.cos(U) * U ** -2.5
    oracle = 2.0 * (core + pow_tail - cos_tail)
    assert got == pytest.approx(oracle, abs=1e-6)


def test_stable_like_envelopes_quarter():
    model = stable_like(2, alpha=(0.5, 1.5), gamma=1.0)
    xi = np.array([0.25, 0.0])
    assert sup_abs_symbol(model, xi) == pytest.approx(0.5, rel=1e-12)
    assert inf_re_symbol(model, xi) == pytest.approx(0.125, rel=1e-12)
    # dense-alpha oracle: rho^alpha is monotone in alpha for rho < 1
    alphas = np.linspace(0.5, 1.5, 2001)
    assert sup_abs_symbol(model, xi) == pytest.approx(
        np.max(0.25 ** alphas), rel=1e-9)
    assert inf_re_symbol(model, xi) == pytest.approx(
        np.min(0.25 ** alphas), rel=1e-9)


def test_brownian_envelopes(bm3):
    xi = np.array([2.0, 0.0, 0.0])
    assert sup_abs_symbol(bm3, xi) == pytest.approx(2.0)
    assert inf_re_symbol(bm3, xi) == pytest.approx(2.0)
    assert sup_abs_im_symbol(bm3, xi) == 0.0


def test_grid_envelope_bounds_and_attainment():
    model = stable_like(1, alpha=(0.6, 1.4), gamma=1.0,
                        envelope_mode="grid_sampled",
                        state_grid=StateGrid((-10, 10), 41))
    X = model.state_points()
    for xi in ([0.3], [1.7]):
        q = eval_symbol_batch(model, X, xi)
        sup = sup_abs_symbol(model, xi)
        inf = inf_re_symbol(model, xi)
        assert np.all(np.abs(q) <= sup + 1e-12)
        assert np.all(q.real >= inf - 1e-12)
        assert np.max(np.abs(q)) == pytest.approx(sup)
        assert np.min(q.real) == pytest.approx(inf)


def test_rotation_invariance_isotropic_stable():
    model = isotropic_stable(3, 1.3)
    gen = np.random.Generator(np.random.Philox(key=[1, 2]))
    xi = np.array([0.7, -0.2, 1.1])
    base = eval_symbol(model, None, xi)
    for _ in range(10):
        M = gen.standard_normal((3, 3))
        Q, R = np.linalg.qr(M)
        rotated = eval_symbol(model, None, Q @ xi)
        assert abs(rotated - base) <= 1e-10


def test_scaling_of_stable_envelope():
    model = isotropic_stable(2, 1.3)
    xi = np.array([0.4, 0.3])
    for lam in (0.5, 2.0, 7.0):
        assert sup_abs_symbol(model, lam * xi) == pytest.approx(
            lam ** 1.3 * sup_abs_symbol(model, xi), rel=1e-10)


def test_sector_check_cases():
    ok, _ = sector_check(brownian_drift(2, c=1.0), 0.0)
    assert ok
    drifted = stable_like(2, alpha=1.2, beta=[0.5, 0.0], gamma=1.0)
    ok, witness = sector_check(drifted, 0.0)
    assert not ok and witness is not None
    assert sup_abs_im_symbol(drifted, witness) > 0.0
    ok, _ = sector_check(isotropic_stable(2, 1.2), 0.0)
    assert ok


def test_radiality_check_cases(stable_05_d1):
    assert radiality_check(stable_05_d1)
    assert not radiality_check(stable_like(2, alpha=1.2, beta=[0.5, 0.0]))

    # a one-axis jump measure is caught by rotation sampling
    def axis_symbol(x, xi):
        return 1.0 - math.cos(xi[0])

    axis = custom_model(2, axis_symbol, x_independent=True,
                        x_samples=np.zeros((1, 2)))
    assert not radiality_check(axis)


def test_symmetry_check_cases(stable_05_d1):
    assert symmetry_check(stable_05_d1)
    mirrored = stable_like(2, alpha={"lo": 0.6, "hi": 1.4, "profile": "cos"},
                           gamma=1.0)
    assert symmetry_check(mirrored)
    lopsided = stable_like(2, alpha={"lo": 0.6, "hi": 1.4, "profile": "step"},
                           gamma=1.0, envelope_mode="grid_sampled")
    assert not symmetry_check(lopsided)


def test_degenerate_symbol_rejected():
    with pytest.raises(DegenerateModelError):
        brownian_drift(2, c=0.0)


def test_invalid_family_parameters():
    with pytest.raises(Exception):
        isotropic_stable(2, 2.5)
    with pytest.raises(Exception):
        stable_like(2, alpha=(0.5, 2.0))


def test_model_from_config_round_trip(model_file):
    cfg = {"family": "stable_like", "d": 2,
           "parameters": {"alpha": {"lo": 0.6, "hi": 1.4, "profile": "cos"},
                          "gamma": 1.0},
           "envelope_mode": "closed_form"}
    model = model_from_config(cfg)
    assert model.family == "stable_like"
    assert model.d == 2
    assert model.params["alpha"].bounds == (0.6, 1.4)

    from levy_transience.symbols import load_model
    path = model_file(cfg)
    loaded = load_model(path)
    xi = np.array([0.25, 0.0])
    assert sup_abs_symbol(loaded, xi) == pytest.approx(
        sup_abs_symbol(model, xi))


def test_load_model_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigurationError) as err:
        from levy_transience.symbols import load_model
        load_model(str(p))
    assert "line" in str(err.value)
