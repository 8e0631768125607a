import math

import numpy as np
import pytest

from levy_transience.errors import DivergentIntegralError
from levy_transience.quadrature import (
    integrate_log,
    integrate_origin,
    integrate_tail,
    jump_symbol_value,
    one_minus_wave_kernel,
    segment_integrals,
    sphere_surface,
    tail_cumulative,
)


def test_sphere_surface_values():
    assert sphere_surface(1) == pytest.approx(2.0)
    assert sphere_surface(2) == pytest.approx(2.0 * math.pi)
    assert sphere_surface(3) == pytest.approx(4.0 * math.pi)


@pytest.mark.parametrize("p", [-0.5, 0.0, 1.7, 3.2])
def test_integrate_log_power(p):
    got = integrate_log(lambda u: u ** p, 0.5, 8.0)
    want = (8.0 ** (p + 1) - 0.5 ** (p + 1)) / (p + 1)
    assert got == pytest.approx(want, rel=1e-13)


def test_integrate_log_breakpoint():
    # piecewise integrand with a kink: blocks must split at the breakpoint
    def f(u):
        return np.where(u < 2.0, u, 3.0 * u)

    got = integrate_log(f, 1.0, 4.0, breakpoints=(2.0,))
    want = (4.0 - 1.0) / 2.0 + 3.0 * (16.0 - 4.0) / 2.0
    assert got == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("p", [-1.2, -2.5, -4.0])
def test_integrate_tail_power(p):
    got = integrate_tail(lambda u: u ** p, 3.0)
    want = -3.0 ** (p + 1) / (p + 1)
    assert got == pytest.approx(want, rel=1e-10)


def test_integrate_tail_divergent():
    with pytest.raises(DivergentIntegralError):
        integrate_tail(lambda u: 1.0 / u, 1.0)
    assert integrate_tail(lambda u: 1.0 / u, 1.0, on_divergence="inf") == math.inf


@pytest.mark.parametrize("p", [-0.9, 0.3, 2.0])
def test_integrate_origin_power(p):
    got = integrate_origin(lambda u: u ** p, 2.0)
    want = 2.0 ** (p + 1) / (p + 1)
    assert got == pytest.approx(want, rel=1e-10)


def test_integrate_origin_divergent():
    with pytest.raises(DivergentIntegralError):
        integrate_origin(lambda u: u ** -1.5, 1.0)


def test_integrate_origin_support_cutoff():
    got = integrate_origin(lambda u: np.ones_like(u), 5.0, support_lo=2.0)
    assert got == pytest.approx(3.0, rel=1e-13)


def test_wave_kernel_matches_low_dim_closed_forms():
    s = np.array([1e-4, 0.01, 0.09, 0.5, 2.0, 17.0])
    np.testing.assert_allclose(one_minus_wave_kernel(s, 1), 1 - np.cos(s),
                               rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(one_minus_wave_kernel(s, 3),
                               1 - np.sin(s) / s, rtol=1e-10, atol=1e-14)


def test_wave_kernel_small_argument_scale():
    # behaves like s^2/(2d) near 0
    for d in (1, 2, 3, 5):
        s = 1e-6
        val = one_minus_wave_kernel(np.array([s]), d)[0]
        assert val == pytest.approx(s * s / (2.0 * d), rel=1e-9)


def test_jump_symbol_value_stable_closed_form():
    # weight of an isotropic stable measure gives exactly rho^alpha
    from levy_transience.densities import stable_coefficient

    d, alpha = 2, 0.8
    c = stable_coefficient(d, alpha)
    s_d = sphere_surface(d)

    def w(u):
        return s_d * c * u ** (d - 1.0 - d - alpha)

    for rho in (2.0 ** -20, 0.1, 1.0, 30.0):
        got = jump_symbol_value(w, rho, d)
        assert got == pytest.approx(rho ** alpha, rel=1e-8)


def test_tail_cumulative_matches_direct():
    def w(u):
        return u ** -2.2

    us = np.geomspace(0.05, 40.0, 17)
    got = tail_cumulative(w, us)
    want = -us ** -1.2 / -1.2
    np.testing.assert_allclose(got, want, rtol=1e-10)


def test_segment_integrals_with_breakpoint():
    def f(u):
        return np.where(u < 1.0, 0.0, u ** -2.0)

    edges = np.array([0.5, 0.9, 1.5, 3.0])
    got = segment_integrals(f, edges, breakpoints=(1.0,))
    assert got[0] == pytest.approx(0.0, abs=1e-15)
    assert got[1] == pytest.approx(1.0 - 1.0 / 1.5, rel=1e-12)
    assert got[2] == pytest.approx(1.0 / 1.5 - 1.0 / 3.0, rel=1e-12)
