"""Chung-Fuchs type integral tests over small frequencies.

The weak-side test integrates, over a ball B(0, r) in frequency space,

    F(xi) = int_0^{t0(xi)} f(t) dt,     t0(xi) = ln 2 / (4 sup_x |q(x, xi)|),

and the process is f-weakly transient when that integral diverges. The
strong-side test integrates

    int_0^infinity f(t) exp[-(t/16) inf_x Re q(x, xi)] dt

and convergence is sufficient for f-strong transience (under the sector
condition). For the power weight f(t) = t^kappa both reduce, up to constants
that cannot affect divergence, to

    int_B(0,r) dxi / (sup_x |q|)^{kappa+1}     (weak side)
    int_B(0,r) dxi / (inf_x Re q)^{kappa+1}    (strong side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateModelError, ModelInvariantError
from .quadrature import gauss_linear_nodes, sphere_surface
from .symbols import (
    ENV_INF_RE,
    ENV_SUP_ABS,
    SymbolModel,
    envelope_is_radial,
    envelope_profile,
)
from .verdicts import (
    AT_ORIGIN,
    DEFAULT_BAND,
    DivergenceVerdict,
    diverges_verdict,
    verdict_from_radial_integrand,
)

_LN2 = math.log(2.0)
_LAGUERRE_N = 64


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative, non-decreasing C^1 weight f on [0, infinity)."""

    tag: str                     # "power" | "constant" | "custom"
    kappa: float = 0.0
    fn: object = None
    user_attested_smooth: bool = False

    @staticmethod
    def power(kappa):
        if kappa < 0:
            raise ConfigurationError(f"power weight needs kappa >= 0, got {kappa}")
        return WeightFunction(tag="power", kappa=float(kappa))

    @staticmethod
    def constant():
        return WeightFunction(tag="constant")

    @staticmethod
    def custom(fn, attested_smooth=False):
        if not attested_smooth:
            raise ConfigurationError(
                "custom weights require the smoothness/monotonicity attestation")
        t = np.linspace(0.0, 50.0, 201)
        vals = np.asarray([fn(x) for x in t], dtype=float)
        if np.any(vals < 0) or np.any(np.diff(vals) < -1e-12):
            raise ModelInvariantError(
                "custom weight must be nonnegative and non-decreasing")
        return WeightFunction(tag="custom", fn=fn, user_attested_smooth=True)

    def integral_to(self, t0):
        """int_0^{t0} f(t) dt, vectorized over t0."""
        t0 = np.asarray(t0, dtype=float)
        if self.tag == "power":
            return t0 ** (self.kappa + 1.0) / (self.kappa + 1.0)
        if self.tag == "constant":
            return t0.copy()
        out = np.empty_like(t0)
        for i, b in np.ndenumerate(t0):
            u, w = gauss_linear_nodes(0.0, float(b), n=24)
            out[i] = float(w @ np.asarray([self.fn(x) for x in u]))
        return out

    def exp_moment(self, m):
        """int_0^infinity f(t) exp(-t m / 16) dt for m > 0, vectorized."""
        m = np.asarray(m, dtype=float)
        if self.tag == "power":
            return math.gamma(self.kappa + 1.0) * (16.0 / m) ** (self.kappa + 1.0)
        if self.tag == "constant":
            return 16.0 / m
        nodes, weights = np.polynomial.laguerre.laggauss(_LAGUERRE_N)
        out = np.empty_like(m)
        for i, mm in np.ndenumerate(m):
            scale = 16.0 / mm
            out[i] = scale * float(weights @ np.asarray(
                [self.fn(scale * s) for s in nodes]))
        return out


def _reduced_envelope(model, kind, n_directions):
    """Vectorized rho -> envelope, reduced over directions toward the largest
    integrand (the smallest envelope value), with per-model caching."""
    radial = envelope_is_radial(model, kind)
    cache = model._cache.setdefault(("profile", kind, n_directions), {})

    def profile(rhos):
        rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
        out = np.empty_like(rhos)
        missing = [i for i, rho in enumerate(rhos) if float(rho) not in cache]
        if missing:
            sub = rhos[missing]
            vals = envelope_profile(model, kind, sub, reduce="min",
                                    n_directions=1 if radial else n_directions)
            for i, v in zip(missing, vals):
                cache[float(rhos[i])] = float(v)
        for i, rho in enumerate(rhos):
            out[i] = cache[float(rho)]
        return out

    return profile


def _check_positive(values, what):
    if np.any(values < 0):
        raise DegenerateModelError(f"{what} envelope is negative")


def weak_integral_f(model: SymbolModel, f: WeightFunction, r: float,
                    K=24, band=DEFAULT_BAND, n_directions=64) -> DivergenceVerdict:
    """Weak-side test with a general weight; Diverges supports weak transience."""
    if r <= 0:
        raise ConfigurationError(f"radius must be positive, got {r}")
    env = _reduced_envelope(model, ENV_SUP_ABS, n_directions)
    s_d = sphere_surface(model.d)
    d = model.d

    def G(rhos):
        m = env(rhos)
        _check_positive(m, "sup |q|")
        if np.any(m == 0.0):
            raise DegenerateModelError(
                "sup |q| vanishes at positive frequency; model degenerate")
        t0 = _LN2 / (4.0 * m)
        return s_d * rhos ** (d - 1) * f.integral_to(t0)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_ORIGIN)


def strong_integral_f(model: SymbolModel, f: WeightFunction, r: float,
                      K=24, band=DEFAULT_BAND, n_directions=64) -> DivergenceVerdict:
    """Strong-side test with a general weight; Converges supports strong
    transience (given the sector condition, which the caller records)."""
    if r <= 0:
        raise ConfigurationError(f"radius must be positive, got {r}")
    env = _reduced_envelope(model, ENV_INF_RE, n_directions)
    s_d = sphere_surface(model.d)
    d = model.d
    probe = env(np.asarray([r / 2.0, r / 8.0, r / 64.0]))
    if np.any(probe <= 0.0):
        return diverges_verdict(notes=(
            "inf Re q vanishes on the test set; strong-side integral is infinite",))

    def G(rhos):
        m = env(rhos)
        _check_positive(m, "inf Re q")
        return s_d * rhos ** (d - 1) * f.exp_moment(m)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_ORIGIN)


def weak_integral_kappa(model: SymbolModel, kappa: float, r: float,
                        K=24, band=DEFAULT_BAND, n_directions=64) -> DivergenceVerdict:
    """int_B(0,r) dxi / (sup_x |q|)^{kappa+1}; Diverges supports weak transience."""
    if r <= 0:
        raise ConfigurationError(f"radius must be positive, got {r}")
    if kappa < 0:
        raise ConfigurationError(f"kappa must be >= 0, got {kappa}")
    env = _reduced_envelope(model, ENV_SUP_ABS, n_directions)
    s_d = sphere_surface(model.d)
    d = model.d

    def G(rhos):
        m = env(rhos)
        _check_positive(m, "sup |q|")
        if np.any(m == 0.0):
            raise DegenerateModelError(
                "sup |q| vanishes at positive frequency; model degenerate")
        return s_d * rhos ** (d - 1) / m ** (kappa + 1.0)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_ORIGIN)


def strong_integral_kappa(model: SymbolModel, kappa: float, r: float,
                          K=24, band=DEFAULT_BAND, n_directions=64) -> DivergenceVerdict:
    """int_B(0,r) dxi / (inf_x Re q)^{kappa+1}; Converges supports strong
    transience."""
    if r <= 0:
        raise ConfigurationError(f"radius must be positive, got {r}")
    if kappa < 0:
        raise ConfigurationError(f"kappa must be >= 0, got {kappa}")
    env = _reduced_envelope(model, ENV_INF_RE, n_directions)
    s_d = sphere_surface(model.d)
    d = model.d
    probe = env(np.asarray([r / 2.0, r / 8.0, r / 64.0]))
    if np.any(probe <= 0.0):
        return diverges_verdict(notes=(
            "inf Re q vanishes on the test set; strong-side integral is infinite",))

    def G(rhos):
        m = env(rhos)
        _check_positive(m, "inf Re q")
        return s_d * rhos ** (d - 1) / m ** (kappa + 1.0)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_ORIGIN)


def r_independence_report(model: SymbolModel, test, r_list) -> bool:
    """Run `test(model, r)` at every radius; True when all verdicts agree.

    Requires the (weak-side) envelope to be radial in xi, which is what makes
    the tests radius-independent in the first place.
    """
    if not envelope_is_radial(model, ENV_SUP_ABS):
        raise ConfigurationError(
            "radius-independence needs a radial sup-envelope")
    states = [test(model, r).decided_state for r in r_list]
    return all(s == states[0] for s in states)
