"""Divergence/convergence verdicts for one-dimensional radial integrals.

A verdict is a numerical surrogate for "this integral is infinite/finite":
the radial integrand is sampled on a geometric ladder toward the singular
end (the origin or infinity), a local power exponent is fitted, and the
state follows from comparing the exponent with -1. Exponents inside a
tolerance band give an honest Inconclusive; a secondary logarithmic
refinement (exact for power-law integrands) records which side a boundary
case falls on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateModelError, QuadratureError
from .quadrature import gauss_log_nodes

DIVERGES = "diverges"
CONVERGES = "converges"
INCONCLUSIVE = "inconclusive"

AT_ORIGIN = "origin"
AT_INFINITY = "infinity"

DEFAULT_BAND = 0.05
DEFAULT_LADDER = 24
_REFINE_TOL = 1e-3


@dataclass(frozen=True)
class DivergenceVerdict:
    """Tri-state verdict with the fitted local exponent and partial integrals.

    `state` honors the band: exponents within `band` of the critical value -1
    are Inconclusive. `refined_state` records the logarithmic-refinement
    resolution of boundary cases; `decided_state` prefers it when the primary
    state is Inconclusive.
    """

    state: str
    exponent: float
    band: float
    partials: tuple
    singularity: str = AT_ORIGIN
    refined_state: str | None = None
    refinement: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def decided_state(self) -> str:
        if self.state != INCONCLUSIVE:
            return self.state
        return self.refined_state or INCONCLUSIVE

    def to_json(self):
        exp = self.exponent
        return {
            "state": self.state,
            "exponent": None if not math.isfinite(exp) else exp,
            "band": self.band,
            "partials": [{"eps": e, "value": v} for e, v in self.partials],
            "singularity": self.singularity,
            "refined_state": self.refined_state,
            "notes": list(self.notes),
        }


def _fit_slope(x, y):
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def _refine(rhos, g, singularity):
    """Boundary refinement: behavior of y = G(rho) * rho near the singular end.

    For power integrands y ~ rho^s with s = exponent + 1; the sign of s
    decides the integral, and s ~ 0 (the genuinely logarithmic case) is
    decided by the level: a positive limit of y means a log-divergent
    integral. The level is estimated as the intercept of a regression of y
    against 1 / log-distance to the singularity.
    """
    y = g * rhos
    s, _ = _fit_slope(rhos, y)
    with np.errstate(divide="ignore"):
        logdist = np.log(1.0 / rhos) if singularity == AT_ORIGIN else np.log(rhos)
    usable = logdist > 0.3
    intercept = float("nan")
    if np.count_nonzero(usable) >= 3:
        z = 1.0 / logdist[usable]
        coef = np.polyfit(z, y[usable], 1)
        intercept = float(coef[1])
    info = {"slope": s, "level_intercept": intercept,
            "level_scale": float(np.max(y))}
    grows_toward_singularity = s < -_REFINE_TOL if singularity == AT_ORIGIN \
        else s > _REFINE_TOL
    decays_toward_singularity = s > _REFINE_TOL if singularity == AT_ORIGIN \
        else s < -_REFINE_TOL
    if grows_toward_singularity:
        return DIVERGES, info
    if decays_toward_singularity:
        return CONVERGES, info
    level = intercept if math.isfinite(intercept) else float(np.mean(y))
    return (DIVERGES if level > 0.25 * np.max(y) else CONVERGES), info


def verdict_from_radial_integrand(G, r, K=DEFAULT_LADDER, band=DEFAULT_BAND,
                                  singularity=AT_ORIGIN, n_gl=16,
                                  notes=()) -> DivergenceVerdict:
    """Verdict for the integral of G over (0, r] or [r, infinity).

    G must be vectorized, positive and finite on the ladder. Partial
    integrals run from r toward the singular end over the dyadic ladder
    eps_k = r * 2^{-k} (origin) or rho_k = r * 2^k (infinity).
    """
    k = np.arange(K + 1)
    rhos = r * 2.0 ** (-k) if singularity == AT_ORIGIN else r * 2.0 ** k
    g = np.asarray(G(rhos), dtype=float)
    if np.any(~np.isfinite(g)):
        raise QuadratureError("radial integrand is not finite on the ladder")
    if np.any(g < 0):
        raise QuadratureError("radial integrand must be nonnegative")
    if np.any(g == 0.0):
        raise DegenerateModelError(
            "radial integrand vanishes at positive radius; model degenerate")

    # cumulative partial integrals octave by octave, single vectorized G call
    nodes, weights, octave_id = [], [], []
    for j in range(K):
        a, b = (rhos[j + 1], rhos[j]) if singularity == AT_ORIGIN \
            else (rhos[j], rhos[j + 1])
        u, w = gauss_log_nodes(a, b, n=n_gl)
        nodes.append(u)
        weights.append(w)
        octave_id.append(np.full(u.size, j))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    octave_id = np.concatenate(octave_id)
    contrib = weights * np.asarray(G(nodes), dtype=float)
    octave_ints = np.bincount(octave_id, weights=contrib, minlength=K)
    cumulative = np.cumsum(octave_ints)
    partials = tuple((float(rhos[j + 1]), float(cumulative[j])) for j in range(K))

    inner = slice(K // 2, K + 1)
    exponent, _ = _fit_slope(rhos[inner], g[inner])
    window = slice(K - 7, K + 1)
    refined_state, refinement = _refine(rhos[window], g[window], singularity)

    if singularity == AT_ORIGIN:
        if exponent <= -1.0 - band:
            state = DIVERGES
        elif exponent >= -1.0 + band:
            state = CONVERGES
        else:
            state = INCONCLUSIVE
    else:
        if exponent >= -1.0 + band:
            state = DIVERGES
        elif exponent <= -1.0 - band:
            state = CONVERGES
        else:
            state = INCONCLUSIVE

    return DivergenceVerdict(
        state=state, exponent=exponent, band=band, partials=partials,
        singularity=singularity, refined_state=refined_state,
        refinement=refinement, notes=tuple(notes))


def diverges_verdict(singularity=AT_ORIGIN, notes=()) -> DivergenceVerdict:
    """Annotation verdict used when the integrand is +infinity by inspection
    (e.g. a vanishing denominator on a set of positive measure)."""
    return DivergenceVerdict(
        state=DIVERGES, exponent=float("nan"), band=DEFAULT_BAND, partials=(),
        singularity=singularity, refined_state=DIVERGES, notes=tuple(notes))
