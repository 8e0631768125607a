"""Tail functionals of radial jump measures and the measure-side tests.

For a radial density the three tail functionals are

    T1(rho) = int_0^rho u * nu(B^c(0, u)) du        (integrated tail)
    T2(rho) = rho^2 * nu(B^c(0, rho))               (scaled tail mass)
    T3(rho) = int_{B(0, rho)} |y|^2 nu(dy)          (truncated second moment)

linked by the integration-by-parts identity T1 = T2/2 + T3/2. T1 drives the
measure-side weak/strong tests: divergence of

    int_r^infinity rho^{2 kappa - d + 1} / (env_x T1(x, rho))^{kappa+1} drho

with the sup-envelope supports weak transience; with the inf-envelope, its
convergence is the strong-side criterion. T1 is computed here by genuinely
nested quadrature (the identity stays an independent cross-check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import RadialLevyDensity
from .errors import (
    ConfigurationError,
    DivergentIntegralError,
    LevyMeasureError,
    NonPowerTailError,
    NotApplicableError,
)
from .quadrature import (
    integrate_origin,
    integrate_tail,
    sphere_surface,
    tail_cumulative,
)
from .verdicts import (
    AT_INFINITY,
    CONVERGES,
    DIVERGES,
    DEFAULT_BAND,
    DivergenceVerdict,
    verdict_from_radial_integrand,
)

_DEEP_OCTAVES = 80


# ---------------------------------------------------------------------------
# Tail functionals.
# ---------------------------------------------------------------------------

def tail_mass(density: RadialLevyDensity, u: float, variant=0) -> float:
    """nu(B^c(0, u)) = S_d int_u^infinity v^{d-1} n(v) dv, plus any atom
    mass at radii >= u."""
    if u <= 0:
        raise ConfigurationError("tail mass needs u > 0")
    w = density.radial_weight(variant)
    try:
        base = integrate_tail(w, u, density.all_breakpoints())
    except DivergentIntegralError as exc:
        raise LevyMeasureError(
            "tail mass is infinite: the jump measure violates "
            "int min(1, |y|^2) nu(dy) < infinity") from exc
    return base + float(density.atom_tail_mass(np.asarray([u]))[0])


def truncated_second_moment(density: RadialLevyDensity, rho: float,
                            variant=0) -> float:
    """int_{B(0, rho)} |y|^2 nu(dy) = S_d int_0^rho u^{d+1} n(u) du."""
    if rho <= 0:
        raise ConfigurationError("truncated second moment needs rho > 0")
    w = density.radial_weight(variant)

    def g(u):
        return np.asarray(u, dtype=float) ** 2 * w(u)

    base = integrate_origin(g, rho, density.all_breakpoints(),
                            support_lo=density.support_lo(variant))
    return base + density.atom_second_moment(rho)


def _t1_ladder(density, variant, rhos):
    """T1 at each (ascending) rho via one global tail-mass sweep.

    Builds a deep geometric ladder below the smallest rho plus Gauss nodes
    across every gap, evaluates nu(B^c(0, u)) on all nodes in one cumulative
    sweep, and assembles the outer integrals int_0^rho u * nu(B^c(0,u)) du
    with power-law extrapolation of the part below the ladder.
    """
    rhos = np.asarray(rhos, dtype=float)
    bps = density.all_breakpoints()
    w = density.radial_weight(variant)
    bottom = rhos[0] * 2.0 ** (-np.arange(_DEEP_OCTAVES + 1, dtype=float))
    coarse = np.concatenate([bottom[::-1], rhos[1:]])
    inner_bps = [p for p in bps if coarse[0] < p < coarse[-1]]
    edges = np.unique(np.concatenate([coarse, inner_bps])) if inner_bps \
        else coarse
    coarse_of = np.searchsorted(coarse, edges[:-1], side="right") - 1

    # every tail-mass value the outer integral needs, in one cumulative sweep
    base_x, base_w = np.polynomial.legendre.leggauss(16)
    t0, t1 = np.log(edges[:-1]), np.log(edges[1:])
    mid = 0.5 * (t0 + t1)[:, None]
    half = 0.5 * (t1 - t0)[:, None]
    nodes = np.exp(mid + half * base_x[None, :])
    weights = half * base_w[None, :] * nodes
    flat = nodes.ravel()
    order = np.argsort(flat)
    tm_sorted = tail_cumulative(w, flat[order], bps)
    tm = np.empty_like(tm_sorted)
    tm[order] = tm_sorted
    tm += density.atom_tail_mass(flat)
    contrib = (weights * nodes).ravel() * tm
    fine_int = contrib.reshape(nodes.shape).sum(axis=1)
    seg_int = np.bincount(coarse_of, weights=fine_int,
                          minlength=len(coarse) - 1)

    # part below the deep ladder via ratio extrapolation
    deep = seg_int[:_DEEP_OCTAVES]
    total_deep = float(np.sum(deep))
    if deep[0] > 0 and deep[1] > 0:
        ratio = deep[0] / deep[1]
        if ratio >= 0.999:
            raise LevyMeasureError(
                "integrated tail T1 diverges at 0; the jump measure violates "
                "int min(1, |y|^2) nu(dy) < infinity")
        total_deep += deep[0] * ratio / (1.0 - ratio)
    out = np.empty_like(rhos)
    out[0] = total_deep
    out[1:] = total_deep + np.cumsum(seg_int[_DEEP_OCTAVES:])
    return out


def integrated_tail(density: RadialLevyDensity, rho: float, variant=0) -> float:
    """T1(rho) = int_0^rho u * nu(B^c(0, u)) du by nested quadrature."""
    if rho <= 0:
        raise ConfigurationError("integrated tail needs rho > 0")
    return float(_t1_ladder(density, variant, np.asarray([float(rho)]))[0])


@dataclass(frozen=True)
class TailFunctionals:
    """The three tail functionals at one (variant, rho)."""

    integrated_tail: float     # T1
    scaled_tail_mass: float    # T2 = rho^2 * nu(B^c(0, rho))
    truncated_moment: float    # T3

    @property
    def parts_identity_gap(self):
        lhs = self.integrated_tail
        rhs = 0.5 * self.scaled_tail_mass + 0.5 * self.truncated_moment
        return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def tail_functionals(density: RadialLevyDensity, rho: float,
                     variant=0) -> TailFunctionals:
    return TailFunctionals(
        integrated_tail=integrated_tail(density, rho, variant),
        scaled_tail_mass=rho ** 2 * tail_mass(density, rho, variant),
        truncated_moment=truncated_second_moment(density, rho, variant))


def _envelope_over_variants(density, values_per_variant, which):
    stack = np.stack(values_per_variant)
    return stack.max(axis=0) if which == "sup" else stack.min(axis=0)


def _t1_values(density, variant, rhos):
    """T1 at arbitrary radii, memoized on the density."""
    cache = density._cache
    missing = sorted({float(r) for r in rhos
                      if ("t1", variant, float(r)) not in cache})
    if missing:
        vals = _t1_ladder(density, variant, np.asarray(missing))
        for r, v in zip(missing, vals):
            cache[("t1", variant, r)] = float(v)
    return np.asarray([cache[("t1", variant, float(r))] for r in rhos])


def _tm_values(density, variant, rhos):
    """Tail mass nu(B^c(0, rho)) at arbitrary radii, memoized."""
    cache = density._cache
    missing = sorted({float(r) for r in rhos
                      if ("tm", variant, float(r)) not in cache})
    if missing:
        w = density.radial_weight(variant)
        vals = tail_cumulative(w, np.asarray(missing),
                               density.all_breakpoints())
        vals = vals + density.atom_tail_mass(np.asarray(missing))
        for r, v in zip(missing, vals):
            cache[("tm", variant, r)] = float(v)
    return np.asarray([cache[("tm", variant, float(r))] for r in rhos])


def _t3_values(density, variant, rhos):
    """Truncated second moments at arbitrary radii, memoized."""
    cache = density._cache
    for r in rhos:
        key = ("t3", variant, float(r))
        if key not in cache:
            cache[key] = truncated_second_moment(density, float(r), variant)
    return np.asarray([cache[("t3", variant, float(r))] for r in rhos])


def _t1_envelope_fn(density, which):
    def profile(rhos):
        rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
        per_variant = [_t1_values(density, i, rhos)
                       for i in range(len(density.variants))]
        return _envelope_over_variants(density, per_variant, which)

    return profile


# ---------------------------------------------------------------------------
# Measure-side divergence tests.
# ---------------------------------------------------------------------------

def tail_test_weak(density: RadialLevyDensity, d: int, kappa: float,
                   r: float, K=24, band=DEFAULT_BAND) -> DivergenceVerdict:
    """Divergence of the T1 sup-envelope integral supports weak transience."""
    return _tail_test(density, d, kappa, r, which="sup", K=K, band=band)


def tail_test_strong(density: RadialLevyDensity, d: int, kappa: float,
                     r: float, K=24, band=DEFAULT_BAND) -> DivergenceVerdict:
    """Convergence of the T1 inf-envelope integral is the strong-side
    criterion (an equivalence under a decreasing density plus quadratic
    growth of the symbol; otherwise one-directional)."""
    return _tail_test(density, d, kappa, r, which="inf", K=K, band=band)


def _tail_test(density, d, kappa, r, which, K, band):
    if r <= 0:
        raise ConfigurationError("tail test needs r > 0")
    if d != density.d:
        raise ConfigurationError(
            f"dimension mismatch: test d={d}, density d={density.d}")
    t1 = _t1_envelope_fn(density, which)
    probe = t1(np.asarray([r, 4.0 * r]))
    if np.all(probe == 0.0):
        raise NotApplicableError("integrated tail vanishes; no jump tail to test")

    def G(rhos):
        vals = t1(rhos)
        return rhos ** (2.0 * kappa - d + 1.0) / vals ** (kappa + 1.0)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_INFINITY)


@dataclass(frozen=True)
class SplitTailVerdicts:
    """The four decomposed sufficient tests (tail-mass / truncated-moment)."""

    weak_split: DivergenceVerdict        # diverges -> weak-side T1 test holds
    strong_split: DivergenceVerdict      # converges -> strong-side T1 test holds
    strong_tail_mass: DivergenceVerdict  # converges -> strong side
    strong_second_moment: DivergenceVerdict  # converges -> strong side

    def fired(self):
        out = []
        if self.weak_split.decided_state == DIVERGES:
            out.append("split-weak")
        if self.strong_split.decided_state == CONVERGES:
            out.append("split-strong")
        if self.strong_tail_mass.decided_state == CONVERGES:
            out.append("tail-mass-strong")
        if self.strong_second_moment.decided_state == CONVERGES:
            out.append("moment-strong")
        return out


def split_tail_tests(density: RadialLevyDensity, d: int, kappa: float, r: float,
                 K=24, band=DEFAULT_BAND) -> SplitTailVerdicts:
    """Sufficient tests with T1 split into T2/2 + T3/2.

    The split integrands replace T1 by rho^2 * tail-mass plus truncated
    moment (sup-envelopes for the weak side, inf for the strong side), and
    the two 'in particular' strong-side tests keep only one of the pieces.
    """
    if r <= 0:
        raise ConfigurationError("tail tests need r > 0")
    nv = len(density.variants)

    def tm_env(rhos, which):
        per = [_tm_values(density, i, rhos) for i in range(nv)]
        return _envelope_over_variants(density, per, which)

    def t3_env(rhos, which):
        per = [_t3_values(density, i, rhos) for i in range(nv)]
        return _envelope_over_variants(density, per, which)

    def split(which):
        def G(rhos):
            denom = rhos ** 2 * tm_env(rhos, which) + t3_env(rhos, which)
            return rhos ** (2.0 * kappa - d + 1.0) / denom ** (kappa + 1.0)
        return G

    weak_split = verdict_from_radial_integrand(split("sup"), r, K=K, band=band,
                                               singularity=AT_INFINITY)
    strong_split = verdict_from_radial_integrand(split("inf"), r, K=K, band=band,
                                                 singularity=AT_INFINITY)

    def G_mass(rhos):
        return rhos ** (-d - 1.0) / tm_env(rhos, "sup") ** (kappa + 1.0)

    strong_tail_mass = verdict_from_radial_integrand(
        G_mass, r, K=K, band=band, singularity=AT_INFINITY)

    def G_moment(rhos):
        return rhos ** (2.0 * kappa - d + 1.0) / t3_env(rhos, "inf") ** (kappa + 1.0)

    strong_second_moment = verdict_from_radial_integrand(
        G_moment, r, K=K, band=band, singularity=AT_INFINITY)
    return SplitTailVerdicts(weak_split, strong_split, strong_tail_mass,
                             strong_second_moment)


def density_floor_test(density: RadialLevyDensity, d: int, kappa: float,
                       r: float, K=24, band=DEFAULT_BAND) -> DivergenceVerdict:
    """Strong-side test directly on the density floor: convergence of
    int_r^infinity rho^{-d kappa - 2d - 1} / (inf_x n(x, rho))^{kappa+1} drho.

    Requires the density decreasing beyond its cutoff.
    """
    if not density.monotone_beyond_u0 or not density.monotone_verified():
        raise NotApplicableError(
            "density-floor test needs a density decreasing beyond the cutoff")

    def G(rhos):
        floor = density.envelope(rhos, which="inf")
        if np.any(floor <= 0.0):
            raise NotApplicableError("density floor vanishes on the ladder")
        return rhos ** (-d * kappa - 2.0 * d - 1.0) / floor ** (kappa + 1.0)

    start = max(r, 2.0 * density.u0 if density.u0 > 0 else r)
    return verdict_from_radial_integrand(G, start, K=K, band=band,
                                         singularity=AT_INFINITY)


def cos_moment_condition(density: RadialLevyDensity, k_lo=4, k_hi=16,
                         tol=0.05) -> bool:
    """Whether inf_x int (1 - cos<xi, y>) nu(x, dy) / |xi|^2 stays bounded
    away from 0 as xi -> 0 (dyadic liminf surrogate)."""
    rhos = 2.0 ** (-np.arange(k_lo, k_hi + 1).astype(float))
    vals = np.asarray([
        min(density.jump_symbol(rho, i) for i in range(len(density.variants)))
        / rho ** 2 for rho in rhos])
    if np.any(vals <= 0.0):
        return False
    tail = vals[len(vals) // 2:]
    slope = np.polyfit(np.log(rhos), np.log(vals), 1)[0]
    return bool(np.min(tail) > 0.0 and slope <= tol)


def quadratic_growth_floor(density: RadialLevyDensity, extra_floor=0.0,
                           k_lo=4, k_hi=16) -> bool:
    """liminf surrogate of inf_x q(x, xi) / |xi|^2 > extra_floor, where q is
    the jump symbol of the density (plus any diffusion floor the caller adds).

    This is the nondegeneracy hypothesis under which the strong-side T1 test
    becomes an equivalence for decreasing densities.
    """
    rhos = 2.0 ** (-np.arange(k_lo, k_hi + 1).astype(float))
    vals = np.asarray([
        min(density.jump_symbol(rho, i) for i in range(len(density.variants)))
        / rho ** 2 for rho in rhos])
    tail = vals[len(vals) // 2:]
    return bool(np.min(tail) > extra_floor)


# ---------------------------------------------------------------------------
# Perturbation and comparison.
# ---------------------------------------------------------------------------

def perturbation_distance(density_a: RadialLevyDensity,
                          density_b: RadialLevyDensity,
                          rotation=None) -> float:
    """sup over paired states of int |y|^2 |n_a(x, |y|) - n_b(Ox, |y|)| dy.

    Radial profiles are rotation invariant, so the rotation only re-pairs
    states; profiles are paired positionally. Returns +inf when the distance
    integral diverges (then no transfer is claimed).
    """
    if density_a.d != density_b.d:
        raise ConfigurationError("perturbation distance needs equal dimensions")
    na, nb = len(density_a.variants), len(density_b.variants)
    if na != nb and 1 not in (na, nb):
        raise ConfigurationError(
            "variant counts must match (or one density be state-independent)")
    d = density_a.d
    s_d = sphere_surface(d)
    bps = tuple(sorted(set(density_a.all_breakpoints())
                       | set(density_b.all_breakpoints())))
    worst = 0.0
    for i in range(max(na, nb)):
        va = density_a.variants[min(i, na - 1)]
        vb = density_b.variants[min(i, nb - 1)]

        def g(u, _va=va, _vb=vb):
            u = np.asarray(u, dtype=float)
            return s_d * u ** (d + 1) * np.abs(_va(u) - _vb(u))

        try:
            val = integrate_origin(g, 1.0, bps) + integrate_tail(g, 1.0, bps)
        except DivergentIntegralError:
            return float("inf")
        worst = max(worst, val)
    return worst


@dataclass(frozen=True)
class PerturbationReport:
    distance: float
    weak_side_transfer: bool
    margin_lhs: float
    margin_rhs: float
    strong_side_transfer: bool
    notes: tuple = ()

    def to_json(self):
        return {"distance": None if math.isinf(self.distance) else self.distance,
                "weak_side_transfer": self.weak_side_transfer,
                "margin_lhs": _num(self.margin_lhs),
                "margin_rhs": _num(self.margin_rhs),
                "strong_side_transfer": self.strong_side_transfer,
                "notes": list(self.notes)}


def _num(v):
    return None if not math.isfinite(v) else float(v)


def perturbation_equivalence(density_a: RadialLevyDensity,
                             density_b: RadialLevyDensity,
                             diffusion_gap=0.0,
                             rotation=None) -> PerturbationReport:
    """Transfer report between two radial models.

    A finite weighted total-variation distance between the jump measures
    transfers the weak-side classification; the strong-side classification
    additionally needs the quadratic growth of the first symbol to dominate
    half the diffusion gap plus the distance.
    """
    dist = perturbation_distance(density_a, density_b, rotation)
    weak_transfer = math.isfinite(dist)
    rhos = 2.0 ** (-np.arange(4, 17).astype(float))
    lhs_vals = [min(density_a.jump_symbol(rho, i)
                    for i in range(len(density_a.variants))) / rho ** 2
                for rho in rhos]
    lhs = float(np.min(lhs_vals[len(lhs_vals) // 2:]))
    slope = np.polyfit(np.log(rhos), np.log(np.maximum(lhs_vals, 1e-300)), 1)[0]
    if slope < -0.05:
        lhs = float("inf")   # ratio grows without bound as xi -> 0
    rhs = 0.5 * diffusion_gap + dist
    strong_transfer = weak_transfer and lhs > rhs
    notes = ()
    if not weak_transfer:
        notes = ("distance integral diverges; no transfer claimed",)
    return PerturbationReport(distance=dist, weak_side_transfer=weak_transfer,
                              margin_lhs=lhs, margin_rhs=rhs,
                              strong_side_transfer=strong_transfer,
                              notes=notes)


def model_perturbation_report(model_a, model_b, rotation=None) -> "PerturbationReport":
    """Perturbation transfer between two radial models, including the
    diffusion-coefficient gap in the margin condition."""
    da = model_a.triplet.jump_density
    db = model_b.triplet.jump_density
    if da is None or db is None:
        raise ConfigurationError(
            "perturbation report needs radial jump densities on both models")

    def c_bounds(model):
        t = model.triplet
        if t.diffusion_matrix is not None:
            ev = np.linalg.eigvalsh(t.diffusion_matrix)
            return float(ev.min()), float(ev.max())
        if t.diffusion_field is not None:
            return t.diffusion_field.bounds
        return 0.0, 0.0

    lo_a, hi_a = c_bounds(model_a)
    lo_b, hi_b = c_bounds(model_b)
    gap = max(abs(hi_a - lo_b), abs(hi_b - lo_a))
    return perturbation_equivalence(da, db, diffusion_gap=gap,
                                    rotation=rotation)


@dataclass(frozen=True)
class ComparisonReport:
    domination_ok: bool
    witness: float | None
    weak_transfer: str
    strong_transfer: str

    def to_json(self):
        return {"domination_ok": self.domination_ok, "witness": self.witness,
                "weak_transfer": self.weak_transfer,
                "strong_transfer": self.strong_transfer}


def comparison_transfer(density_a: RadialLevyDensity,
                        density_b: RadialLevyDensity,
                        u0: float, n_grid=64) -> ComparisonReport:
    """Tail-domination transfer: when density A is decreasing beyond u0 and
    its tail mass dominates B's there, weak-side divergence for A implies the
    same for B, and strong-side convergence for B implies it for A (the
    latter under A's quadratic-growth margin)."""
    if density_a.d != density_b.d:
        raise ConfigurationError("comparison needs equal dimensions")
    if not density_a.monotone_beyond_u0:
        raise NotApplicableError(
            "comparison needs the dominating density decreasing beyond u0")
    us = np.geomspace(max(u0, 1e-6) * 1.02, max(u0, 1e-6) * 2.0 ** 20, n_grid)
    for u in us:
        tm_a = min(tail_mass(density_a, u, i)
                   for i in range(len(density_a.variants)))
        tm_b = max(tail_mass(density_b, u, i)
                   for i in range(len(density_b.variants)))
        if tm_a < tm_b * (1.0 - 1e-9):
            raise NotApplicableError(
                f"tail domination fails at radius {u:g}", witness=float(u))
    return ComparisonReport(
        domination_ok=True, witness=None,
        weak_transfer="weak-side divergence for the dominating density "
                      "implies it for the dominated one (every radius)",
        strong_transfer="strong-side convergence for the dominated density "
                        "implies it for the dominating one, given the "
                        "dominating symbol's quadratic growth margin")


# ---------------------------------------------------------------------------
# Regular-variation classification of state-independent radial tails.
# ---------------------------------------------------------------------------

def rv_index_fit(density: RadialLevyDensity, u_lo=1e2, n_windows=9,
                 residual_tol=0.05) -> float:
    """Regular-variation index of the tail of a state-independent density.

    Fits the local log-log slope on a ladder of windows [U, 10U] and
    extrapolates the slopes against 1/log U; exact for power tails and for
    power tails with logarithmic corrections. Raises NonPowerTailError when
    the extrapolation does not fit.
    """
    if not density.x_independent:
        raise ConfigurationError("index fit needs a state-independent density")
    v = density.variants[0]
    u_lo = max(u_lo, 4.0 * max(density.u0, 1.0))
    slopes, inv_logs = [], []
    for j in range(n_windows):
        base = u_lo * 10.0 ** j
        us = np.geomspace(base, 10.0 * base, 12)
        vals = v(us)
        if np.any(vals <= 0.0):
            raise NonPowerTailError("density tail vanishes in the fit window")
        coef = np.polyfit(np.log(us), np.log(vals), 1)
        slopes.append(coef[0])
        inv_logs.append(1.0 / math.log(base * math.sqrt(10.0)))
    coef = np.polyfit(inv_logs, slopes, 1)
    fitted = np.polyval(coef, inv_logs)
    residual = float(np.max(np.abs(np.asarray(slopes) - fitted)))
    if residual > residual_tol:
        raise NonPowerTailError(
            f"tail is not regularly varying within tolerance "
            f"(residual {residual:.3g})", residual=residual)
    return float(coef[1])


def borderline_index_test(density: RadialLevyDensity, r=None, K=24,
                  band=DEFAULT_BAND) -> DivergenceVerdict:
    """Borderline transience test at index -2d: convergence of
    int_r^infinity drho / (rho^{2d+1} n(rho))."""
    d = density.d
    if r is None:
        r = 2.0 * max(density.u0, 1.0)

    def G(rhos):
        vals = density.envelope(rhos, which="inf")
        if np.any(vals <= 0.0):
            raise NotApplicableError("density vanishes on the test ladder")
        return 1.0 / (rhos ** (2.0 * d + 1.0) * vals)

    return verdict_from_radial_integrand(G, r, K=K, band=band,
                                         singularity=AT_INFINITY)


@dataclass(frozen=True)
class RvClassification:
    case: str
    transient: bool
    weakly_transient: bool | None
    statement: str

    def to_json(self):
        return {"case": self.case, "transient": self.transient,
                "weakly_transient": self.weakly_transient,
                "statement": self.statement}


def rv_classify(d: int, delta: float, kappa: float,
                borderline_converges: bool | None = None,
                boundary_tol=1e-9) -> RvClassification:
    """Classification table for regularly varying radial tails with index
    delta <= -d. Returns the case label, the transience flag and, when
    transient, whether the process is kappa-weakly transient.
    """
    if delta > -d + boundary_tol:
        raise ConfigurationError(
            f"regular-variation index must be <= -d, got {delta}")
    if abs(delta + d) <= boundary_tol:
        return RvClassification(
            case="vi", transient=True, weakly_transient=False,
            statement="index -d: always kappa-strongly transient")
    if d >= 3:
        if abs(delta + d + 2.0) <= boundary_tol:
            weak = 2.0 * (kappa + 1.0) > d
            return RvClassification(
                case="iii", transient=True, weakly_transient=weak,
                statement="index -d-2 (d >= 3): weak iff 2(kappa+1) > d")
        if delta < -d - 2.0:
            weak = 2.0 * (kappa + 1.0) >= d
            return RvClassification(
                case="i", transient=True, weakly_transient=weak,
                statement="index < -d-2 (d >= 3): weak iff 2(kappa+1) >= d")
        weak = d * (kappa + 2.0) + delta * (kappa + 1.0) <= 0.0
        return RvClassification(
            case="v", transient=True, weakly_transient=weak,
            statement="-d-2 < index < -d: weak iff "
                      "d(kappa+2) + index*(kappa+1) <= 0")
    # d in {1, 2}
    if abs(delta + 2.0 * d) <= boundary_tol:
        if not borderline_converges:
            return RvClassification(
                case="ii", transient=False, weakly_transient=None,
                statement="index -2d without the borderline integral test: "
                          "not transient")
        weak = 2.0 * (kappa + 1.0) > d
        return RvClassification(
            case="ii", transient=True, weakly_transient=weak,
            statement="index -2d with the borderline integral test: "
                      "weak iff 2(kappa+1) > d")
    if delta < -2.0 * d:
        return RvClassification(
            case="subcritical", transient=False, weakly_transient=None,
            statement="index below -2d in dimension <= 2: recurrent")
    if d == 1:
        weak = kappa + 2.0 + delta * (kappa + 1.0) <= 0.0
        return RvClassification(
            case="iv", transient=True, weakly_transient=weak,
            statement="-2 < index < -1 (d = 1): weak iff "
                      "kappa + 2 + index*(kappa+1) <= 0")
    weak = d * (kappa + 2.0) + delta * (kappa + 1.0) <= 0.0
    return RvClassification(
        case="v", transient=True, weakly_transient=weak,
        statement="-d-2 < index < -d (d = 2): weak iff "
                  "d(kappa+2) + index*(kappa+1) <= 0")
