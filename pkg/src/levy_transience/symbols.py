"""Levy-type process families: symbol evaluation and state envelopes.

A model couples a Levy triplet (drift b(x), diffusion C(x), jump measure
nu(x, dy)) with evaluators for the symbol

    q(x, xi) = -i<xi, b(x)> + 0.5 <xi, C(x) xi>
               + int (1 - e^{i<xi,y>} + i<xi,y> 1_{B(0,1)}(y)) nu(x, dy)

and for the three envelopes every downstream test consumes:
sup_x |q(x, xi)|, inf_x Re q(x, xi) and sup_x |Im q(x, xi)|.
Built-in jump kernels are radial, so their compensated drift term vanishes
and the jump part reduces to a one-dimensional integral.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .densities import (
    RadialLevyDensity,
    finite_range_density,
    power_density,
    power_log_density,
    stable_density,
    table_density,
)
from .errors import ConfigurationError, DegenerateModelError, ModelInvariantError

ENV_SUP_ABS = "sup_abs"
ENV_INF_RE = "inf_re"
ENV_SUP_ABS_IM = "sup_abs_im"


# ---------------------------------------------------------------------------
# Scalar coefficient fields x -> value.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField:
    """State-dependent scalar coefficient with known exact bounds.

    kind "const" or "interval"; interval fields vary through a bounded smooth
    (or step) profile of the first coordinate, so sup/inf over all states are
    exactly `hi`/`lo`.
    """

    kind: str
    value: float = 0.0
    lo: float = 0.0
    hi: float = 0.0
    profile: str = "cos"

    @staticmethod
    def make(spec):
        if isinstance(spec, ScalarField):
            return spec
        if isinstance(spec, (int, float)):
            return ScalarField(kind="const", value=float(spec))
        if isinstance(spec, dict):
            return ScalarField(kind="interval", lo=float(spec["lo"]),
                               hi=float(spec["hi"]),
                               profile=spec.get("profile", "cos"))
        if isinstance(spec, (tuple, list)) and len(spec) in (2, 3):
            profile = spec[2] if len(spec) == 3 else "cos"
            return ScalarField(kind="interval", lo=float(spec[0]),
                               hi=float(spec[1]), profile=profile)
        raise ConfigurationError(f"cannot interpret scalar field spec {spec!r}")

    @property
    def bounds(self):
        if self.kind == "const":
            return (self.value, self.value)
        return (self.lo, self.hi)

    @property
    def is_constant(self):
        lo, hi = self.bounds
        return lo == hi

    @property
    def is_even(self):
        return self.kind == "const" or self.profile == "cos"

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        x1 = X[..., 0]
        if self.kind == "const":
            return np.full_like(x1, self.value)
        if self.profile == "cos":
            w = 0.5 * (1.0 + np.cos(x1))
        elif self.profile == "sin":
            w = 0.5 * (1.0 + np.sin(x1))
        elif self.profile == "step":
            w = (x1 > 0).astype(float)
        else:
            raise ConfigurationError(f"unknown field profile {self.profile!r}")
        return self.lo + (self.hi - self.lo) * w

    def to_json(self):
        if self.kind == "const":
            return self.value
        return {"lo": self.lo, "hi": self.hi, "profile": self.profile}


@dataclass(frozen=True)
class StateGrid:
    """Sampling box for grid-based envelopes: [lo, hi]^d, m points per axis."""

    box: tuple = (-10.0, 10.0)
    points_per_axis: int = 21

    def points(self, d):
        m = self.points_per_axis
        if m < 1:
            raise ConfigurationError("state grid needs at least one point per axis")
        # cap the product grid so high-dimensional boxes stay tractable
        while m > 1 and m ** d > 200_000:
            m -= 2
        axis = np.linspace(self.box[0], self.box[1], m)
        mesh = np.meshgrid(*([axis] * d), indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)


@dataclass(frozen=True)
class LevyTriplet:
    """Drift, diffusion and jump data of a model.

    diffusion is either a ScalarField c(x) (meaning C(x) = c(x) I) or a
    constant symmetric PSD matrix.
    """

    d: int
    drift: np.ndarray | None = None
    diffusion_field: ScalarField | None = None
    diffusion_matrix: np.ndarray | None = None
    jump_density: RadialLevyDensity | None = None

    def __post_init__(self):
        if self.diffusion_matrix is not None:
            C = np.asarray(self.diffusion_matrix, dtype=float)
            if C.shape != (self.d, self.d):
                raise ModelInvariantError("diffusion matrix has wrong shape")
            if not np.allclose(C, C.T, atol=1e-12):
                raise ModelInvariantError("diffusion matrix must be symmetric")
            if np.min(np.linalg.eigvalsh(C)) < -1e-12:
                raise ModelInvariantError("diffusion matrix must be PSD")
        if self.diffusion_field is not None:
            if self.diffusion_field.bounds[0] < 0:
                raise ModelInvariantError("diffusion coefficient must be >= 0")

    def diffusion_quadratic(self, X, xi):
        """0.5 <xi, C(x) xi> for a batch of states X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.diffusion_matrix is not None:
            val = 0.5 * float(xi @ self.diffusion_matrix @ xi)
            return np.full(X.shape[0], val)
        if self.diffusion_field is not None:
            return 0.5 * self.diffusion_field(X) * float(xi @ xi)
        return np.zeros(X.shape[0])


# ---------------------------------------------------------------------------
# The model.
# ---------------------------------------------------------------------------

FAMILIES = ("brownian_drift", "isotropic_stable", "stable_like",
            "radial_jump", "finite_jump", "custom")


@dataclass(frozen=True)
class SymbolModel:
    family: str
    d: int
    triplet: LevyTriplet
    params: dict
    envelope_mode: str = "closed_form"   # or "grid_sampled"
    state_grid: StateGrid = StateGrid()
    assumptions: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}")
        if self.envelope_mode not in ("closed_form", "grid_sampled"):
            raise ConfigurationError(f"unknown envelope mode {self.envelope_mode!r}")
        probe = max(abs(eval_symbol(self, None, 0.7 * _unit(self.d))),
                    abs(eval_symbol(self, None, 1.3 * _unit(self.d))))
        if probe == 0.0:
            raise DegenerateModelError("symbol vanishes identically")

    # -- convenience accessors ----------------------------------------------

    @property
    def is_state_independent(self):
        if self.family in ("brownian_drift", "isotropic_stable"):
            return all(f.is_constant for f in self._scalar_fields())
        if self.family in ("stable_like", "radial_jump", "finite_jump"):
            dens = self.triplet.jump_density
            dens_ok = dens is None or dens.x_independent
            return dens_ok and all(f.is_constant for f in self._scalar_fields())
        return bool(self.params.get("x_independent", False))

    def _scalar_fields(self):
        out = []
        for key in ("alpha", "gamma", "c"):
            f = self.params.get(key)
            if isinstance(f, ScalarField):
                out.append(f)
        return out

    @property
    def drift_vector(self):
        b = self.triplet.drift
        return None if b is None or not np.any(b) else b

    def state_points(self):
        return self.state_grid.points(self.d)

    def assumption(self, key, default=None):
        return self.assumptions.get(key, default)


def _unit(d):
    e = np.zeros(d)
    e[0] = 1.0
    return e


def _as_xi(xi, d):
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.size == 1 and d == 1:
        return xi
    if xi.size != d:
        raise ConfigurationError(f"frequency vector has size {xi.size}, expected {d}")
    return xi


# ---------------------------------------------------------------------------
# Symbol evaluation.
# ---------------------------------------------------------------------------

def eval_symbol(model: SymbolModel, x, xi) -> complex:
    """q(x, xi). For state-independent families x may be None."""
    xi = _as_xi(xi, model.d)
    if not np.any(xi):
        return 0j
    if x is None:
        X = np.zeros((1, model.d))
    else:
        X = np.atleast_2d(np.asarray(x, dtype=float))
    return complex(eval_symbol_batch(model, X, xi)[0])


def eval_symbol_batch(model: SymbolModel, X, xi) -> np.ndarray:
    """q(x, xi) for a batch of states X with shape (n, d)."""
    xi = _as_xi(xi, model.d)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if not np.any(xi):
        return np.zeros(n, dtype=complex)
    fam = model.family
    p = model.params
    rho = float(np.linalg.norm(xi))
    if fam == "brownian_drift":
        re = model.triplet.diffusion_quadratic(X, xi)
        im = np.zeros(n)
        if model.triplet.drift is not None:
            im = -np.full(n, float(xi @ model.triplet.drift))
        return re + 1j * im
    if fam == "isotropic_stable":
        val = p["gamma"].value * rho ** p["alpha"].value
        return np.full(n, val, dtype=complex)
    if fam == "stable_like":
        alpha = p["alpha"](X)
        gamma = p["gamma"](X)
        re = gamma * rho ** alpha
        im = np.zeros(n)
        if model.triplet.drift is not None:
            im = -np.full(n, float(xi @ model.triplet.drift))
        return re + 1j * im
    if fam in ("radial_jump", "finite_jump"):
        dens = model.triplet.jump_density
        vals = np.empty(n)
        for i, xrow in enumerate(X):
            vi = _variant_for_state(model, xrow)
            vals[i] = _cached_jump_symbol(model, vi, rho)
        return vals.astype(complex)
    if fam == "custom":
        fn = p["eval_fn"]
        return np.asarray([complex(fn(xrow, xi)) for xrow in X])
    raise ConfigurationError(f"unknown family {fam!r}")


def _variant_for_state(model, x):
    dens = model.triplet.jump_density
    if dens.x_independent or len(dens.variants) == 1:
        return 0
    alpha = model.params.get("alpha")
    if isinstance(alpha, ScalarField) and not alpha.is_constant:
        a = float(alpha(np.atleast_2d(x))[0])
        labels = [float(v.label.split("alpha=")[1].split(",")[0])
                  for v in dens.variants]
        return int(np.argmin(np.abs(np.asarray(labels) - a)))
    return 0


def _cached_jump_symbol(model, variant, rho):
    key = ("jump", variant, float(rho))
    cache = model._cache
    if key not in cache:
        cache[key] = model.triplet.jump_density.jump_symbol(rho, variant)
    return cache[key]


# ---------------------------------------------------------------------------
# Envelopes.
# ---------------------------------------------------------------------------

def sup_abs_symbol(model: SymbolModel, xi) -> float:
    """sup over states of |q(x, xi)|."""
    return _envelope(model, ENV_SUP_ABS, xi)


def inf_re_symbol(model: SymbolModel, xi) -> float:
    """inf over states of Re q(x, xi)."""
    return _envelope(model, ENV_INF_RE, xi)


def sup_abs_im_symbol(model: SymbolModel, xi) -> float:
    """sup over states of |Im q(x, xi)|."""
    return _envelope(model, ENV_SUP_ABS_IM, xi)


def _envelope(model, kind, xi):
    xi = _as_xi(xi, model.d)
    if not np.any(xi):
        return 0.0
    if model.envelope_mode == "closed_form":
        val = _closed_envelope(model, kind, xi)
        if val is not None:
            return val
    return _grid_envelope(model, kind, xi)


def _closed_envelope(model, kind, xi):
    fam = model.family
    p = model.params
    rho = float(np.linalg.norm(xi))
    drift = model.triplet.drift
    drift_term = abs(float(xi @ drift)) if drift is not None else 0.0
    if fam == "brownian_drift":
        if model.triplet.diffusion_matrix is not None:
            re = 0.5 * float(xi @ model.triplet.diffusion_matrix @ xi)
            re_lo = re_hi = re
        else:
            c_lo, c_hi = p["c"].bounds
            re_lo, re_hi = 0.5 * c_lo * rho ** 2, 0.5 * c_hi * rho ** 2
        if kind == ENV_INF_RE:
            return re_lo
        if kind == ENV_SUP_ABS_IM:
            return drift_term
        return math.hypot(drift_term, re_hi)
    if fam == "isotropic_stable":
        val = p["gamma"].value * rho ** p["alpha"].value
        return 0.0 if kind == ENV_SUP_ABS_IM else val
    if fam == "stable_like":
        a_lo, a_hi = p["alpha"].bounds
        g_lo, g_hi = p["gamma"].bounds
        if not (p["alpha"].is_constant or p["gamma"].is_constant):
            return None   # joint variation: fall back to the state grid
        pow_lo = min(rho ** a_lo, rho ** a_hi)
        pow_hi = max(rho ** a_lo, rho ** a_hi)
        if kind == ENV_INF_RE:
            return g_lo * pow_lo
        if kind == ENV_SUP_ABS_IM:
            return drift_term
        return math.hypot(drift_term, g_hi * pow_hi)
    if fam in ("radial_jump", "finite_jump"):
        dens = model.triplet.jump_density
        if kind == ENV_SUP_ABS_IM:
            return 0.0
        which = "inf" if kind == ENV_INF_RE else "sup"
        vals = [_cached_jump_symbol(model, i, rho)
                for i in range(len(dens.variants))]
        return min(vals) if which == "inf" else max(vals)
    if fam == "custom":
        env = p.get("envelopes") or {}
        fn = env.get(kind)
        return None if fn is None else float(fn(xi))
    return None


def _grid_envelope(model, kind, xi):
    if model.family == "custom" and "x_samples" in model.params:
        X = np.atleast_2d(np.asarray(model.params["x_samples"], dtype=float))
    else:
        X = model.state_points()
    if X.size == 0:
        raise ConfigurationError("empty state grid")
    q = eval_symbol_batch(model, X, xi)
    if kind == ENV_SUP_ABS:
        return float(np.max(np.abs(q)))
    if kind == ENV_INF_RE:
        return float(np.min(q.real))
    return float(np.max(np.abs(q.imag)))


def direction_set(d, n):
    """Deterministic, reasonably uniform set of unit directions."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    gen = np.random.Generator(np.random.Philox(key=[0x9E3779B97F4A7C15, d]))
    raw = gen.standard_normal((n, d))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def envelope_is_radial(model: SymbolModel, kind) -> bool:
    """Whether the envelope, as a function of xi, is rotation invariant."""
    fam = model.family
    if fam in ("isotropic_stable", "radial_jump", "finite_jump"):
        return True
    has_drift = model.drift_vector is not None
    if fam == "brownian_drift":
        iso = model.triplet.diffusion_matrix is None or _matrix_isotropic(
            model.triplet.diffusion_matrix)
        if kind == ENV_INF_RE:
            return iso
        return iso and (not has_drift or model.d == 1)
    if fam == "stable_like":
        if kind == ENV_INF_RE:
            return True
        return not has_drift or model.d == 1
    # custom: numeric sampling over rotations
    return _numeric_radial(model, kind)


def _matrix_isotropic(C):
    C = np.asarray(C, dtype=float)
    return np.allclose(C, C[0, 0] * np.eye(C.shape[0]), atol=1e-12)


def _numeric_radial(model, kind, n_rotations=6, tol=1e-6):
    gen = np.random.Generator(np.random.Philox(key=[0xA5A5A5A5, model.d]))
    for rho in (0.25, 1.0, 3.0):
        base = _envelope(model, kind, rho * _unit(model.d))
        for _ in range(n_rotations):
            O = _random_rotation(model.d, gen)
            val = _envelope(model, kind, rho * (O @ _unit(model.d)))
            if abs(val - base) > tol * (1.0 + abs(base)):
                return False
    return True


def _random_rotation(d, gen):
    if d == 1:
        return np.array([[-1.0]])
    M = gen.standard_normal((d, d))
    Q, R = np.linalg.qr(M)
    return Q * np.sign(np.diag(R))


def envelope_profile(model: SymbolModel, kind, rhos, reduce="min",
                     n_directions=16) -> np.ndarray:
    """Envelope values along radii, reduced over directions.

    For radial envelopes a single direction suffices; otherwise the envelope
    is evaluated along a deterministic direction set and reduced with min or
    max per radius.
    """
    rhos = np.asarray(rhos, dtype=float)
    if envelope_is_radial(model, kind):
        dirs = _unit(model.d)[None, :]
    else:
        dirs = direction_set(model.d, n_directions)
    vals = np.empty((dirs.shape[0], rhos.size))
    for i, u in enumerate(dirs):
        for j, r in enumerate(rhos):
            vals[i, j] = _envelope(model, kind, r * u)
    return vals.min(axis=0) if reduce == "min" else vals.max(axis=0)


# ---------------------------------------------------------------------------
# Structural checks.
# ---------------------------------------------------------------------------

def sector_check(model: SymbolModel, c: float, n_directions=16,
                 radii=None):
    """Check sup|Im q| <= c * inf Re q on a frequency grid.

    Returns (ok, witness): witness is a violating xi when ok is False.
    """
    if not 0.0 <= c < 1.0:
        raise ConfigurationError(f"sector constant must lie in [0,1), got {c}")
    if radii is None:
        radii = 2.0 ** np.arange(-10, 4).astype(float)
    dirs = direction_set(model.d, n_directions)
    for r in radii:
        for u in dirs:
            xi = r * u
            im = sup_abs_im_symbol(model, xi)
            re = inf_re_symbol(model, xi)
            if im > c * re + 1e-12 * (1.0 + re):
                return False, xi
    return True, None


def radiality_check(model: SymbolModel) -> bool:
    """True when b = 0, C(x) = c(x) I and the jump kernel is rotation
    invariant; structural for built-in families, sampled for custom ones."""
    fam = model.family
    if fam == "custom":
        return _numeric_radial(model, ENV_SUP_ABS)
    if model.drift_vector is not None:
        return False
    if model.triplet.diffusion_matrix is not None and not _matrix_isotropic(
            model.triplet.diffusion_matrix):
        return False
    return True


def symmetry_check(model: SymbolModel, n_samples=24, tol=1e-8) -> bool:
    """Sampled check of q(x, xi) = q(-x, -xi)."""
    gen = np.random.Generator(np.random.Philox(key=[0xC0FFEE, model.d]))
    lo, hi = model.state_grid.box
    for _ in range(n_samples):
        x = gen.uniform(lo, hi, size=model.d)
        xi = gen.standard_normal(model.d) * gen.choice([0.1, 1.0, 3.0])
        a = eval_symbol(model, x, xi)
        b = eval_symbol(model, -x, -xi)
        if abs(a - b) > tol * (1.0 + abs(a)):
            return False
    return True


def symbol_even_in_xi(model: SymbolModel, n_samples=16, tol=1e-8) -> bool:
    """Sampled check of q(x, xi) = q(x, -xi) (zero drift, symmetric jumps)."""
    gen = np.random.Generator(np.random.Philox(key=[0xBEEF, model.d]))
    lo, hi = model.state_grid.box
    for _ in range(n_samples):
        x = gen.uniform(lo, hi, size=model.d)
        xi = gen.standard_normal(model.d)
        if abs(eval_symbol(model, x, xi) - eval_symbol(model, x, -xi)) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Family constructors.
# ---------------------------------------------------------------------------

def brownian_drift(d, drift=None, c=1.0, C=None, envelope_mode="closed_form",
                   state_grid=StateGrid(), assumptions=None):
    b = None if drift is None else np.asarray(drift, dtype=float).reshape(d)
    params = {}
    if C is not None:
        triplet = LevyTriplet(d=d, drift=b,
                              diffusion_matrix=np.asarray(C, dtype=float))
    else:
        cf = ScalarField.make(c)
        params["c"] = cf
        triplet = LevyTriplet(d=d, drift=b, diffusion_field=cf)
    return SymbolModel(family="brownian_drift", d=d, triplet=triplet,
                       params=params, envelope_mode=envelope_mode,
                       state_grid=state_grid, assumptions=assumptions or {})


def isotropic_stable(d, alpha, gamma=1.0, envelope_mode="closed_form",
                     assumptions=None):
    if not (0.0 < alpha < 2.0):
        raise ModelInvariantError(f"stable index must lie in (0,2), got {alpha}")
    if gamma <= 0:
        raise ModelInvariantError(f"stable scale must be positive, got {gamma}")
    dens = stable_density(d, alpha, gamma)
    triplet = LevyTriplet(d=d, jump_density=dens)
    params = {"alpha": ScalarField.make(alpha), "gamma": ScalarField.make(gamma)}
    return SymbolModel(family="isotropic_stable", d=d, triplet=triplet,
                       params=params, envelope_mode=envelope_mode,
                       assumptions=assumptions or {})


def stable_like(d, alpha, beta=None, gamma=1.0, envelope_mode="closed_form",
                state_grid=StateGrid(), assumptions=None):
    af = ScalarField.make(alpha)
    gf = ScalarField.make(gamma)
    a_lo, a_hi = af.bounds
    if not (0.0 < a_lo <= a_hi < 2.0):
        raise ModelInvariantError(
            f"stable-like index range must lie in (0,2), got [{a_lo}, {a_hi}]")
    if gf.bounds[0] <= 0:
        raise ModelInvariantError("stable-like scale must be bounded away from 0")
    b = None if beta is None else np.asarray(beta, dtype=float).reshape(d)
    dens = stable_density(d, af.bounds if not af.is_constant else a_lo,
                          gf.bounds if not gf.is_constant else gf.value)
    triplet = LevyTriplet(d=d, drift=b, jump_density=dens)
    params = {"alpha": af, "gamma": gf}
    return SymbolModel(family="stable_like", d=d, triplet=triplet,
                       params=params, envelope_mode=envelope_mode,
                       state_grid=state_grid, assumptions=assumptions or {})


def radial_jump_model(density: RadialLevyDensity, envelope_mode="closed_form",
                      params=None, assumptions=None):
    triplet = LevyTriplet(d=density.d, jump_density=density)
    return SymbolModel(family="radial_jump", d=density.d, triplet=triplet,
                       params=params or {}, envelope_mode=envelope_mode,
                       assumptions=assumptions or {})


def finite_jump_model(d, alpha, envelope_mode="closed_form", assumptions=None):
    af = ScalarField.make(alpha)
    dens = finite_range_density(d, af.bounds if not af.is_constant else af.value)
    triplet = LevyTriplet(d=d, jump_density=dens)
    return SymbolModel(family="finite_jump", d=d, triplet=triplet,
                       params={"alpha": af}, envelope_mode=envelope_mode,
                       assumptions=assumptions or {})


def custom_model(d, eval_fn, envelopes=None, x_samples=None,
                 envelope_mode="grid_sampled", state_grid=StateGrid(),
                 assumptions=None, x_independent=False):
    params = {"eval_fn": eval_fn, "x_independent": x_independent}
    if envelopes:
        params["envelopes"] = envelopes
    if x_samples is not None:
        params["x_samples"] = np.asarray(x_samples, dtype=float)
    triplet = LevyTriplet(d=d)
    mode = "closed_form" if envelopes else envelope_mode
    return SymbolModel(family="custom", d=d, triplet=triplet, params=params,
                       envelope_mode=mode, state_grid=state_grid,
                       assumptions=assumptions or {})


# ---------------------------------------------------------------------------
# Model files.
# ---------------------------------------------------------------------------

def density_from_spec(d, spec):
    kind = spec.get("kind", "power")
    if kind in ("power", "radial_density"):
        return power_density(d, alpha=_range_or_const(spec["alpha"]),
                             coeff=_range_or_const(spec.get("coeff", 1.0)),
                             u0=float(spec.get("u0", 0.0)))
    if kind == "stable":
        return stable_density(d, alpha=_range_or_const(spec["alpha"]),
                              gamma=_range_or_const(spec.get("gamma", 1.0)))
    if kind == "power_log":
        return power_log_density(d, exponent=float(spec["exponent"]),
                                 log_exponent=float(spec["log_exponent"]),
                                 coeff=float(spec.get("coeff", 1.0)),
                                 u_start=float(spec.get("u_start", math.e)))
    if kind == "table":
        return table_density(d, spec["u"], spec["n"],
                             u0=float(spec.get("u0", 0.0)),
                             monotone=bool(spec.get("monotone", True)))
    raise ConfigurationError(f"unknown density kind {kind!r}")


def _range_or_const(v):
    if isinstance(v, dict):
        return (float(v["lo"]), float(v["hi"]))
    if isinstance(v, (list, tuple)):
        return (float(v[0]), float(v[1]))
    return float(v)


def model_from_config(cfg: dict) -> SymbolModel:
    """Build a model from a parsed JSON config (schema in the README)."""
    try:
        family = cfg["family"]
        d = int(cfg["d"])
    except KeyError as exc:
        raise ConfigurationError(f"model config missing field {exc}") from exc
    params = cfg.get("parameters", {})
    mode = cfg.get("envelope_mode", "closed_form")
    sg = cfg.get("state_grid")
    grid = StateGrid(tuple(sg["box"]), int(sg.get("points_per_axis", 21))) \
        if sg else StateGrid()
    assumptions = dict(cfg.get("assumptions", {}))
    if family == "brownian_drift":
        return brownian_drift(d, drift=params.get("b"),
                              c=params.get("c", 1.0) if "C" not in params else 1.0,
                              C=params.get("C"), envelope_mode=mode,
                              state_grid=grid, assumptions=assumptions)
    if family == "isotropic_stable":
        return isotropic_stable(d, float(params["alpha"]),
                                float(params.get("gamma", 1.0)),
                                envelope_mode=mode, assumptions=assumptions)
    if family == "stable_like":
        beta = params.get("beta")
        if beta is not None and not np.any(np.asarray(beta, dtype=float)):
            beta = None
        return stable_like(d, alpha=params["alpha"], beta=beta,
                           gamma=params.get("gamma", 1.0), envelope_mode=mode,
                           state_grid=grid, assumptions=assumptions)
    if family == "radial_jump":
        dens = density_from_spec(d, params["density"])
        return radial_jump_model(dens, envelope_mode=mode,
                                 assumptions=assumptions)
    if family == "finite_jump":
        return finite_jump_model(d, alpha=params["alpha"], envelope_mode=mode,
                                 assumptions=assumptions)
    raise ConfigurationError(f"family {family!r} is not loadable from JSON")


def load_model(path) -> SymbolModel:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
    except OSError as exc:
        raise ConfigurationError(f"cannot read model file {path}: {exc}") from exc
    return model_from_config(cfg)
