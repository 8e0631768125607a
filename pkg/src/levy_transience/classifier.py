"""Rule engine: aggregate every applicable test into one transience report.

Evidence is collected in three bands with fixed precedence: closed-form
family rules (two-sided where the family admits an exact threshold), the
frequency-side and measure-side integral tests (co-equal), and the one-sided
index rules. Within the winning band, weak-side and strong-side evidence
must not conflict; a conflict is reported as Inconclusive with full trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cf_integrals import strong_integral_kappa, weak_integral_kappa
from .errors import (
    ConfigurationError,
    LevyTransienceError,
    NonPowerTailError,
    NotApplicableError,
)
from .index_rules import (
    IMPLIES_STRONG,
    IMPLIES_WEAK,
    index_bound_rules,
    moment_rules,
    pruitt_indices,
    shape_diagnostic,
)
from .levy_tails import (
    cos_moment_condition,
    rv_classify,
    borderline_index_test,
    split_tail_tests,
    quadratic_growth_floor,
    rv_index_fit,
    tail_test_strong,
    tail_test_weak,
)
from .symbols import SymbolModel, sector_check, symmetry_check
from .verdicts import CONVERGES, DIVERGES

GATE_TRANSIENT = "transient"
GATE_RECURRENT = "recurrent"
GATE_UNKNOWN = "unknown"

WEAKLY_TRANSIENT = "weakly_transient"
STRONGLY_TRANSIENT = "strongly_transient"
INCONCLUSIVE = "inconclusive"

ALL_METHODS = ("closed_form", "integral", "tail", "index")

_PRECEDENCE = {"closed_form": 3, "integral": 2, "tail": 2, "index": 1}


class NotTransientError(LevyTransienceError):
    """classify() was called on a process the gate declares recurrent."""


@dataclass(frozen=True)
class RuleRecord:
    rule_id: str
    statement: str
    verdict: str          # "weak" | "strong" | "info"
    method: str
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"id": self.rule_id, "quote_ref": self.statement,
                "verdict": self.verdict, "method": self.method,
                "detail": _jsonable(self.detail)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


@dataclass(frozen=True)
class TransienceReport:
    gate: str
    kappa: float
    verdict: str
    fired_rules: tuple
    assumptions: dict
    kappa_star: float | None = None
    conditional: tuple = ()
    notes: tuple = ()

    def to_json(self):
        return {
            "gate": self.gate,
            "kappa": self.kappa,
            "verdict": self.verdict,
            "kappa_star": self.kappa_star,
            "rules": [r.to_json() for r in self.fired_rules],
            "assumptions": _jsonable(self.assumptions),
            "conditional": list(self.conditional),
            "notes": list(self.notes),
        }


def _default_assumptions(model):
    a = dict(model.assumptions)
    a.setdefault("weak_test_hypothesis", False)
    a.setdefault("sector_constant", None)
    a.setdefault("perturbation_margin", False)
    # open-set irreducibility is established in the literature for the
    # built-in families; custom models must assert it
    a.setdefault("irreducible", model.family != "custom")
    return a


# ---------------------------------------------------------------------------
# Transience gate.
# ---------------------------------------------------------------------------

def transience_gate(model: SymbolModel, r=1.0, use_structural=True) -> str:
    """Transient / Recurrent / Unknown from structural family facts plus the
    constant-weight integral tests."""
    if use_structural:
        s = _structural_gate(model)
        if s is not None:
            return s
    strong = strong_integral_kappa(model, 0.0, r)
    if strong.decided_state == CONVERGES:
        return GATE_TRANSIENT
    weak = weak_integral_kappa(model, 0.0, r)
    assumptions = _default_assumptions(model)
    if weak.decided_state == DIVERGES and symmetry_check(model) \
            and assumptions["irreducible"]:
        return GATE_RECURRENT
    return GATE_UNKNOWN


def _structural_gate(model):
    fam, d, p = model.family, model.d, model.params
    if fam == "brownian_drift" and model.drift_vector is None:
        floor = p["c"].bounds[0] if "c" in p else float(
            np.min(np.linalg.eigvalsh(model.triplet.diffusion_matrix)))
        if floor > 0:
            return GATE_TRANSIENT if d >= 3 else GATE_RECURRENT
        return None
    if fam in ("isotropic_stable", "stable_like"):
        a_lo, a_hi = p["alpha"].bounds
        if d >= 2:
            return GATE_TRANSIENT
        if a_hi < 1.0:
            return GATE_TRANSIENT
        if model.drift_vector is None and a_lo >= 1.0:
            return GATE_RECURRENT
        return None
    if fam == "finite_jump":
        a_lo, a_hi = p["alpha"].bounds
        if d >= 3:
            return GATE_TRANSIENT
        if a_hi < d:
            return GATE_TRANSIENT
        return None
    if fam == "radial_jump":
        dens = model.triplet.jump_density
        if dens.x_independent:
            try:
                delta = _snap_rv_index(rv_index_fit(dens), d)
            except (NonPowerTailError, ConfigurationError):
                return None
            if d >= 3:
                return GATE_TRANSIENT
            if -2.0 * d < delta <= -float(d):
                return GATE_TRANSIENT
            if delta == -2.0 * d:
                borderline = borderline_index_test(dens).decided_state == CONVERGES
                return GATE_TRANSIENT if borderline else GATE_RECURRENT
            return GATE_RECURRENT
        return None
    return None


def _snap_rv_index(delta, d, tol=0.02):
    """Snap a fitted regular-variation index onto the case boundaries."""
    for boundary in (-float(d), -float(d) - 2.0, -2.0 * float(d)):
        if abs(delta - boundary) <= tol:
            return boundary
    return delta


# ---------------------------------------------------------------------------
# Closed-form family rules.
# ---------------------------------------------------------------------------

def _closed_form_rules(model, d, kappa, records):
    fam, p = model.family, model.params
    sides = []
    if fam == "brownian_drift" and model.drift_vector is None:
        floor = p["c"].bounds[0] if "c" in p else float(
            np.min(np.linalg.eigvalsh(model.triplet.diffusion_matrix)))
        if floor > 0:
            weak = d <= 2.0 * (kappa + 1.0)
            side = "weak" if weak else "strong"
            records.append(RuleRecord(
                rule_id="elliptic-moment-rule",
                statement="driftless uniformly elliptic diffusion: weakly "
                          "transient iff d <= 2(kappa+1)",
                verdict=side, method="closed_form",
                detail={"d": d, "kappa": kappa,
                        "threshold": 2.0 * (kappa + 1.0)}))
            sides.append(side)
        return sides
    if fam in ("isotropic_stable", "stable_like") \
            and model.drift_vector is None and p["alpha"].is_constant:
        alpha = p["alpha"].bounds[0]
        weak = d <= alpha * (kappa + 1.0)
        side = "weak" if weak else "strong"
        records.append(RuleRecord(
            rule_id="stable-scaling-rule",
            statement="rotation-invariant stable scaling: weakly transient "
                      "iff d/(kappa+1) <= alpha",
            verdict=side, method="closed_form",
            detail={"d": d, "kappa": kappa, "alpha": alpha}))
        sides.append(side)
        return sides
    if fam == "stable_like":
        a_lo, a_hi = p["alpha"].bounds
        has_drift = model.drift_vector is not None
        if has_drift and a_lo < 1.0 and d <= (kappa + 1.0) * a_lo:
            records.append(RuleRecord(
                rule_id="stable-like-drift-low",
                statement="drifted, lower index < 1: d <= (kappa+1)*alpha_lo "
                          "gives the weak side",
                verdict="weak", method="closed_form",
                detail={"alpha_lo": a_lo}))
            sides.append("weak")
        if has_drift and a_lo >= 1.0 and d <= (kappa + 1.0):
            records.append(RuleRecord(
                rule_id="stable-like-drift-unit",
                statement="drifted, lower index >= 1: d <= kappa+1 gives the "
                          "weak side",
                verdict="weak", method="closed_form", detail={}))
            sides.append("weak")
        if not has_drift and d <= (kappa + 1.0) * a_lo:
            records.append(RuleRecord(
                rule_id="stable-like-driftless",
                statement="driftless: d <= (kappa+1)*alpha_lo gives the weak "
                          "side",
                verdict="weak", method="closed_form",
                detail={"alpha_lo": a_lo}))
            sides.append("weak")
        if d > (kappa + 1.0) * a_hi:
            records.append(RuleRecord(
                rule_id="stable-like-strong",
                statement="d > (kappa+1)*alpha_hi gives the strong side",
                verdict="strong", method="closed_form",
                detail={"alpha_hi": a_hi}))
            sides.append("strong")
        return sides
    if fam == "finite_jump":
        a_lo, a_hi = p["alpha"].bounds
        weak = strong = False
        if a_hi < 2.0:
            weak = a_lo * (kappa + 1.0) >= d
            strong = a_hi * (kappa + 1.0) < d
            case = "tail index below 2"
        elif a_lo > 2.0:
            weak = 2.0 * (kappa + 1.0) >= d
            strong = 2.0 * (kappa + 1.0) < d
            case = "tail index above 2 (finite second moment)"
        elif a_lo == a_hi == 2.0:
            weak = 2.0 * (kappa + 1.0) > d
            strong = 2.0 * (kappa + 1.0) <= d
            case = "tail index exactly 2"
        else:
            return sides
        if weak:
            records.append(RuleRecord(
                rule_id="bounded-jump-rule", verdict="weak",
                statement=f"unit-mass power jump kernel, {case}: weak side",
                method="closed_form", detail={"alpha_lo": a_lo, "alpha_hi": a_hi}))
            sides.append("weak")
        if strong:
            records.append(RuleRecord(
                rule_id="bounded-jump-rule", verdict="strong",
                statement=f"unit-mass power jump kernel, {case}: strong side",
                method="closed_form", detail={"alpha_lo": a_lo, "alpha_hi": a_hi}))
            sides.append("strong")
        return sides
    if fam == "radial_jump":
        dens = model.triplet.jump_density
        if not dens.x_independent:
            return sides
        try:
            delta = _snap_rv_index(rv_index_fit(dens), d)
        except (NonPowerTailError, ConfigurationError):
            return sides
        borderline = None
        if delta == -2.0 * d and d <= 2:
            borderline = borderline_index_test(dens).decided_state == CONVERGES
        cls = rv_classify(d, delta, kappa, borderline_converges=borderline)
        if cls.transient and cls.weakly_transient is not None:
            side = "weak" if cls.weakly_transient else "strong"
            records.append(RuleRecord(
                rule_id=f"rv-case-{cls.case}", statement=cls.statement,
                verdict=side, method="closed_form",
                detail={"index": delta, "kappa": kappa}))
            sides.append(side)
        return sides
    return sides


# ---------------------------------------------------------------------------
# classify and the boundary search.
# ---------------------------------------------------------------------------

def classify(model: SymbolModel, kappa: float, d=None, r=1.0,
             methods=ALL_METHODS, gate=None) -> TransienceReport:
    """Full per-kappa classification with rule provenance."""
    if d is None:
        d = model.d
    if d != model.d:
        raise ConfigurationError(f"model dimension {model.d} != requested {d}")
    if kappa < 0:
        raise ConfigurationError(f"kappa must be >= 0, got {kappa}")
    if gate is None:
        gate = transience_gate(model, r)
    if gate == GATE_RECURRENT:
        raise NotTransientError(
            "process is not transient; weak/strong transience is undefined")
    assumptions = _default_assumptions(model)
    records: list[RuleRecord] = []
    evidence = {}   # method band -> set of sides
    notes = []

    if "closed_form" in methods:
        sides = _closed_form_rules(model, d, kappa, records)
        if sides:
            evidence["closed_form"] = set(sides)

    sector_ok = None
    if "integral" in methods:
        weak_v = weak_integral_kappa(model, kappa, r)
        strong_v = strong_integral_kappa(model, kappa, r)
        sides = set()
        if weak_v.decided_state == DIVERGES:
            records.append(RuleRecord(
                rule_id="cf-weak-integral",
                statement="small-frequency integral of (sup|q|)^{-(kappa+1)} "
                          "diverges",
                verdict="weak", method="integral",
                detail=weak_v.to_json()))
            sides.add("weak")
        if strong_v.decided_state == CONVERGES:
            sector_ok = _sector_constant(model, assumptions)
            records.append(RuleRecord(
                rule_id="cf-strong-integral",
                statement="small-frequency integral of (inf Re q)^{-(kappa+1)} "
                          "converges",
                verdict="strong", method="integral",
                detail=dict(strong_v.to_json(),
                            sector_constant=sector_ok)))
            sides.add("strong")
            if sector_ok is None:
                notes.append("strong-side evidence lacks a verified sector "
                             "constant; conditional")
        if sides:
            evidence.setdefault("integral", set()).update(sides)

    if "tail" in methods and model.triplet.jump_density is not None \
            and model.drift_vector is None:
        dens = model.triplet.jump_density
        try:
            tw = tail_test_weak(dens, d, kappa, max(r, 2.0 * dens.u0, 1.0))
            if tw.decided_state == DIVERGES:
                records.append(RuleRecord(
                    rule_id="tail-weak",
                    statement="integrated-tail sup test diverges",
                    verdict="weak", method="tail", detail=tw.to_json()))
                evidence.setdefault("tail", set()).add("weak")
            ts = tail_test_strong(dens, d, kappa, max(r, 2.0 * dens.u0, 1.0))
            if ts.decided_state == CONVERGES:
                iff_ok = dens.monotone_beyond_u0 \
                    and dens.monotone_verified() and (
                        quadratic_growth_floor(dens, extra_floor=0.0)
                        or assumptions["perturbation_margin"])
                if iff_ok:
                    records.append(RuleRecord(
                        rule_id="tail-strong",
                        statement="integrated-tail inf test converges "
                                  "(equivalence hypotheses verified)",
                        verdict="strong", method="tail", detail=ts.to_json()))
                    evidence.setdefault("tail", set()).add("strong")
                else:
                    records.append(RuleRecord(
                        rule_id="tail-strong-consistent",
                        statement="integrated-tail inf test converges "
                                  "(necessary for the strong side)",
                        verdict="info", method="tail", detail=ts.to_json()))
            split = split_tail_tests(dens, d, kappa, max(r, 2.0 * dens.u0, 1.0))
            if split.strong_second_moment.decided_state == CONVERGES \
                    and cos_moment_condition(dens):
                records.append(RuleRecord(
                    rule_id="cos-moment-strong",
                    statement="truncated-moment tail test converges and the "
                              "cosine-moment floor is positive",
                    verdict="strong", method="tail",
                    detail=split.strong_second_moment.to_json()))
                evidence.setdefault("tail", set()).add("strong")
        except (NotApplicableError, NonPowerTailError) as exc:
            notes.append(f"tail tests not applicable: {exc}")

    if "index" in methods:
        try:
            idx = pruitt_indices(model)
            first, second = index_bound_rules(d, kappa, idx)
            for out in (first, second):
                if out.conclusion == IMPLIES_WEAK:
                    records.append(RuleRecord(
                        rule_id=out.rule, statement=out.statement,
                        verdict="weak", method="index", detail=out.premises))
                    evidence.setdefault("index", set()).add("weak")
                elif out.conclusion == IMPLIES_STRONG:
                    records.append(RuleRecord(
                        rule_id=out.rule, statement=out.statement,
                        verdict="strong", method="index", detail=out.premises))
                    evidence.setdefault("index", set()).add("strong")
            m_first, m_second = moment_rules(model, d, kappa)
            for out in (m_first, m_second):
                if out.conclusion == IMPLIES_WEAK:
                    records.append(RuleRecord(
                        rule_id=out.rule, statement=out.statement,
                        verdict="weak", method="index", detail=out.premises))
                    evidence.setdefault("index", set()).add("weak")
                elif out.conclusion == IMPLIES_STRONG:
                    records.append(RuleRecord(
                        rule_id=out.rule, statement=out.statement,
                        verdict="strong", method="index", detail=out.premises))
                    evidence.setdefault("index", set()).add("strong")
            for out in shape_diagnostic(model, kappa, d):
                if out.conclusion == IMPLIES_STRONG:
                    records.append(RuleRecord(
                        rule_id=out.rule, statement=out.statement,
                        verdict="strong", method="index", detail=out.premises))
                    evidence.setdefault("index", set()).add("strong")
        except LevyTransienceError as exc:
            notes.append(f"index rules skipped: {exc}")

    verdict, conditional = _aggregate(model, evidence, assumptions, notes)
    return TransienceReport(
        gate=gate, kappa=kappa, verdict=verdict,
        fired_rules=tuple(records), assumptions=assumptions,
        conditional=tuple(conditional), notes=tuple(notes))


def _sector_constant(model, assumptions):
    asserted = assumptions.get("sector_constant")
    candidates = [asserted] if asserted is not None else [0.0, 0.5, 0.9, 0.99]
    for c in candidates:
        ok, _ = sector_check(model, c)
        if ok:
            return c
    return None


def _aggregate(model, evidence, assumptions, notes):
    order = sorted(evidence, key=lambda m: _PRECEDENCE[m], reverse=True)
    conditional = []
    for band_level in (3, 2, 1):
        sides = set()
        for m in order:
            if _PRECEDENCE[m] == band_level:
                sides |= evidence[m]
        if not sides:
            continue
        if sides == {"weak", "strong"}:
            notes.append("conflicting weak and strong evidence at the same "
                         "precedence; reporting inconclusive")
            return INCONCLUSIVE, conditional
        side = sides.pop()
        if side == "weak":
            unconditional = model.is_state_independent and symmetry_check(model)
            if not unconditional and not assumptions["weak_test_hypothesis"]:
                conditional.append(
                    "weak verdict is conditional on the weak-test hypothesis "
                    "for state-dependent symbols")
            return WEAKLY_TRANSIENT, conditional
        sector = _sector_constant(model, assumptions)
        if sector is None:
            conditional.append(
                "strong verdict is conditional on the sector condition")
        return STRONGLY_TRANSIENT, conditional
    return INCONCLUSIVE, conditional


def kappa_boundary(model: SymbolModel, tol=0.01, lo=0.0, hi=8.0, r=1.0,
                   methods=ALL_METHODS) -> float:
    """Bisection for the kappa separating strong from weak transience."""
    gate = transience_gate(model, r)
    if gate == GATE_RECURRENT:
        raise NotTransientError("process is not transient; no boundary exists")

    def probe(kappa):
        rep = classify(model, kappa, r=r, methods=methods, gate=gate)
        if rep.verdict != INCONCLUSIVE:
            return rep.verdict
        refined = weak_integral_kappa(model, kappa, r).decided_state
        return WEAKLY_TRANSIENT if refined == DIVERGES else STRONGLY_TRANSIENT

    v_lo, v_hi = probe(lo), probe(hi)
    if v_lo == v_hi:
        raise ConfigurationError(
            f"no weak/strong boundary in kappa range [{lo}, {hi}]: both ends "
            f"classify as {v_lo}")
    if v_lo != STRONGLY_TRANSIENT:
        raise ConfigurationError(
            "expected strong transience at the low end of the kappa range")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if probe(mid) == WEAKLY_TRANSIENT:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
