import json

import numpy as np
import pytest

from levy_transience.classifier import (
    GATE_RECURRENT,
    GATE_TRANSIENT,
    INCONCLUSIVE,
    STRONGLY_TRANSIENT,
    WEAKLY_TRANSIENT,
    NotTransientError,
    classify,
    kappa_boundary,
    transience_gate,
)
from levy_transience.errors import ConfigurationError
from levy_transience.symbols import (
    brownian_drift,
    isotropic_stable,
    stable_like,
)


def test_gate_examples(bm3, stable_05_d1, stable_15_d1):
    assert transience_gate(bm3) == GATE_TRANSIENT
    assert transience_gate(brownian_drift(2)) == GATE_RECURRENT
    assert transience_gate(stable_05_d1) == GATE_TRANSIENT
    assert transience_gate(stable_15_d1) == GATE_RECURRENT


def test_gate_integral_fallback_agrees(bm3, stable_05_d1, stable_15_d1):
    for model in (bm3, brownian_drift(2), stable_05_d1, stable_15_d1):
        assert transience_gate(model) == transience_gate(
            model, use_structural=False)


def test_classify_examples(bm3, stable_05_d1):
    rep = classify(bm3, 0.6)
    assert rep.verdict == WEAKLY_TRANSIENT
    rep = classify(stable_05_d1, 0.5)
    assert rep.verdict == STRONGLY_TRANSIENT
    rep = classify(stable_like(3, alpha=(1.2, 1.5), gamma=1.0), 1.6)
    assert rep.verdict == WEAKLY_TRANSIENT
    assert any(r.rule_id == "stable-like-driftless" for r in rep.fired_rules)


def test_classify_requires_transience(stable_15_d1):
    with pytest.raises(NotTransientError):
        classify(stable_15_d1, 1.0)


def test_classify_inconclusive_between_interval_bounds():
    model = stable_like(3, alpha=(1.2, 1.5), gamma=1.0)
    rep = classify(model, 1.2)   # between d/alpha_hi - 1 = 1 and d/alpha_lo - 1 = 1.5
    assert rep.verdict == INCONCLUSIVE


def test_kappa_boundary_examples(bm3, stable_05_d1, stable_10_d3):
    assert kappa_boundary(bm3, tol=0.01) == pytest.approx(0.5, abs=0.02)
    assert kappa_boundary(stable_05_d1, tol=0.01) == pytest.approx(1.0, abs=0.02)
    assert kappa_boundary(stable_10_d3, tol=0.01) == pytest.approx(2.0, abs=0.02)


def test_kappa_boundary_integral_only(bm3, stable_05_d1):
    got = kappa_boundary(bm3, tol=0.01, methods=("integral",))
    assert got == pytest.approx(0.5, abs=0.02)
    got = kappa_boundary(stable_05_d1, tol=0.01, methods=("integral",))
    assert got == pytest.approx(1.0, abs=0.02)


def test_kappa_boundary_no_boundary(bm3):
    with pytest.raises(ConfigurationError):
        kappa_boundary(bm3, lo=1.0, hi=8.0)   # weak on both ends


def test_verdict_monotone_in_kappa(bm3, stable_05_d1):
    for model in (bm3, stable_05_d1):
        seen_weak = False
        for kappa in np.linspace(0.0, 4.0, 17):
            verdict = classify(model, float(kappa)).verdict
            if seen_weak:
                assert verdict == WEAKLY_TRANSIENT
            seen_weak = seen_weak or verdict == WEAKLY_TRANSIENT
        assert seen_weak


def test_rescaling_leaves_verdicts_unchanged():
    base = isotropic_stable(2, 1.2, gamma=1.0)
    scaled = isotropic_stable(2, 1.2, gamma=3.0)
    for kappa in (0.3, 0.667, 1.5):
        assert classify(base, kappa).verdict == classify(scaled, kappa).verdict
    assert kappa_boundary(base, tol=0.01) == pytest.approx(
        kappa_boundary(scaled, tol=0.01), abs=0.02)


def test_report_provenance_and_serialization(bm3):
    rep = classify(bm3, 0.6)
    assert len(rep.fired_rules) >= 1
    payload = rep.to_json()
    assert set(payload) >= {"gate", "kappa", "verdict", "kappa_star", "rules",
                            "assumptions"}
    for rule in payload["rules"]:
        assert set(rule) >= {"id", "quote_ref", "verdict"}
    assert set(payload["assumptions"]) >= {
        "weak_test_hypothesis", "sector_constant", "perturbation_margin",
        "irreducible"}
    # exact round trip through JSON text
    assert json.loads(json.dumps(payload)) == payload


def test_conditional_marking_for_state_dependent_weak_verdict():
    lopsided = stable_like(1, alpha={"lo": 0.5, "hi": 0.9, "profile": "step"},
                           gamma=1.0, envelope_mode="grid_sampled")
    rep = classify(lopsided, 3.0)
    assert rep.verdict == WEAKLY_TRANSIENT
    assert any("weak-test hypothesis" in c for c in rep.conditional)

    asserted = stable_like(1, alpha={"lo": 0.5, "hi": 0.9, "profile": "step"},
                           gamma=1.0, envelope_mode="grid_sampled",
                           assumptions={"weak_test_hypothesis": True})
    rep = classify(asserted, 3.0)
    assert rep.verdict == WEAKLY_TRANSIENT
    assert not rep.conditional


def test_boundary_kappa_is_weak_for_brownian(bm3):
    # d = 2(kappa+1) sits on the weak side
    assert classify(bm3, 0.5).verdict == WEAKLY_TRANSIENT
