"""Closed-form bound catalog and the entropy report shared by CLI and tests.

All reported quantities are in bits (base-2 logs); natural-log constants
appear only inside closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .bitdist import (
    FileFormatError,
    JointDistribution,
    min_entropy,
    pushforward,
    shannon_entropy,
)
from .condenser import CondenserMap, imbalance_ratio, theoretical_rate
from .extractors import pinsker_sandwich, vse_from_condenser, vse_report
from .sv_models import is_strong_sv, is_sv

REPORT_VERSION = "report_v1"

_BOUND_TOL = 1e-6
_PINSKER_TOL = 1e-9


def sv_floor(n: int, delta: float) -> float:
    """Min-entropy every SV_delta source over n bits must have."""
    return n * math.log2(2.0 / (1.0 + delta))


def theorem2_rate(d: int, delta: float) -> float:
    """Output min-entropy rate the structured condenser guarantees."""
    return theoretical_rate(d, delta).rate_bound


def el3_floor(d: int, delta: float) -> float:
    """Min-entropy floor of a delta-imbalanced distribution over d bits."""
    return d - math.log2((1.0 + delta) / (1.0 - delta))


@dataclass(frozen=True)
class EntropyReport:
    """Measured entropies of one distribution next to every applicable bound.

    With a condenser in context the measured fields describe the output
    distribution (width m); n stays the input width and the context dict
    carries the input-side entropies.
    """

    n: int
    m: int
    delta: float
    is_sv: bool
    is_strong_sv: bool
    min_entropy: float
    shannon_entropy: float
    min_rate: float
    entropy_rate: float
    imbalance: float
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    all_bounds_hold: bool = True
    context: Optional[dict] = None
    extractor: Optional[dict] = None

    def to_obj(self) -> dict:
        obj = {
            "version": REPORT_VERSION,
            "n": self.n,
            "m": self.m,
            "delta": self.delta,
            "is_sv": self.is_sv,
            "is_strong_sv": self.is_strong_sv,
            "min_entropy": self.min_entropy,
            "shannon_entropy": self.shannon_entropy,
            "min_rate": self.min_rate,
            "entropy_rate": self.entropy_rate,
            "imbalance": self.imbalance,
            "bounds": dict(self.bounds),
            "checks": dict(self.checks),
            "all_bounds_hold": self.all_bounds_hold,
        }
        if self.context is not None:
            obj["context"] = self.context
        if self.extractor is not None:
            obj["extractor"] = self.extractor
        return obj

    @classmethod
    def from_obj(cls, obj) -> "EntropyReport":
        if not isinstance(obj, dict) or obj.get("version") != REPORT_VERSION:
            raise FileFormatError(f"not a {REPORT_VERSION} report")
        return cls(
            n=obj["n"],
            m=obj["m"],
            delta=obj["delta"],
            is_sv=obj["is_sv"],
            is_strong_sv=obj["is_strong_sv"],
            min_entropy=obj["min_entropy"],
            shannon_entropy=obj["shannon_entropy"],
            min_rate=obj["min_rate"],
            entropy_rate=obj["entropy_rate"],
            imbalance=obj["imbalance"],
            bounds=dict(obj["bounds"]),
            checks=dict(obj["checks"]),
            all_bounds_hold=obj["all_bounds_hold"],
            context=obj.get("context"),
            extractor=obj.get("extractor"),
        )

    @property
    def passed(self) -> bool:
        """Exit criterion for analysis: class membership plus every bound."""
        return self.is_sv and self.all_bounds_hold


def build_report(
    mu: JointDistribution,
    delta: float,
    condenser: Optional[CondenserMap] = None,
    D: Optional[int] = None,
) -> EntropyReport:
    """Measure a distribution (optionally pushed through a condenser) and
    evaluate every applicable closed-form bound against it.

    Bounds that need class membership (the SV floor, the condenser rate,
    the single-block floor) are checked only when the matching checker
    passes; the Pinsker sandwich applies unconditionally.
    """
    sv_ok = bool(is_sv(mu, delta))
    strong_ok = bool(is_strong_sv(mu, delta))
    input_h_min = min_entropy(mu)
    input_h = shannon_entropy(mu)

    subject = mu
    m = mu.n
    context = None
    if condenser is not None:
        subject = pushforward(mu, condenser)
        m = condenser.m
        context = {
            "condenser": (
                {"kind": "structured", "d": condenser.d, "k": condenser.k}
                if condenser.is_structured
                else {"kind": "table"}
            ),
            "input_min_entropy": input_h_min,
            "input_shannon_entropy": input_h,
        }

    h_min = min_entropy(subject)
    h = shannon_entropy(subject)
    sandwich = pinsker_sandwich(subject)

    bounds = {
        "sv_floor": sv_floor(mu.n, delta),
        "pinsker_lower": sandwich.lower,
        "pinsker_upper": sandwich.upper,
    }
    checks = {"pinsker_sandwich": sandwich.holds(_PINSKER_TOL)}
    if sv_ok:
        checks["sv_floor"] = input_h_min >= bounds["sv_floor"] - _BOUND_TOL

    if condenser is not None and condenser.is_structured:
        rate = theorem2_rate(condenser.d, delta)
        bounds["theorem2_rate"] = rate
        if strong_ok:
            checks["theorem2_rate"] = h_min / m >= rate - _BOUND_TOL
        if condenser.k == 1:
            bounds["el3_floor"] = el3_floor(condenser.d, delta)
            if strong_ok:
                checks["el3_floor"] = h_min >= bounds["el3_floor"] - _BOUND_TOL

    extractor = None
    if D is not None:
        if condenser is None:
            raise ValueError("extractor analysis needs a condenser to slice")
        g = vse_from_condenser(condenser, D)
        rep = vse_report(g, mu)
        extractor = {
            "D": rep.D,
            "m_out": rep.m_out,
            "strong_error": rep.strong_error,
            "very_strong_error": rep.very_strong_error,
            "entropy_deficit_rate": rep.entropy_deficit_rate,
            "claim_bound": rep.claim_bound,
            "precondition_ok": rep.precondition_ok,
        }
        if strong_ok and rep.precondition_ok:
            checks["cond_extr_bound"] = (
                rep.very_strong_error <= rep.claim_bound + _BOUND_TOL
            )

    return EntropyReport(
        n=mu.n,
        m=m,
        delta=delta,
        is_sv=sv_ok,
        is_strong_sv=strong_ok,
        min_entropy=h_min,
        shannon_entropy=h,
        min_rate=h_min / m,
        entropy_rate=h / m,
        imbalance=imbalance_ratio(subject),
        bounds=bounds,
        checks=checks,
        all_bounds_hold=all(checks.values()),
        context=context,
        extractor=extractor,
    )
