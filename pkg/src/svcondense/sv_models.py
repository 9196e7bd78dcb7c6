"""Santha-Vazirani source models: exact membership checkers and generators.

A plain SV source bounds every next-bit conditional (given the preceding
bits) inside [(1-delta)/2, (1+delta)/2]; a strong SV source bounds the
conditional of every bit given ALL other bits, which is the same as
bounding the probability ratio across every hypercube edge by
(1+delta)/(1-delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .bitdist import (
    JointDistribution,
    check_width,
    FileFormatError,
)

# Checker slack on probability bounds: float materialization of exact
# rational strategies must not produce spurious violations.
PROB_TOL = 1e-9


@dataclass(frozen=True)
class SVParams:
    """Width and bias of an SV class; p and q are the conditional bounds."""

    n: int
    delta: float

    def __post_init__(self):
        check_width(self.n)
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"bias must be in [0, 1), got {self.delta}")

    @property
    def p(self) -> float:
        return (1.0 - self.delta) / 2.0

    @property
    def q(self) -> float:
        return (1.0 + self.delta) / 2.0


@dataclass(frozen=True)
class SVViolation:
    """First prefix where a next-bit conditional leaves [p, q]."""

    index: int          # 1-based coordinate whose conditional is out of range
    prefix: str         # the conditioning prefix, "" at the root
    probability: float  # the offending Pr[X_index = 1 | prefix]


@dataclass(frozen=True)
class StrongSVViolation:
    """First (coordinate, rest-assignment) with an out-of-range conditional."""

    index: int
    rest: str           # the other n-1 coordinates, in original order
    probability: float


@dataclass(frozen=True)
class SVCheck:
    ok: bool
    violation: Optional[Union[SVViolation, StrongSVViolation]] = None

    def __bool__(self) -> bool:
        return self.ok


def is_sv(mu: JointDistribution, delta: float) -> SVCheck:
    """Exact membership test for the plain SV class at bias delta.

    Zero-mass prefixes are skipped: the conditional is undefined there and
    treated as vacuously compliant.
    """
    params = SVParams(mu.n, delta)
    lo, hi = params.p - PROB_TOL, params.q + PROB_TOL
    n = mu.n
    for i in range(1, n + 1):
        block = mu.probs.reshape(1 << (i - 1), 2, 1 << (n - i))
        mass0 = block[:, 0, :].sum(axis=1)
        mass1 = block[:, 1, :].sum(axis=1)
        total = mass0 + mass1
        cond = np.full(total.shape, 0.5)
        np.divide(mass1, total, out=cond, where=total > 0)
        bad = (total > 0) & ((cond < lo) | (cond > hi))
        if np.any(bad):
            j = int(np.argmax(bad))
            prefix = format(j, f"0{i - 1}b") if i > 1 else ""
            return SVCheck(False, SVViolation(i, prefix, float(cond[j])))
    return SVCheck(True)


def is_strong_sv(mu: JointDistribution, delta: float) -> SVCheck:
    """Exact membership test for the strong SV class at bias delta.

    Checks Pr[X_i = 1 | rest] for every coordinate i and every assignment
    of the other n-1 bits carrying positive mass, which is exactly the
    hypercube-edge ratio condition.
    """
    params = SVParams(mu.n, delta)
    lo, hi = params.p - PROB_TOL, params.q + PROB_TOL
    n = mu.n
    for i in range(1, n + 1):
        block = mu.probs.reshape(1 << (i - 1), 2, 1 << (n - i))
        mass0 = block[:, 0, :].reshape(-1)
        mass1 = block[:, 1, :].reshape(-1)
        total = mass0 + mass1
        cond = np.full(total.shape, 0.5)
        np.divide(mass1, total, out=cond, where=total > 0)
        bad = (total > 0) & ((cond < lo) | (cond > hi))
        if np.any(bad):
            j = int(np.argmax(bad))
            # j enumerates (prefix, suffix) pairs; stitch the rest string.
            suffix_width = n - i
            high, low = divmod(j, 1 << suffix_width)
            rest = ""
            if n > 1:
                rest = format((high << suffix_width) | low, f"0{n - 1}b")
            return SVCheck(False, StrongSVViolation(i, rest, float(cond[j])))
    return SVCheck(True)


def iid_biased(n: int, p1: float) -> JointDistribution:
    """Product distribution of n independent bits with Pr[bit = 1] = p1."""
    check_width(n)
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"per-bit probability must be in [0, 1], got {p1}")
    marginal = np.array([1.0 - p1, p1])
    probs = np.ones(1)
    for _ in range(n):
        probs = np.kron(probs, marginal)
    return JointDistribution(n, probs)


class PrefixAdversary:
    """A next-bit strategy: Pr[next bit = 1] for every prefix.

    Level l holds the 2**l prefixes of length l in MSB-first index order;
    every stored probability must lie in [p, q] for the declared bias, so a
    materialized adversary is an SV_delta distribution by construction.
    """

    __slots__ = ("n", "delta", "levels")

    def __init__(self, n: int, delta: float, levels: Tuple[np.ndarray, ...]):
        params = SVParams(n, delta)
        if len(levels) != n:
            raise ValueError(f"need {n} strategy levels, got {len(levels)}")
        frozen = []
        lo, hi = params.p - PROB_TOL, params.q + PROB_TOL
        for l, values in enumerate(levels):
            vec = np.array(values, dtype=np.float64, copy=True)
            if vec.shape != (1 << l,):
                raise ValueError(f"level {l} must hold {1 << l} entries")
            if np.any(vec < lo) or np.any(vec > hi):
                bad = int(np.argmax((vec < lo) | (vec > hi)))
                raise ValueError(
                    f"strategy value {vec[bad]} at prefix "
                    f"{format(bad, f'0{l}b') if l else '(root)'} "
                    f"outside [{params.p}, {params.q}]"
                )
            vec.setflags(write=False)
            frozen.append(vec)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "levels", tuple(frozen))

    def __setattr__(self, name, value):
        raise AttributeError("PrefixAdversary is immutable")

    def next_bit_probability(self, prefix: str) -> float:
        """Pr[next bit = 1 | prefix]; prefix is a 0/1 string, "" for the root."""
        l = len(prefix)
        if l >= self.n:
            raise ValueError(f"prefix of length {l} has no next bit at n={self.n}")
        idx = int(prefix, 2) if prefix else 0
        return float(self.levels[l][idx])

    def strategy_map(self) -> Dict[str, float]:
        """Dict view keyed by explicit prefix strings ("" for the root)."""
        out: Dict[str, float] = {}
        for l, vec in enumerate(self.levels):
            for idx in range(1 << l):
                key = format(idx, f"0{l}b") if l else ""
                out[key] = float(vec[idx])
        return out

    @classmethod
    def from_strategy_map(
        cls, n: int, delta: float, strategy: Dict[str, float]
    ) -> "PrefixAdversary":
        levels = []
        for l in range(n):
            vec = np.empty(1 << l)
            for idx in range(1 << l):
                key = format(idx, f"0{l}b") if l else ""
                if key not in strategy:
                    raise FileFormatError(f"strategy is missing prefix {key!r}")
                vec[idx] = strategy[key]
            levels.append(vec)
        return cls(n, delta, tuple(levels))


def materialize(adv: PrefixAdversary) -> JointDistribution:
    """The distribution an adversary induces: product of branch probabilities."""
    weights = np.ones(1)
    for vec in adv.levels:
        weights = (weights[:, None] * np.column_stack((1.0 - vec, vec))).reshape(-1)
    return JointDistribution(adv.n, weights)


def adversary_from_distribution(mu: JointDistribution, delta: float) -> PrefixAdversary:
    """Extract the next-bit strategy of a distribution.

    Zero-mass prefixes get the neutral value 1/2.  Raises ValueError when a
    positive-mass conditional falls outside [p, q], i.e. when mu is not an
    SV_delta distribution.  On full-support inputs, materialize inverts this.
    """
    n = mu.n
    levels = []
    for i in range(1, n + 1):
        block = mu.probs.reshape(1 << (i - 1), 2, 1 << (n - i))
        mass0 = block[:, 0, :].sum(axis=1)
        mass1 = block[:, 1, :].sum(axis=1)
        total = mass0 + mass1
        cond = np.full(total.shape, 0.5)
        np.divide(mass1, total, out=cond, where=total > 0)
        levels.append(cond)
    return PrefixAdversary(n, delta, tuple(levels))


def random_adversary(n: int, delta: float, seed: int) -> PrefixAdversary:
    """Seeded adversary with uniformly random strategy values in [p, q]."""
    params = SVParams(n, delta)
    rng = np.random.default_rng(seed)
    levels = tuple(
        params.p + (params.q - params.p) * rng.random(1 << l) for l in range(n)
    )
    return PrefixAdversary(n, delta, levels)


def _coordinate_bits(n: int, i: int) -> np.ndarray:
    """Bit i (1-indexed from the left) of every value 0..2**n-1."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx >> (n - i)) & 1).astype(np.float64)


def _max_edge_difference(n: int, potential: np.ndarray) -> float:
    worst = 0.0
    for i in range(1, n + 1):
        block = potential.reshape(1 << (i - 1), 2, 1 << (n - i))
        diff = np.abs(block[:, 1, :] - block[:, 0, :])
        worst = max(worst, float(diff.max()))
    return worst


class PotentialStrongSV:
    """A potential on the hypercube whose induced Gibbs distribution is
    guaranteed strong SV.

    If the potential changes by at most 1 across every hypercube edge, then
    probs(x) proportional to exp(ln((1+delta)/(1-delta)) * potential(x))
    keeps every edge probability ratio within (1+delta)/(1-delta), which is
    exactly strong-SV membership at bias delta.
    """

    __slots__ = ("n", "delta", "potential")

    def __init__(self, n: int, delta: float, potential):
        SVParams(n, delta)
        vec = np.array(potential, dtype=np.float64, copy=True)
        if vec.shape != (1 << n,):
            raise ValueError(f"potential must have {1 << n} entries")
        worst = _max_edge_difference(n, vec)
        if worst > 1.0 + 1e-9:
            raise ValueError(f"potential changes by {worst} > 1 across an edge")
        vec.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "potential", vec)

    def __setattr__(self, name, value):
        raise AttributeError("PotentialStrongSV is immutable")

    def distribution(self) -> JointDistribution:
        if self.delta == 0.0:
            return JointDistribution.uniform(self.n)
        eps = math.log((1.0 + self.delta) / (1.0 - self.delta))
        logits = eps * self.potential
        logits -= logits.max()  # stabilize, shift cancels after normalization
        weights = np.exp(logits)
        return JointDistribution(self.n, weights / weights.sum())


def random_potential(n: int, delta: float, seed: int) -> PotentialStrongSV:
    """Seeded random potential: linear plus pairwise terms, rescaled so the
    largest hypercube-edge change lands in (0, 1]."""
    check_width(n)
    rng = np.random.default_rng(seed)
    linear = rng.normal(size=n)
    pairwise = rng.normal(size=(n, n)) / max(n - 1, 1)
    potential = np.zeros(1 << n)
    bits = [_coordinate_bits(n, i) for i in range(1, n + 1)]
    for i in range(n):
        potential += linear[i] * bits[i]
        for j in range(i + 1, n):
            potential += pairwise[i, j] * bits[i] * bits[j]
    worst = _max_edge_difference(n, potential)
    if worst > 0:
        potential *= rng.uniform(0.3, 1.0) / worst
    return PotentialStrongSV(n, delta, potential)


def random_potential_strong_sv(n: int, delta: float, seed: int) -> JointDistribution:
    """Seeded strong-SV_delta test distribution (membership holds by
    construction; the checkers re-verify it in tests)."""
    return random_potential(n, delta, seed).distribution()


# --- adversary JSON schema: {"n": int, "delta": real, "strategy": {...}} ---

def adversary_to_obj(adv: PrefixAdversary) -> dict:
    return {"n": adv.n, "delta": adv.delta, "strategy": adv.strategy_map()}


def adversary_from_obj(obj) -> PrefixAdversary:
    if not isinstance(obj, dict):
        raise FileFormatError("adversary file must be a JSON object")
    for key in ("n", "delta", "strategy"):
        if key not in obj:
            raise FileFormatError(f'adversary file needs key "{key}"')
    if not isinstance(obj["strategy"], dict):
        raise FileFormatError('"strategy" must be an object')
    try:
        return PrefixAdversary.from_strategy_map(obj["n"], obj["delta"], obj["strategy"])
    except (ValueError, TypeError) as exc:
        raise FileFormatError(str(exc)) from exc


def load_adversary(fp) -> PrefixAdversary:
    import json

    return adversary_from_obj(json.load(fp))


def dump_adversary(adv: PrefixAdversary, fp) -> None:
    import json

    json.dump(adversary_to_obj(adv), fp, indent=2)
    fp.write("\n")
