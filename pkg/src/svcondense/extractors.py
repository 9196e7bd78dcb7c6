"""Seeded extractors sliced out of deterministic condensers, exact error
evaluation, and the reverse concatenation construction.

A condenser output cut into D equal slices gives a seeded map g(x, s); if
the condenser loses only an epsilon fraction of entropy, g is a very
strong extractor: each slice stays near-uniform on average even given the
slices under all preceding seed values.  Concatenating all D outputs of
any very strong extractor runs the construction backwards, recovering an
entropy condenser.  Everything here is evaluated exactly, never sampled,
so the inequalities can be verified rather than estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .bitdist import (
    DimensionMismatchError,
    FileFormatError,
    JointDistribution,
    SizeLimitError,
    min_entropy,
    pushforward,
    shannon_entropy,
)
from .condenser import CondenserMap

LOG2E = math.log2(math.e)

# Exact evaluation iterates over all inputs and all output prefixes.
_MAX_EXACT_INPUT = 16
_MAX_EXACT_PREFIX = 16


class SeededMap:
    """A map g(x, s) from n input bits and a seed s in 1..D to m_out bits.

    Either a view of D consecutive slices of a condenser output (seed s
    selects output bits (s-1)*m_out+1 .. s*m_out, counted from the left)
    or an explicit per-seed table.
    """

    __slots__ = ("n", "D", "m_out", "base", "_tables")

    def __init__(self, n, D, m_out, base=None, tables=None):
        if (base is None) == (tables is None):
            raise ValueError("provide either a base condenser or tables")
        if D < 1:
            raise ValueError(f"seed count must be positive, got {D}")
        if tables is not None:
            mat = np.array(tables, dtype=np.int64, copy=True)
            if mat.shape != (D, 1 << n):
                raise DimensionMismatchError(f"tables must have shape ({D}, {1 << n})")
            if m_out < 1 or np.any(mat < 0) or np.any(mat >= (1 << m_out)):
                raise ValueError(f"table entries must fit in {m_out} bits")
            mat.setflags(write=False)
        else:
            if base.m % D:
                raise DimensionMismatchError(f"seed count {D} must divide m={base.m}")
            if n != base.n or m_out != base.m // D:
                raise DimensionMismatchError("slice widths do not match the base map")
            mat = None
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "m_out", m_out)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_tables", mat)

    def __setattr__(self, name, value):
        raise AttributeError("SeededMap is immutable")

    @classmethod
    def sliced(cls, h: CondenserMap, D: int) -> "SeededMap":
        if h.m % D:
            raise DimensionMismatchError(f"seed count {D} must divide m={h.m}")
        return cls(h.n, D, h.m // D, base=h)

    @classmethod
    def from_tables(cls, n: int, m_out: int, tables) -> "SeededMap":
        mat = np.asarray(tables)
        return cls(n, mat.shape[0] if mat.ndim == 2 else 0, m_out, tables=mat)

    def output(self, x: int, s: int) -> int:
        """g(x, s) for seed s in 1..D."""
        if not 1 <= s <= self.D:
            raise ValueError(f"seed {s} out of range 1..{self.D}")
        if self._tables is not None:
            return int(self._tables[s - 1, x])
        shift = (self.D - s) * self.m_out
        return (self.base(x) >> shift) & ((1 << self.m_out) - 1)

    def seed_table(self, s: int) -> np.ndarray:
        """Full output vector of g(., s)."""
        if not 1 <= s <= self.D:
            raise ValueError(f"seed {s} out of range 1..{self.D}")
        if self._tables is not None:
            return self._tables[s - 1]
        shift = (self.D - s) * self.m_out
        return (self.base.table() >> shift) & ((1 << self.m_out) - 1)

    def tables(self) -> np.ndarray:
        if self._tables is not None:
            return self._tables
        return np.stack([self.seed_table(s) for s in range(1, self.D + 1)])

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "m_out": self.m_out,
            "table": [[int(v) for v in row] for row in self.tables()],
        }

    @classmethod
    def from_obj(cls, obj) -> "SeededMap":
        if not isinstance(obj, dict):
            raise FileFormatError("seeded map file must be a JSON object")
        for key in ("n", "D", "m_out", "table"):
            if key not in obj:
                raise FileFormatError(f'seeded map file needs key "{key}"')
        try:
            return cls(obj["n"], obj["D"], obj["m_out"], tables=obj["table"])
        except (ValueError, TypeError) as exc:
            raise FileFormatError(str(exc)) from exc


def vse_from_condenser(h: CondenserMap, D: int) -> SeededMap:
    """Slice a condenser's m output bits into D seeds of m/D bits each."""
    return SeededMap.sliced(h, D)


class _SeedSlice:
    """Adapter so one seed's map can feed pushforward."""

    __slots__ = ("n", "m", "_vec")

    def __init__(self, g: SeededMap, s: int):
        self.n = g.n
        self.m = g.m_out
        self._vec = g.seed_table(s)

    def table(self) -> np.ndarray:
        return self._vec


def strong_error(g: SeededMap, mu: JointDistribution) -> float:
    """Expected half-l1 distance from uniform of g(X, s) over a uniform seed."""
    if g.n != mu.n:
        raise DimensionMismatchError(f"map takes {g.n} bits, source has {mu.n}")
    u = 1.0 / (1 << g.m_out)
    total = 0.0
    for s in range(1, g.D + 1):
        nu = pushforward(mu, _SeedSlice(g, s))
        total += 0.5 * float(np.sum(np.abs(nu.probs - u)))
    return total / g.D


def _check_exact_size(g: SeededMap) -> None:
    if g.n > _MAX_EXACT_INPUT or g.D * g.m_out > _MAX_EXACT_PREFIX:
        raise SizeLimitError(
            f"exact evaluation needs n <= {_MAX_EXACT_INPUT} and "
            f"D*m_out <= {_MAX_EXACT_PREFIX}"
        )


def _conditional_rows(g: SeededMap, mu: JointDistribution, t: int, keys: np.ndarray):
    """Distribution of g(X, t) within every class of equal output prefixes.

    Returns (weights, rows): the mass of each non-empty class and the
    conditional distribution of the t-th output inside it.  Conditioning
    events are generated by actual inputs, so none has zero mass.
    """
    M = 1 << g.m_out
    out_t = g.seed_table(t)
    joint = keys * M + out_t
    num_keys = int(keys.max()) + 1 if keys.size else 1
    masses = np.bincount(joint, weights=mu.probs, minlength=num_keys * M)
    rows = masses.reshape(-1, M)
    weights = rows.sum(axis=1)
    keep = weights > 0
    return weights[keep], rows[keep] / weights[keep][:, None], joint


def very_strong_error(g: SeededMap, mu: JointDistribution) -> float:
    """Exact very-strong extractor error of g on mu.

    Averages, over a uniform seed t and an input z ~ mu, the half-l1
    distance from uniform of the conditional distribution of g(X, t) given
    that the outputs under seeds 1..t-1 match those of z.  Inputs sharing
    an output prefix share the conditional, so the average groups by
    prefix class with the class mass as weight.
    """
    if g.n != mu.n:
        raise DimensionMismatchError(f"map takes {g.n} bits, source has {mu.n}")
    _check_exact_size(g)
    u = 1.0 / (1 << g.m_out)
    keys = np.zeros(1 << g.n, dtype=np.int64)
    total = 0.0
    for t in range(1, g.D + 1):
        weights, rows, keys = _conditional_rows(g, mu, t, keys)
        half_l1 = 0.5 * np.sum(np.abs(rows - u), axis=1)
        total += float(np.sum(weights * half_l1))
    return total / g.D


def seed_conditional_entropy_average(g: SeededMap, mu: JointDistribution) -> float:
    """E over seed t and z ~ mu of H(g(X, t) | outputs of seeds < t match z).

    By the chain rule this equals H(concatenated outputs) / D exactly.
    """
    if g.n != mu.n:
        raise DimensionMismatchError(f"map takes {g.n} bits, source has {mu.n}")
    _check_exact_size(g)
    keys = np.zeros(1 << g.n, dtype=np.int64)
    total = 0.0
    for t in range(1, g.D + 1):
        weights, rows, keys = _conditional_rows(g, mu, t, keys)
        logs = np.log2(rows, where=rows > 0, out=np.zeros_like(rows))
        total += float(np.sum(weights * -(rows * logs).sum(axis=1)))
    return total / g.D


def entropy_condenser_from_vse(g: SeededMap) -> CondenserMap:
    """Concatenate all D outputs (seed 1 leftmost) into one table condenser."""
    m_total = g.D * g.m_out
    if m_total > 20:
        raise SizeLimitError(f"concatenated width {m_total} exceeds 20 bits")
    table = np.zeros(1 << g.n, dtype=np.int64)
    for s in range(1, g.D + 1):
        table |= g.seed_table(s) << ((g.D - s) * g.m_out)
    return CondenserMap.from_table(g.n, m_total, table)


@dataclass(frozen=True)
class CondExtrBound:
    """Very-strong-error guarantee for a sliced entropy condenser."""

    value: float
    precondition_ok: bool  # (ln 2 / 2) * deficit_rate <= D / m


def claim_bound_cond_extr(entropy_deficit_rate: float, m: int, D: int) -> CondExtrBound:
    """sqrt((ln2 / 2) * eps * m / D) where eps is the entropy deficit rate.

    The guarantee needs (ln2 / 2) * eps <= D / m; a violation is flagged
    but the value is still returned.
    """
    if entropy_deficit_rate < 0:
        raise ValueError("entropy deficit rate cannot be negative")
    if m < 1 or D < 1 or m % D:
        raise ValueError("seed count must divide the output width")
    half_ln2_eps = 0.5 * math.log(2.0) * entropy_deficit_rate
    return CondExtrBound(
        value=math.sqrt(half_ln2_eps * m / D),
        precondition_ok=half_ln2_eps <= D / m + 1e-12,
    )


@dataclass(frozen=True)
class ExtrCondBound:
    """Entropy-rate guarantee for the concatenation of a very strong extractor."""

    value: float
    vacuous: bool


def claim_bound_extr_cond(delta_vse: float, m: int) -> ExtrCondBound:
    """1 - delta - sqrt(4 * log2(e) * delta / m); may be negative (vacuous)."""
    if not 0.0 <= delta_vse <= 1.0:
        raise ValueError(f"extractor error must be in [0, 1], got {delta_vse}")
    if m < 1:
        raise ValueError(f"output width must be positive, got {m}")
    value = 1.0 - delta_vse - math.sqrt(4.0 * LOG2E * delta_vse / m)
    return ExtrCondBound(value, value <= 0.0)


@dataclass(frozen=True)
class PinskerSandwich:
    """Entropy deficiency squeezed between two distance-from-uniform bounds."""

    lower: float
    deficit: float
    upper: float

    def holds(self, tol: float = 1e-9) -> bool:
        return self.lower <= self.deficit + tol and self.deficit <= self.upper + tol


def pinsker_sandwich(mu: JointDistribution) -> PinskerSandwich:
    """Sandwich log|A| - H(mu) between functions of ||mu - uniform||_1.

    A is the declared cube {0,1}^n (zero entries allowed).  Lower bound is
    Pinsker's inequality; the upper bound combines a mass-capping argument
    with log(1+t) <= t*log2(e).
    """
    n = mu.n
    dist = float(np.sum(np.abs(mu.probs - 1.0 / (1 << n))))
    lower = 0.5 * LOG2E * dist * dist
    deficit = n - shannon_entropy(mu)
    upper = 0.5 * dist * n + math.sqrt(2.0 * LOG2E * dist * n)
    return PinskerSandwich(lower, deficit, upper)


@dataclass(frozen=True)
class VSEReport:
    """Measured extractor errors next to the sliced-condenser guarantee.

    strong_error and very_strong_error obey no order in general; both are
    reported.  claim_bound uses the measured Shannon-entropy deficiency
    rate of the concatenated condenser output, the sharpest valid input to
    the guarantee.
    """

    n: int
    D: int
    m_out: int
    strong_error: float
    very_strong_error: float
    entropy_deficit_rate: float
    claim_bound: float
    precondition_ok: bool


def vse_report(g: SeededMap, mu: JointDistribution) -> VSEReport:
    concat = entropy_condenser_from_vse(g)
    eps = 1.0 - shannon_entropy(pushforward(mu, concat)) / concat.m
    eps = max(eps, 0.0)  # guard float negative zero
    bound = claim_bound_cond_extr(eps, concat.m, g.D)
    return VSEReport(
        n=g.n,
        D=g.D,
        m_out=g.m_out,
        strong_error=strong_error(g, mu),
        very_strong_error=very_strong_error(g, mu),
        entropy_deficit_rate=eps,
        claim_bound=bound.value,
        precondition_ok=bound.precondition_ok,
    )
