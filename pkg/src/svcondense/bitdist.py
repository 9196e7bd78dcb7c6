"""Exact probability distributions over fixed-length bit strings.

A length-n bit string is stored as a machine integer with the first
(leftmost) bit as the most significant of the n bits.  This single
convention is shared by every module: conditioning on a prefix selects a
contiguous index range, and marginalizing the leading bits is a reshape.

All probability vectors are dense float64 arrays of length 2**n, so every
quantity here (entropies, distances, pushforwards, conditionals) is exact
up to float rounding; nothing is sampled or estimated.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

# |sum(probs) - 1| allowed at construction; float materialization of exact
# rational strategies stays far below this at n <= 24.
MASS_TOL = 1e-9

# Tolerance for entropy identities (chain rule, bound comparisons).
ENTROPY_TOL = 1e-6

HARD_MAX_N = 24
_DEFAULT_MAX_N = 20
_MAX_N_ENV = "SVC_MAX_N"


class DimensionMismatchError(ValueError):
    """Two objects with incompatible bit widths were combined."""


class InconsistentConditioningError(ValueError):
    """Conditioning event has zero probability mass."""


class SizeLimitError(ValueError):
    """Requested width exceeds the exact-analysis cap."""


class FileFormatError(ValueError):
    """A JSON artifact file does not match its schema."""


def max_exact_n() -> int:
    """Current cap on exact-analysis width.

    Defaults to 20; the SVC_MAX_N environment variable overrides it up to
    the hard ceiling of 24 (a 2**24-entry vector is the largest object the
    exact engine will allocate).
    """
    raw = os.environ.get(_MAX_N_ENV)
    if raw is None:
        return _DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise SizeLimitError(f"{_MAX_N_ENV} must be an integer, got {raw!r}") from exc
    if not 1 <= value <= HARD_MAX_N:
        raise SizeLimitError(f"{_MAX_N_ENV} must be in 1..{HARD_MAX_N}, got {value}")
    return value


def check_width(n: int) -> None:
    """Reject widths outside 1..max_exact_n() instead of silently degrading."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise SizeLimitError(f"bit count must be a positive integer, got {n!r}")
    cap = max_exact_n()
    if n > cap:
        raise SizeLimitError(f"n={n} exceeds the exact-analysis cap {cap}")


@dataclass(frozen=True)
class BitString:
    """An n-bit string; bit 1 is the most significant of the n bits."""

    n: int
    value: int

    def __post_init__(self):
        if not 1 <= self.n <= HARD_MAX_N:
            raise SizeLimitError(f"bit count must be in 1..{HARD_MAX_N}, got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {text!r}")
        return cls(len(text), int(text, 2))

    def bit(self, i: int) -> int:
        """Bit i, 1-indexed from the left (i=1 is the most significant)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"bit index {i} out of range 1..{self.n}")
        return (self.value >> (self.n - i)) & 1

    def xor(self, other: "BitString") -> "BitString":
        if self.n != other.n:
            raise DimensionMismatchError(f"widths differ: {self.n} vs {other.n}")
        return BitString(self.n, self.value ^ other.value)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")


def unit_vector(n: int, i: int) -> BitString:
    """e_i as a BitString; e_0 is the all-zero string."""
    if i == 0:
        return BitString(n, 0)
    if not 1 <= i <= n:
        raise ValueError(f"unit index {i} out of range 0..{n}")
    return BitString(n, 1 << (n - i))


def _coerce_prefix(prefix: Union[BitString, str]) -> BitString:
    if isinstance(prefix, BitString):
        return prefix
    return BitString.from_str(prefix)


class JointDistribution:
    """Exact distribution over {0,1}^n as a dense vector of 2**n entries.

    Immutable after construction; entry x is Pr[X = x] under the MSB-first
    integer encoding.  Entries must be non-negative and sum to 1 within
    MASS_TOL.  Zero entries are allowed.
    """

    __slots__ = ("n", "probs")

    def __init__(self, n: int, probs):
        check_width(n)
        vec = np.array(probs, dtype=np.float64, copy=True)
        if vec.shape != (1 << n,):
            raise DimensionMismatchError(
                f"expected {1 << n} probabilities for n={n}, got shape {vec.shape}"
            )
        if np.any(vec < 0):
            bad = int(np.argmin(vec))
            raise ValueError(f"negative probability {vec[bad]} at index {bad}")
        total = float(np.sum(vec))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        vec.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", vec)

    def __setattr__(self, name, value):
        raise AttributeError("JointDistribution is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JointDistribution)
            and self.n == other.n
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self) -> str:
        return f"JointDistribution(n={self.n})"

    @classmethod
    def uniform(cls, n: int) -> "JointDistribution":
        check_width(n)
        return cls(n, np.full(1 << n, 1.0 / (1 << n)))

    @classmethod
    def point_mass(cls, n: int, value: int) -> "JointDistribution":
        check_width(n)
        vec = np.zeros(1 << n)
        vec[value] = 1.0
        return cls(n, vec)

    def mass(self, values: Iterable[int]) -> float:
        """Total probability of a set of outcomes."""
        idx = np.fromiter(values, dtype=np.int64)
        return float(np.sum(self.probs[idx])) if idx.size else 0.0


def min_entropy(mu: JointDistribution) -> float:
    """-log2 of the most likely outcome, in bits."""
    return float(-np.log2(np.max(mu.probs)))


def shannon_entropy(mu: JointDistribution) -> float:
    """Shannon entropy in bits, with the convention 0*log(1/0) = 0."""
    pos = mu.probs[mu.probs > 0]
    return float(-np.sum(pos * np.log2(pos)))


def l1_distance(mu: JointDistribution, nu: JointDistribution) -> float:
    """Sum of |mu(x) - nu(x)|; statistical closeness is half of this."""
    if mu.n != nu.n:
        raise DimensionMismatchError(f"widths differ: {mu.n} vs {nu.n}")
    return float(np.sum(np.abs(mu.probs - nu.probs)))


def pushforward(mu: JointDistribution, f) -> JointDistribution:
    """Distribution of f(X) for X ~ mu.

    `f` is any map object exposing input width `n`, output width `m`, and
    `table()` returning the full output vector (CondenserMap and friends).
    """
    if f.n != mu.n:
        raise DimensionMismatchError(f"map takes {f.n} bits, distribution has {mu.n}")
    table = np.asarray(f.table())
    out = np.bincount(table, weights=mu.probs, minlength=1 << f.m)
    return JointDistribution(f.m, out)


def condition_on_prefix(
    mu: JointDistribution, prefix: Union[BitString, str]
) -> JointDistribution:
    """Distribution of the suffix given that the string starts with `prefix`.

    MSB-first encoding makes the matching strings a contiguous index range.
    Raises InconsistentConditioningError when the prefix has zero mass.
    """
    pre = _coerce_prefix(prefix)
    if pre.n >= mu.n:
        raise DimensionMismatchError(f"prefix length {pre.n} must be < n={mu.n}")
    width = mu.n - pre.n
    start = pre.value << width
    block = mu.probs[start : start + (1 << width)]
    total = float(np.sum(block))
    if total <= 0.0:
        raise InconsistentConditioningError(f"prefix {pre} has zero probability mass")
    return JointDistribution(width, block / total)


def conditional_bit_given_rest(
    mu: JointDistribution, i: int, rest: Union[BitString, str]
):
    """Pr[X_i = 1 | all other coordinates equal `rest`], or None if undefined.

    `rest` lists the other n-1 coordinates in their original order.  When
    both completions have zero mass the conditional does not exist; None is
    the explicit "inconsistent conditioning" value, not an error.
    """
    r = _coerce_prefix(rest) if not isinstance(rest, BitString) else rest
    if r.n != mu.n - 1:
        raise DimensionMismatchError(f"rest must have {mu.n - 1} bits, got {r.n}")
    if not 1 <= i <= mu.n:
        raise ValueError(f"coordinate {i} out of range 1..{mu.n}")
    low_width = mu.n - i
    high = r.value >> low_width
    low = r.value & ((1 << low_width) - 1)
    x0 = (high << (low_width + 1)) | low
    x1 = x0 | (1 << low_width)
    p0 = float(mu.probs[x0])
    p1 = float(mu.probs[x1])
    total = p0 + p1
    if total <= 0.0:
        return None
    return p1 / total


def dumps_distribution(mu: JointDistribution) -> str:
    """Serialize to the {"n", "probs"} JSON schema.

    Probabilities are written with 17 significant digits so parsing
    reproduces the exact float64 values.
    """
    body = ", ".join(format(p, ".17e") for p in mu.probs)
    return f'{{"n": {mu.n}, "probs": [{body}]}}\n'


def dump_distribution(mu: JointDistribution, fp) -> None:
    fp.write(dumps_distribution(mu))


def distribution_from_obj(obj) -> JointDistribution:
    """Build a JointDistribution from a parsed {"n", "probs"} object."""
    if not isinstance(obj, dict) or "n" not in obj or "probs" not in obj:
        raise FileFormatError('distribution file needs keys "n" and "probs"')
    n = obj["n"]
    if not isinstance(n, int):
        raise FileFormatError(f'"n" must be an integer, got {n!r}')
    probs = obj["probs"]
    if not isinstance(probs, list):
        raise FileFormatError('"probs" must be a list')
    try:
        return JointDistribution(n, probs)
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def load_distribution(fp) -> JointDistribution:
    import json

    return distribution_from_obj(json.load(fp))


def loads_distribution(text: str) -> JointDistribution:
    import json

    return distribution_from_obj(json.loads(text))
