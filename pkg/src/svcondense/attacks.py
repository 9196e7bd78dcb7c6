"""Greedy prefix adversaries for plain SV sources and the attack showing no
map can condense them.

The greedy adversary tilts every next-bit choice (with the extreme
probability q = (1+delta)/2) toward the half of the cube holding more of a
target set A, which forces mu(A) >= q**(n - log2|A|).  Aimed at the largest
fiber of any map F, this caps the output min-entropy rate of F at
log2(2/(1+delta)), the same floor every SV_delta source already has.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bitdist import JointDistribution, check_width, min_entropy, pushforward
from .condenser import CondenserMap
from .sv_models import PrefixAdversary, SVParams, materialize

MASS_TOL = 1e-9


def _target_indicator(n: int, targets: Iterable[int]) -> np.ndarray:
    check_width(n)
    idx = np.fromiter(targets, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("target set must be non-empty")
    if np.any(idx < 0) or np.any(idx >= (1 << n)):
        raise ValueError(f"target values must fit in {n} bits")
    indicator = np.zeros(1 << n, dtype=np.int64)
    indicator[idx] = 1
    if int(indicator.sum()) != idx.size:
        raise ValueError("target set contains duplicates")
    return indicator


def greedy_sv_for_set(n: int, targets: Iterable[int], delta: float) -> PrefixAdversary:
    """The weight-maximizing SV_delta adversary for a target set.

    At every prefix the branch covering at least as many targets receives
    probability q, the other p; ties go to the 0-branch.  Strategy values
    are therefore exactly {p, q}.
    """
    params = SVParams(n, delta)
    counts = _target_indicator(n, targets)
    levels = []
    for _ in range(n):
        pairs = counts.reshape(-1, 2)
        # Pr[next bit = 1]: p when the 0-branch holds at least as many targets.
        levels.append(np.where(pairs[:, 0] >= pairs[:, 1], params.p, params.q))
        counts = pairs.sum(axis=1)
    levels.reverse()
    return PrefixAdversary(n, delta, tuple(levels))


def greedy_mass_bound(n: int, size: int, delta: float) -> float:
    """q**(n - log2(size)) with a real exponent; no rounding of |A|."""
    params = SVParams(n, delta)
    exponent = n - math.log2(size)
    return math.exp(exponent * math.log(params.q))


@dataclass(frozen=True)
class LemmaCheck:
    mass: float
    bound: float
    holds: bool


def verify_lemma_e1(n: int, targets: Iterable[int], delta: float) -> LemmaCheck:
    """Materialize the greedy adversary and compare mu(A) to its guarantee."""
    idx = np.fromiter(targets, dtype=np.int64)
    adv = greedy_sv_for_set(n, idx, delta)
    mu = materialize(adv)
    mass = float(np.sum(mu.probs[idx]))
    bound = greedy_mass_bound(n, idx.size, delta)
    return LemmaCheck(mass, bound, mass >= bound - MASS_TOL)


@dataclass(frozen=True)
class AttackResult:
    """Outcome of aiming the greedy adversary at a map's largest fiber."""

    n: int
    m: int
    delta: float
    target_output: int          # chosen output value s (smallest of the largest fibers)
    fiber_size: int
    adversary: PrefixAdversary
    target_set_mass: float      # Pr[F(X) = s] under the adversary
    lemma_bound: float          # q**(n - log2 fiber_size)
    achieved_min_entropy: float
    theorem_bound: float        # m * log2(2/(1+delta))

    @property
    def bound_holds(self) -> bool:
        return self.achieved_min_entropy <= self.theorem_bound + 1e-6


def attack_condenser(F: CondenserMap, delta: float) -> AttackResult:
    """Construct an SV_delta source under which F condenses nothing.

    Picks the (smallest-valued) output with the largest preimage, then
    floods that preimage with the greedy adversary.
    """
    params = SVParams(F.n, delta)
    table = F.table()
    sizes = np.bincount(table, minlength=1 << F.m)
    s = int(np.argmax(sizes))  # argmax returns the smallest index on ties
    fiber = np.nonzero(table == s)[0]
    adv = greedy_sv_for_set(F.n, fiber, delta)
    mu = materialize(adv)
    out = pushforward(mu, F)
    return AttackResult(
        n=F.n,
        m=F.m,
        delta=delta,
        target_output=s,
        fiber_size=int(fiber.size),
        adversary=adv,
        target_set_mass=float(out.probs[s]),
        lemma_bound=greedy_mass_bound(F.n, int(fiber.size), delta),
        achieved_min_entropy=min_entropy(out),
        theorem_bound=F.m * math.log2(2.0 / (1.0 + params.delta)),
    )
