"""Named verification suites that re-check the library's guarantees end to
end by brute force.

Every suite is deterministic given its seed and returns one result per
property.  The CLI exposes them via `verify --suite`; the acceptance tests
run them at their full sizes.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import attacks, bitdist, bounds, condenser, extractors, hamming, sv_models

TOL = 1e-6
MASS_TOL = 1e-9


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def suite_partition(seed: int = 0, max_n: Optional[int] = None) -> List[PropertyResult]:
    """Syndrome fibers partition the block space with equal sizes (d = 2..4)."""
    results = []
    for d in (2, 3, 4):
        code = hamming.HammingCode(d)
        cosets = code.coset_partition()
        expected = 1 << (code.block_len - d)
        sizes = [len(c) for c in cosets]
        covered = sorted(x for c in cosets for x in c)
        ok = (
            len(cosets) == (1 << d)
            and all(s == expected for s in sizes)
            and covered == list(range(1 << code.block_len))
        )
        results.append(
            PropertyResult(
                f"partition.d{d}",
                ok,
                f"{len(cosets)} fibers of size {expected} tile "
                f"{1 << code.block_len} blocks",
            )
        )
    return results


def suite_lemma_e1(seed: int = 0, max_n: int = 4) -> List[PropertyResult]:
    """Exhaustive greedy-mass check over every non-empty subset of {0,1}^max_n.

    For each target set and each bias, the greedy adversary's mass on the
    set must reach q**(n - log2|A|), and the materialized distribution must
    pass the plain-SV checker.
    """
    n = max_n
    if n > 4:
        raise ValueError("exhaustive subset sweep is sized for n <= 4")
    size = 1 << n
    results = []
    for delta in (0.1, 0.5, 0.9):
        worst_slack = math.inf
        mass_ok = True
        sv_ok = True
        lnq = math.log((1 + delta) / 2)
        for mask in range(1, 1 << size):
            targets = [i for i in range(size) if (mask >> i) & 1]
            adv = attacks.greedy_sv_for_set(n, targets, delta)
            mu = sv_models.materialize(adv)
            mass = float(np.sum(mu.probs[targets]))
            slack = mass - math.exp((n - math.log2(len(targets))) * lnq)
            worst_slack = min(worst_slack, slack)
            if slack < -MASS_TOL:
                mass_ok = False
            if not sv_models.is_sv(mu, delta):
                sv_ok = False
        results.append(
            PropertyResult(
                f"lemma-e1.delta{delta}",
                mass_ok and sv_ok,
                f"{(1 << size) - 1} subsets of n={n}, "
                f"min mass-bound slack {worst_slack:.3e}, sv_ok={sv_ok}",
            )
        )
    return results


def suite_theorem1(
    seed: int = 0,
    max_n: Optional[int] = None,
    n_tables: int = 1000,
    n_sources: int = 200,
) -> List[PropertyResult]:
    """Both halves of the no-condenser statement for plain SV sources."""
    results = []
    # Part 1: every SV_delta source keeps min-entropy >= n*log2(2/(1+delta)).
    rng = np.random.default_rng(seed)
    floor_ok = True
    worst = math.inf
    for idx in range(n_sources):
        n = 2 + idx % 7  # widths 2..8
        delta = (0.1, 0.25, 0.5, 0.75, 0.9)[idx % 5]
        adv = sv_models.random_adversary(n, delta, int(rng.integers(2**63)))
        mu = sv_models.materialize(adv)
        slack = bitdist.min_entropy(mu) - bounds.sv_floor(n, delta)
        worst = min(worst, slack)
        if slack < -TOL:
            floor_ok = False
    results.append(
        PropertyResult(
            "theorem1.sv-floor",
            floor_ok,
            f"{n_sources} materialized adversaries, min slack {worst:.3e}",
        )
    )
    # Part 2: the greedy attack caps output min-entropy for random tables.
    delta = 0.5
    n, m = 8, 4
    rng = np.random.default_rng(seed + 1)
    attack_ok = True
    worst_gap = -math.inf
    for _ in range(n_tables):
        table = rng.integers(0, 1 << m, size=1 << n)
        F = condenser.CondenserMap.from_table(n, m, table)
        res = attacks.attack_condenser(F, delta)
        gap = res.achieved_min_entropy - res.theorem_bound
        worst_gap = max(worst_gap, gap)
        if gap > TOL or res.target_set_mass < res.lemma_bound - MASS_TOL:
            attack_ok = False
    results.append(
        PropertyResult(
            "theorem1.attack-bound",
            attack_ok,
            f"{n_tables} random tables {n}->{m} at delta={delta}, "
            f"max achieved-bound gap {worst_gap:.3e}",
        )
    )
    # Tightness: the identity map is attacked to the bound exactly.
    res = attacks.attack_condenser(condenser.CondenserMap.identity(n), delta)
    gap = abs(res.achieved_min_entropy - res.theorem_bound)
    results.append(
        PropertyResult(
            "theorem1.identity-tightness",
            gap <= MASS_TOL,
            f"identity map gap {gap:.3e}",
        )
    )
    return results


def _strong_sources(n: int, delta: float, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield sv_models.random_potential_strong_sv(n, delta, int(rng.integers(2**63)))


def suite_imbalance(seed: int = 0, n_sources: int = 200) -> List[PropertyResult]:
    """Single-block coset outputs of strong-SV sources: probability ratios
    bounded by (1+delta)/(1-delta) and min-entropy above the matching floor."""
    results = []
    for d in (2, 3):
        g = condenser.CondenserMap.structured(d, 1)
        for delta in (0.25, 0.5):
            ratio_cap = (1 + delta) / (1 - delta)
            floor = bounds.el3_floor(d, delta)
            ok = True
            worst_ratio = 0.0
            worst_h = math.inf
            for mu in _strong_sources(g.n, delta, n_sources, seed + d * 1000):
                out = bitdist.pushforward(mu, g)
                ratio = condenser.imbalance_ratio(out)
                h = bitdist.min_entropy(out)
                worst_ratio = max(worst_ratio, ratio)
                worst_h = min(worst_h, h)
                if ratio > ratio_cap + TOL or h < floor - TOL:
                    ok = False
            results.append(
                PropertyResult(
                    f"imbalance.d{d}.delta{delta}",
                    ok,
                    f"{n_sources} sources over {g.n} bits: max ratio "
                    f"{worst_ratio:.4f} <= {ratio_cap:.4f}, min H_inf "
                    f"{worst_h:.4f} >= {floor:.4f}",
                )
            )
    # Hand-derived instance: iid(0.75) blocks through the d=2 labeler.
    mu = sv_models.iid_biased(3, 0.75)
    out = bitdist.pushforward(mu, condenser.CondenserMap.structured(2, 1))
    expected = np.array([0.4375, 0.1875, 0.1875, 0.1875])
    ok = bool(np.allclose(out.probs, expected, atol=MASS_TOL)) and (
        abs(bitdist.min_entropy(out) - (-math.log2(0.4375))) <= MASS_TOL
    )
    results.append(
        PropertyResult(
            "imbalance.iid075-instance",
            ok,
            f"coset vector {np.round(out.probs, 6).tolist()}, "
            f"H_inf {bitdist.min_entropy(out):.4f}",
        )
    )
    return results


def suite_theorem2(seed: int = 0, n_sources: int = 200) -> List[PropertyResult]:
    """Multi-block condenser guarantee at d=2, k=2 over strong-SV sources."""
    d, k, delta = 2, 2, 0.5
    h = condenser.CondenserMap.structured(d, k)
    total_floor = h.m - k * math.log2((1 + delta) / (1 - delta))
    rate_floor = bounds.theorem2_rate(d, delta)
    ok = True
    worst = math.inf
    for mu in _strong_sources(h.n, delta, n_sources, seed):
        report = condenser.analyze_condenser(h, mu, delta)
        worst = min(worst, report.output_min_entropy - total_floor)
        if (
            report.output_min_entropy < total_floor - TOL
            or report.output_rate < rate_floor - TOL
        ):
            ok = False
    return [
        PropertyResult(
            "theorem2.d2k2",
            ok,
            f"{n_sources} strong-SV sources n={h.n} at delta={delta}: "
            f"min total slack {worst:.3e} over floor {total_floor:.4f}",
        )
    ]


def suite_pinsker(
    seed: int = 0, n_dists: int = 1000, max_n: int = 6
) -> List[PropertyResult]:
    """Entropy-deficiency sandwich on random and degenerate distributions."""
    rng = np.random.default_rng(seed)
    ok = True
    worst_low = math.inf
    worst_high = math.inf
    count = 0

    def check(mu) -> None:
        nonlocal ok, worst_low, worst_high, count
        s = extractors.pinsker_sandwich(mu)
        worst_low = min(worst_low, s.deficit - s.lower)
        worst_high = min(worst_high, s.upper - s.deficit)
        if not s.holds(MASS_TOL):
            ok = False
        count += 1

    for i in range(n_dists):
        n = 1 + i % max_n
        if i % 3 == 2:
            # spiky draws exercise the near-deterministic corner
            probs = rng.dirichlet(np.full(1 << n, 0.1))
        else:
            probs = rng.random(1 << n)
            probs /= probs.sum()
        check(bitdist.JointDistribution(n, probs))
    for n in range(1, max_n + 1):
        check(bitdist.JointDistribution.uniform(n))
        check(bitdist.JointDistribution.point_mass(n, 0))
    return [
        PropertyResult(
            "pinsker.sandwich",
            ok,
            f"{count} distributions: min lower slack {worst_low:.3e}, "
            f"min upper slack {worst_high:.3e}",
        )
    ]


def suite_cond_extr(seed: int = 0, n_sources: int = 100) -> List[PropertyResult]:
    """Sliced-condenser extractor errors against the deficiency bound, plus
    the seed-averaged conditional-entropy identity."""
    delta = 0.5
    h = condenser.CondenserMap.structured(2, 2)  # n=6, m=4
    results = []
    sources = list(_strong_sources(h.n, delta, n_sources, seed))
    for D in (1, 2, 4):
        g = extractors.vse_from_condenser(h, D)
        bound_ok = True
        chain_ok = True
        pre_ok = True
        worst = math.inf
        for mu in sources:
            rep = extractors.vse_report(g, mu)
            if not rep.precondition_ok:
                pre_ok = False
                continue
            worst = min(worst, rep.claim_bound - rep.very_strong_error)
            if rep.very_strong_error > rep.claim_bound + TOL:
                bound_ok = False
            lhs = extractors.seed_conditional_entropy_average(g, mu)
            rhs = bitdist.shannon_entropy(
                bitdist.pushforward(mu, extractors.entropy_condenser_from_vse(g))
            ) / D
            if abs(lhs - rhs) > TOL:
                chain_ok = False
        results.append(
            PropertyResult(
                f"cond-extr.D{D}",
                bound_ok and chain_ok and pre_ok,
                f"{len(sources)} sources: min bound slack {worst:.3e}, "
                f"chain rule ok={chain_ok}, precondition ok={pre_ok}",
            )
        )
    return results


def suite_extr_cond(seed: int = 0, n_sources: int = 100) -> List[PropertyResult]:
    """Concatenation of a very strong extractor keeps high entropy rate, and
    slicing then concatenating reproduces the condenser exactly."""
    delta = 0.5
    h = condenser.CondenserMap.structured(2, 2)
    results = []
    sources = list(_strong_sources(h.n, delta, n_sources, seed))
    for D in (1, 2, 4):
        g = extractors.vse_from_condenser(h, D)
        concat = extractors.entropy_condenser_from_vse(g)
        roundtrip_ok = bool(np.array_equal(concat.table(), h.table()))
        entropy_ok = True
        worst = math.inf
        for mu in sources:
            delta_meas = extractors.very_strong_error(g, mu)
            floor = (
                D
                * g.m_out
                * extractors.claim_bound_extr_cond(min(delta_meas, 1.0), g.m_out).value
            )
            got = bitdist.shannon_entropy(bitdist.pushforward(mu, concat))
            worst = min(worst, got - floor)
            if got < floor - TOL:
                entropy_ok = False
        results.append(
            PropertyResult(
                f"extr-cond.D{D}",
                entropy_ok and roundtrip_ok,
                f"{len(sources)} sources: min entropy slack {worst:.3e}, "
                f"roundtrip identity {roundtrip_ok}",
            )
        )
    return results


def suite_stream_equiv(
    seed: int = 0, n_bytes: int = 1 << 20
) -> List[PropertyResult]:
    """Streaming output is bit-exact equal to blockwise condensing of the
    truncated bit sequence, for every supported d."""
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 256, size=n_bytes, dtype=np.uint8).tobytes()
    text = "".join(format(b, "08b") for b in data)
    results = []
    for d in range(hamming.MIN_D, hamming.MAX_D + 1):
        bl = (1 << d) - 1
        src = io.BytesIO(data)
        dst = io.BytesIO()
        t0 = time.perf_counter()
        stats = condenser.condense_stream(d, src, dst)
        elapsed = time.perf_counter() - t0
        usable = (len(text) // bl) * bl
        expected_bits = condenser.condense(d, text[:usable])
        emitted = dst.getvalue()
        emitted_bits = "".join(format(b, "08b") for b in emitted)
        out_whole = (len(expected_bits) // 8) * 8
        ok = (
            emitted_bits == expected_bits[:out_whole]
            and stats.input_tail_bits == len(text) - usable
            and stats.output_tail_bits == len(expected_bits) - out_whole
            and stats.blocks == usable // bl
        )
        throughput = n_bytes / (1 << 20) / elapsed if elapsed > 0 else math.inf
        results.append(
            PropertyResult(
                f"stream-equiv.d{d}",
                ok,
                f"{stats.blocks} blocks, tails in/out "
                f"{stats.input_tail_bits}/{stats.output_tail_bits}, "
                f"throughput {throughput:.1f} MiB/s",
            )
        )
    return results


SUITES: Dict[str, Callable[..., List[PropertyResult]]] = {
    "partition": suite_partition,
    "lemma-e1": suite_lemma_e1,
    "theorem1": suite_theorem1,
    "theorem2": suite_theorem2,
    "imbalance": suite_imbalance,
    "pinsker": suite_pinsker,
    "cond-extr": suite_cond_extr,
    "extr-cond": suite_extr_cond,
    "stream-equiv": suite_stream_equiv,
}


def run_suite(
    name: str, seed: int = 0, max_n: Optional[int] = None
) -> List[PropertyResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    fn = SUITES[name]
    kwargs = {"seed": seed}
    if max_n is not None:
        if name == "lemma-e1":
            kwargs["max_n"] = max_n
        elif name == "pinsker":
            kwargs["max_n"] = max_n
        elif name in ("partition", "theorem1"):
            kwargs["max_n"] = max_n
        # suites without a size knob ignore the flag
    return fn(**kwargs)
