"""Command-line surface: condensing, analysis, attacks, source generation,
and the verification suites.

Exit codes: 0 success / all checks hold, 1 a bound or membership check
failed, 2 usage or file-format error.  All stdout output is deterministic
given the flags and seed; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import __version__
from .attacks import AttackResult, attack_condenser
from .bitdist import (
    DimensionMismatchError,
    FileFormatError,
    SizeLimitError,
    dump_distribution,
    load_distribution,
)
from .bounds import build_report
from .condenser import CondenserMap, condense_stream, load_condenser_table
from .hamming import MAX_D, MIN_D
from .sv_models import (
    adversary_from_obj,
    adversary_to_obj,
    iid_biased,
    materialize,
    random_potential_strong_sv,
)
from .verify import SUITES, run_suite

ATTACK_VERSION = "attack_v1"
VERIFY_VERSION = "verify_v1"


def _attack_obj(res: AttackResult) -> dict:
    return {
        "version": ATTACK_VERSION,
        "n": res.n,
        "m": res.m,
        "delta": res.delta,
        "target_output": res.target_output,
        "fiber_size": res.fiber_size,
        "target_set_mass": res.target_set_mass,
        "lemma_bound": res.lemma_bound,
        "achieved_min_entropy": res.achieved_min_entropy,
        "theorem_bound": res.theorem_bound,
        "bound_holds": res.bound_holds,
        "adversary": adversary_to_obj(res.adversary),
    }


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fp:
            return json.load(fp)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _cmd_condense(args) -> int:
    t0 = time.perf_counter()
    with open(args.infile, "rb") as src, open(args.outfile, "wb") as dst:
        stats = condense_stream(args.d, src, dst)
    elapsed = time.perf_counter() - t0
    print(stats.summary(), file=sys.stderr)
    if elapsed > 0:
        mib = stats.bytes_in / (1 << 20)
        print(f"elapsed={elapsed:.3f}s throughput={mib / elapsed:.1f}MiB/s", file=sys.stderr)
    return 0


def _parse_condenser(spec: str, n: int) -> CondenserMap:
    """Either an integer d (structured, k inferred from n) or a table file."""
    try:
        d = int(spec)
    except ValueError:
        with open(spec, "r", encoding="utf-8") as fp:
            obj = json.load(fp)
        h = CondenserMap.from_obj(obj)
        if h.n != n:
            raise FileFormatError(f"condenser takes {h.n} bits, distribution has {n}")
        return h
    bl = (1 << d) - 1
    if not MIN_D <= d <= MAX_D or n % bl:
        raise FileFormatError(
            f"structured condenser needs d in {MIN_D}..{MAX_D} with (2**d - 1) | n"
        )
    return CondenserMap.structured(d, n // bl)


def _cmd_analyze(args) -> int:
    with open(args.dist, "r", encoding="utf-8") as fp:
        try:
            mu = load_distribution(fp)
        except json.JSONDecodeError as exc:
            raise FileFormatError(
                f"{args.dist}: invalid JSON at line {exc.lineno} "
                f"column {exc.colno}: {exc.msg}"
            ) from exc
    h = _parse_condenser(args.condenser, mu.n) if args.condenser else None
    if args.D is not None and h is None:
        raise FileFormatError("--D needs --condenser to slice")
    report = build_report(mu, args.delta, condenser=h, D=args.D)
    print(json.dumps(report.to_obj(), indent=2))
    return 0 if report.passed else 1


def _cmd_attack(args) -> int:
    obj = _load_json(args.function)
    F = CondenserMap.from_obj(obj)
    res = attack_condenser(F, args.delta)
    print(json.dumps(_attack_obj(res), indent=2))
    return 0 if res.bound_holds else 1


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed, max_n=args.max_n)
    if args.json:
        payload = {
            "version": VERIFY_VERSION,
            "suite": args.suite,
            "seed": args.seed,
            "results": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "all_passed": all(r.passed for r in results),
        }
        print(json.dumps(payload, indent=2))
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 1


def _cmd_gen_source(args) -> int:
    if args.kind == "iid":
        if args.n is None or args.p1 is None:
            raise FileFormatError("gen-source iid needs --n and --p1")
        mu = iid_biased(args.n, args.p1)
    elif args.kind == "potential":
        if args.n is None or args.delta is None:
            raise FileFormatError("gen-source potential needs --n and --delta")
        mu = random_potential_strong_sv(args.n, args.delta, args.seed)
    else:  # adversary
        if args.adversary is None:
            raise FileFormatError("gen-source adversary needs --adversary FILE")
        obj = _load_json(args.adversary)
        if isinstance(obj, dict) and "adversary" in obj:
            obj = obj["adversary"]  # accept a full attack result file
        mu = materialize(adversary_from_obj(obj))
    with open(args.out, "w", encoding="utf-8") as fp:
        dump_distribution(mu, fp)
    print(f"wrote n={mu.n} distribution to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svcondense",
        description=(
            "Hamming-syndrome condensing for semi-random bit sources, with "
            "exact entropy analysis, adversarial attacks, and verification "
            "suites."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("condense", help="stream bytes through the block condenser")
    p.add_argument("--d", type=int, required=True, choices=range(MIN_D, MAX_D + 1))
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--out", dest="outfile", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_condense)

    p = sub.add_parser("analyze", help="entropy report for a distribution file")
    p.add_argument("--dist", required=True, metavar="FILE")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument(
        "--condenser",
        metavar="D_OR_FILE",
        help="analyze the condensed output: an integer d or a table JSON file",
    )
    p.add_argument("--D", type=int, help="also slice into D seeds and report errors")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("attack", help="greedy SV attack against a table map")
    p.add_argument("--function", required=True, metavar="FILE")
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--max-n", type=int, default=None, dest="max_n")
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen-source", help="write a distribution file")
    p.add_argument("--kind", required=True, choices=("iid", "potential", "adversary"))
    p.add_argument("--n", type=int)
    p.add_argument("--p1", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--adversary", metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_gen_source)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileFormatError, SizeLimitError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
