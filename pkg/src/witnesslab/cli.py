"""Command-line interface.

Verdict and summary lines go to stdout as key=value pairs; row data is
CSV (fixed header) or newline-delimited JSON mirroring the same
columns.  Exit codes: 0 for a completed run (whatever the verdict),
2 for invalid arguments, 3 when an oracle check finds a mismatch, 1
for unexpected runtime failures.

The default seed comes from the WITNESSLAB_SEED environment variable
(0 when unset); --seed overrides it.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import analysis, galois, product, witness
from .analysis import AdversarialConfig, FixedEll, SmallestEll
from .galois import NoConductor, PerfectPower
from .numth import lcm_range
from .rng import CounterRng, default_seed

CSV_HEADER = ["n", "composite", "F", "MR", "Gal", "D", "H", "k", "Str", "ell", "skip"]


def _record_cells(rec: analysis.SweepRecord) -> list:
    def opt(value):
        return "" if value is None else value

    return [
        rec.n,
        1 if rec.composite else 0,
        rec.F,
        rec.MR,
        opt(rec.Gal),
        opt(rec.D),
        opt(rec.H),
        opt(rec.k_cofactor),
        opt(rec.Str_r),
        opt(rec.ell),
        opt(rec.skipped_reason),
    ]


def _record_object(rec: analysis.SweepRecord) -> dict:
    return {
        "n": rec.n,
        "composite": rec.composite,
        "F": rec.F,
        "MR": rec.MR,
        "Gal": rec.Gal,
        "D": rec.D,
        "H": rec.H,
        "k": rec.k_cofactor,
        "Str": rec.Str_r,
        "ell": rec.ell,
        "skip": rec.skipped_reason,
    }


def _parse_ell_policy(text: str):
    if text == "auto":
        return SmallestEll()
    if text.startswith("fixed:"):
        return FixedEll(int(text.split(":", 1)[1]))
    if text == "smallest":
        return SmallestEll()
    if text.startswith("smallest:"):
        return SmallestEll(int(text.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(
        f"expected auto, fixed:<ell> or smallest[:<max>], got {text!r}"
    )


def _parse_modulus(text: str) -> int:
    if text.startswith("lcm:"):
        return lcm_range(int(text.split(":", 1)[1]))
    return int(text)


def _odd_n(text: str) -> int:
    n = int(text)
    if n < 3 or n % 2 == 0:
        raise argparse.ArgumentTypeError("n must be odd and >= 3")
    return n


def _conductor_arg(text: str):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected auto or an integer, got {text!r}")


def _emit(**fields) -> None:
    print(" ".join(f"{k}={v}" for k, v in fields.items() if v is not None))


def cmd_test(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    ell = args.ell
    try:
        verdict = product.stronger_test(args.n, args.rounds, ell, CounterRng(seed))
    except PerfectPower as power:
        _emit(
            n=args.n,
            verdict="composite",
            reason="perfect-power",
            factor=power.base,
            exponent=power.exponent,
        )
        return 0
    except NoConductor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fields = {"n": args.n, "verdict": verdict.outcome}
    if verdict.evidence is not None:
        kind, detail = verdict.evidence
        if kind == "factor":
            fields["factor"] = detail
        elif kind == "mr-round":
            fields["stage"] = "miller-rabin"
            fields["round"] = detail
        else:
            fields["stage"] = "galois"
    fields["rounds"] = args.rounds
    if ell is not None:
        fields["ell"] = ell
    fields["seed"] = seed
    _emit(**fields)
    return 0


def cmd_count(args) -> int:
    policy = args.ell
    rec = analysis.examine(args.n, args.rounds, policy)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerow(_record_cells(rec))
    return 0


def cmd_sweep(args) -> int:
    policy = args.ell
    if isinstance(policy, FixedEll) and galois.conductor_failure(3, policy.ell) == "conductor-not-prime":
        print(f"error: {policy.ell} is not a usable conductor", file=sys.stderr)
        return 2
    with open(args.out, "w", newline="") as handle:
        if args.format == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)

            def sink(rec):
                writer.writerow(_record_cells(rec))

        else:

            def sink(rec):
                handle.write(json.dumps(_record_object(rec), separators=(",", ":")))
                handle.write("\n")

        agg = analysis.sweep(
            args.max, args.rounds, policy, workers=args.workers, record_sink=sink
        )
    _emit(
        x=agg.x,
        visited=agg.count_visited,
        composite=agg.count_composite,
        covered=agg.count_covered,
        covered_composite=agg.count_covered_composite,
        skipped=agg.count_skipped,
        sum_F=agg.sum_F,
        sum_MR_r=agg.sum_MR_r,
        sum_Gal=agg.sum_Gal,
        sum_Str=agg.sum_Str,
        sum_log_F=repr(agg.sum_log_F.value()),
        sum_log_MR_r=repr(agg.sum_log_MR_r.value()),
        sum_log_H=repr(agg.sum_log_H.value()),
        out=args.out,
    )
    if isinstance(policy, FixedEll):
        report = analysis.compare_bounds(agg, policy.ell - 1, args.rounds)
        for line in report.render():
            print(line)
    else:
        print("bounds report: skipped (needs a fixed conductor, so d is constant)")
    return 0


def cmd_constants(args) -> int:
    c1_val, c1_tail = analysis.eval_c1(args.bound)
    c3_val, c3_tail = analysis.eval_c3(args.d, args.bound)
    _emit(c1=repr(c1_val), tail=repr(c1_tail), bound=args.bound)
    _emit(c3=repr(c3_val), d=args.d, tail=repr(c3_tail), bound=args.bound)
    return 0


def cmd_adversary(args) -> int:
    cfg = AdversarialConfig(
        M=args.M,
        prime_bound=args.pool_bound,
        cutoff=args.cutoff,
        k=args.k,
        q_search_limit=args.q_limit,
    )
    seed = args.seed if args.seed is not None else default_seed()
    outcome = analysis.adversarial_generate(cfg, CounterRng(seed))
    _emit(
        n=outcome.n,
        s=outcome.s,
        q=outcome.q,
        floor=outcome.predicted_floor,
        chosen=",".join(str(p) for p in outcome.chosen),
        pool=",".join(str(p) for p in outcome.pool),
        M=cfg.M,
        seed=seed,
    )
    return 0


def cmd_oracle_check(args) -> int:
    mismatches = 0
    for n in range(3, args.max + 1, 2):
        if args.suite == "f":
            formula, brute = witness.count_F(n), witness.brute_F(n)
        elif args.suite == "mr":
            formula, brute = witness.count_MR(n), witness.brute_MR(n)
        else:
            if galois.conductor_failure(n, 3) is not None or n * n > 10**6:
                continue
            formula, brute = galois.count_Gal(n, 3), galois.brute_Gal(n, 3)
        status = "pass" if formula == brute else "fail"
        if status == "fail":
            mismatches += 1
        _emit(n=n, suite=args.suite, formula=formula, brute=brute, status=status)
    if mismatches:
        print(f"error: {mismatches} oracle mismatches", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="witnesslab",
        description="Exact bad-witness counts for compositeness tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the combined Miller-Rabin + Galois test")
    p.add_argument("n", type=_odd_n)
    p.add_argument("--rounds", type=int, default=2, help="Miller-Rabin rounds")
    p.add_argument("--ell", type=_conductor_arg, default="auto", help="conductor: auto or a prime")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("count", help="exact counts for one n as a CSV row")
    p.add_argument("n", type=_odd_n)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--ell", type=_parse_ell_policy, default="auto",
                   help="auto, fixed:<ell> or smallest[:<max>]")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sweep", help="counts for every odd n up to a bound")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--ell", type=_parse_ell_policy, default="fixed:3",
                   help="fixed:<ell> or smallest[:<max>]")
    p.add_argument("--out", required=True, help="row output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("constants", help="series constants with tail majorants")
    p.add_argument("--d", type=int, default=2, help="extension degree")
    p.add_argument("--bound", type=int, default=10**5, help="prime-power cutoff")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("adversary", help="build n with a guaranteed witness floor")
    p.add_argument("--M", type=_parse_modulus, default=lcm_range(12), help="modulus, or lcm:<B>")
    p.add_argument("--pool-bound", type=int, default=200)
    p.add_argument("--cutoff", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--q-limit", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("oracle-check", help="closed forms against enumeration")
    p.add_argument("--suite", choices=("f", "mr", "gal"), required=True)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
