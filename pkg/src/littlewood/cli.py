"""Command-line driver for constructions, merit reports, sweeps, and checks.

Subcommands:
    construct   build one sequence and write it in the plain-text format
    merit       score one sequence (exact + DFT paths) at one rotation
    sweep       run a theorem sweep (--theorem 2..7) over an (n, r) grid
    exhaustive  shorthand for sweep --theorem 7
    verify      run the identity suite; nonzero exit on any failure

Rotations are always given as exact rationals p/q so the shift floor(n*r)
has no floating-point edge cases.  Exit codes: 0 success, 1 identity
failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .experiments import (
    SweepConfig,
    default_r_grid,
    make_completion,
    odd_squarefree_upto,
    run_sweep,
    verify_identities,
    write_csv,
    _report_row,
)
from .numbers import AdmissibilityError, factor_odd_squarefree
from .norms import IdentityFailure, ZeroDenominatorError, build_merit_report
from .sequences import Rotation, character_polynomial, complete, rotate, write_sequence

CONSTRUCT_CHOICES = (
    "character",
    "plus_one",
    "minus_one",
    "all_ones",
    "jacobi_product",
    "two_prime",
    "random",
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r} ({exc})")


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _r_grid(text: str) -> tuple[Fraction, ...]:
    if text == "default":
        return default_r_grid()
    return tuple(_fraction(tok) for tok in text.replace(",", " ").split())


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="single modulus (odd square-free > 1)")
    p.add_argument("--n-list", type=_int_list, help="comma-separated moduli")
    p.add_argument("--r", type=_fraction, help="rotation as a rational p/q")
    p.add_argument(
        "--r-grid", type=_r_grid,
        help="'default' for {k/64: k=-31..32} or a comma-separated list of rationals",
    )
    p.add_argument("--completion", choices=CONSTRUCT_CHOICES, help="completion family")
    p.add_argument("--seed", type=int, default=0, help="master seed for random draws")
    p.add_argument("--samples", type=int, default=50, help="random completions per cell")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", help="output file (CSV for sweeps, text for construct)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="littlewood",
        description="Jacobi-symbol character polynomials and their Littlewood completions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("construct", "build one sequence and print/write its text form"),
        ("merit", "exact merit report for one sequence"),
        ("sweep", "theorem-level sweep over an (n, r) grid"),
        ("exhaustive", "enumerate all completions (sweep --theorem 7)"),
        ("verify", "run the identity suite"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--theorem", type=int, choices=(2, 3, 4, 5, 6, 7), required=True)
    return parser


def _moduli(args) -> tuple[int, ...]:
    if args.n_list:
        return args.n_list
    if args.n:
        return (args.n,)
    raise AdmissibilityError("need --n or --n-list")


def _grid(args) -> tuple[Fraction, ...]:
    if args.r_grid:
        return args.r_grid
    if args.r is not None:
        return (args.r,)
    return default_r_grid()


def _build_sequence(args):
    m = factor_odd_squarefree(args.n)
    rot = Rotation(args.r if args.r is not None else Fraction(0))
    label = args.completion or "character"
    if label == "character":
        seq = character_polynomial(m)
    else:
        seed = args.seed if label == "random" else None
        seq = complete(character_polynomial(m), make_completion(m, label, seed))
    return m, rot, label, rotate(seq, rot)


def cmd_construct(args) -> int:
    if not args.n:
        raise AdmissibilityError("construct needs --n")
    _, _, _, seq = _build_sequence(args)
    if args.out:
        with open(args.out, "w") as fh:
            write_sequence(seq, fh)
    else:
        write_sequence(seq, sys.stdout)
    return 0


def cmd_merit(args) -> int:
    if not args.n:
        raise AdmissibilityError("merit needs --n")
    m, rot, label, seq = _build_sequence(args)
    seed = args.seed if label == "random" else None
    rep = build_merit_report(seq, rot, label, seed=seed)
    print(
        f"n={rep.n} r={rot} completion={label} l2sq={rep.l2sq} "
        f"l4^4={rep.l4p4_exact} F={rep.F:.6f} f(r)={rep.f_of_r:.6f} "
        f"|F-f|={abs(rep.F - rep.f_of_r):.6f}"
    )
    if args.out:
        write_csv([_report_row(0, m, rep)], args.out)
    return 0


def cmd_sweep(args, theorem: int | None = None) -> int:
    theorem = theorem if theorem is not None else args.theorem
    cfg = SweepConfig(
        n_list=_moduli(args),
        r_grid=_grid(args),
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
    )
    rows = run_sweep(theorem, cfg)
    if not args.out:
        raise AdmissibilityError("sweep needs --out FILE.csv")
    write_csv(rows, args.out)
    print(f"theorem {theorem}: wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_verify(args) -> int:
    n_list = args.n_list or ((args.n,) if args.n else odd_squarefree_upto(105))
    report = verify_identities(n_list)
    for name in sorted(report.counts):
        print(f"{name}: {report.counts[name]} checks")
    if report.ok:
        print(f"all identities verified over n in {list(n_list)}")
        return 0
    for failure in report.failures:
        print(f"FAIL {failure}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "construct":
            return cmd_construct(args)
        if args.command == "merit":
            return cmd_merit(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "exhaustive":
            return cmd_sweep(args, theorem=7)
        if args.command == "verify":
            return cmd_verify(args)
        raise AdmissibilityError(f"unknown command {args.command!r}")
    except (AdmissibilityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ZeroDenominatorError as exc:
        print(f"error: merit factor undefined: {exc}", file=sys.stderr)
        return 2
    except IdentityFailure as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
