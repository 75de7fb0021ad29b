"""Command-line front end: reproducible, scriptable pipelines over the library.

Subcommands
-----------
cf           expand the continued fraction of a family member and print
             quotients, monic denominators, betas, and approximation rates
verify       check a named identity over a range and emit a JSON report
witness      search for (or replay) a p-adic non-bad-approximability witness
table        reproduce the per-prime orbit table (first usable index, residue,
             passing a-classes)
eval         evaluate f_d(a) or g_d(a) to a certified error bound, optionally
             with a certified real continued-fraction prefix
demo-hensel  lift a witness root p-adically and locate an exponent that meets it

Exit codes (stable contract): 0 success; 1 verification failure or nothing
found within bounds; 2 quotient-shape violation (expected for d >= 4);
3 precision exhausted after retries; 4 invalid arguments or bounds.

All output is deterministic for identical inputs; JSON and CSV carry a
timestamp field that --no-timestamp suppresses (text output never has one).
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction

from .approx import eval_mahler, real_cf_prefix
from .contfrac import convergent_soundness, expand_family, monic_normalize
from .errors import (
    InsufficientPrecision,
    InvalidParameter,
    MahlerCFError,
    NotFound,
    PrecisionCascade,
    ScaleNotInvertible,
    SearchExhausted,
    ShapeViolation,
)
from .padic import (
    BadApproxWitness,
    check_conditions,
    convergent_denominators,
    hensel_divisibility_demo,
    orbit_table,
    orbit_table_csv,
    revalidate_witness,
    witness_from_check,
    witness_search,
)
from .structure import IDENTITY_NAMES, beta_sequence, verify_identity

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SHAPE = 2
EXIT_PRECISION = 3
EXIT_BAD_INPUT = 4

DEFAULT_P_BOUND = 40
DEFAULT_N0_BOUND = 16
DEFAULT_T_BOUND = 200
DEPTH_HARD_CAP = 2000


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the bad-input code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _parse_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return value


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _emit_json(payload: dict, args: argparse.Namespace) -> None:
    if not getattr(args, "no_timestamp", False):
        payload = dict(payload)
        payload["generated_at"] = _timestamp()
    print(json.dumps(payload, indent=2))


def _default_threads() -> int:
    raw = os.environ.get("MAHLERCF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_cf(args: argparse.Namespace) -> int:
    if args.d < 2:
        raise InvalidParameter("need d >= 2")
    if args.n < 1:
        raise InvalidParameter("need n >= 1")
    if args.n > DEPTH_HARD_CAP:
        raise InvalidParameter(f"depth {args.n} exceeds hard cap {DEPTH_HARD_CAP}")

    if args.kind == "G":
        # beta extraction enforces the quotient shape; d >= 4 violates it at a
        # small index and exits with the shape code.
        seq = beta_sequence(args.d, args.n)
        cf, monic = seq.expansion, seq.monic
        betas = [seq.beta(i) for i in range(2, args.n + 1)]
    else:
        cf, series = expand_family(args.d, args.kind, args.n, args.floor)
        monic = None
        betas = []
        convergent_soundness(series, cf)

    if args.output == "json":
        _emit_json(cf.to_json_dict(monic=monic), args)
        return EXIT_OK

    print(f"continued fraction of {args.kind.lower()}_{args.d}, {args.n} quotients")
    print(f"a_0 = {cf.partial_quotients[0]}")
    for i in range(1, len(cf.partial_quotients)):
        line = f"a_{i} = {cf.partial_quotients[i]}"
        conv = cf.convergents[i - 1]
        if conv.rate is not None:
            line += f"   [rate of convergent {i - 1}: {conv.rate}]"
        print(line)
    if monic is not None:
        print("monic denominators and betas:")
        for i in range(1, args.n + 1):
            beta_text = f"   beta_{i} = {monic.beta(i)}" if i >= 2 else ""
            print(f"qhat_{i} = {monic.monic_denominator(i)}{beta_text}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    name = args.identity
    if name == "bzz":
        if args.d is not None and args.d != 2:
            raise InvalidParameter("identity bzz is a d=2 statement")
        k_range = (2, args.n if args.n is not None else 200)
        d = 2
    elif name == "theorem1":
        k_range = args.m if args.m is not None else (0, 100)
        d = args.d if args.d is not None else 2
    elif name == "funceq":
        depth = args.floor if args.floor is not None else 200
        k_range = (0, abs(depth))
        d = args.d if args.d is not None else 2
    else:
        k_range = args.k if args.k is not None else (0, 30)
        d = args.d if args.d is not None else 3
    report = verify_identity(name, d, k_range)
    if args.output == "json":
        _emit_json(report.to_json_dict(), args)
    else:
        print(f"identity {report.identity} (d={report.d}, range {report.k_range}): {report.status}")
        for failure in report.failures:
            print(f"  failure: {failure}")
    return EXIT_OK if report.status == "pass" else EXIT_FAIL


def _witness_payload(witness: BadApproxWitness) -> dict:
    return witness.to_json_dict()


def _cmd_witness(args: argparse.Namespace) -> int:
    if args.replay is not None:
        with open(args.replay, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        witness = BadApproxWitness.from_json_dict(data)
        check = revalidate_witness(witness)
        verdict = "valid" if check.passed else "INVALID"
        print(
            f"replay witness a={witness.a} d={witness.d} p={witness.p} "
            f"n0={witness.n0} t={witness.t} residue={witness.residue}: {verdict}"
        )
        if not check.passed:
            print(f"  conditions: {check.verdicts}")
            return EXIT_FAIL
        return EXIT_OK

    if args.a is None or args.d is None:
        raise InvalidParameter("witness requires --a and --d (or --replay FILE)")
    for bound_name in ("p_bound", "n0_bound", "t_bound"):
        if getattr(args, bound_name) < 1:
            raise InvalidParameter(f"--{bound_name.replace('_', '-')} must be positive")
    threads = args.threads if args.threads is not None else _default_threads()
    try:
        witness = witness_search(
            args.a, args.d, args.p_bound, args.n0_bound, args.t_bound, threads=threads
        )
    except NotFound as exc:
        print(f"no witness found: {exc}")
        return EXIT_FAIL
    payload = _witness_payload(witness)
    if args.save is not None:
        with open(args.save, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
    if args.output == "json":
        _emit_json(payload, args)
    else:
        print(
            f"witness for a={witness.a}, d={witness.d}: p={witness.p}, "
            f"n0={witness.n0}, t={witness.t}, residue={witness.residue}"
        )
        print(f"  conditions: {witness.conditions}")
        if args.save is not None:
            print(f"  saved to {args.save}; replay with: mahlercf witness --replay {args.save}")
        else:
            print("  save with --save FILE and replay with: mahlercf witness --replay FILE")
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    if args.d != 2:
        raise InvalidParameter("the orbit table is defined for d = 2")
    if args.primes is not None:
        primes = args.primes
    else:
        from sympy import primerange

        primes = [int(p) for p in primerange(3, args.p_max + 1)]
    if not primes:
        raise InvalidParameter("no primes requested")
    if args.t_bound < 1:
        raise InvalidParameter("--t-bound must be positive")
    rows = orbit_table(primes, args.t_bound, d=args.d, include_missing=args.include_missing)
    if args.output == "json":
        payload = {
            "d": args.d,
            "t_bound": args.t_bound,
            "rows": [
                {
                    "p": row.p,
                    "t": row.t,
                    "residue": row.residue,
                    "orbit": list(row.orbit),
                    "a_classes": list(row.a_classes),
                }
                for row in rows
            ],
        }
        _emit_json(payload, args)
    elif args.output == "csv":
        if not args.no_timestamp:
            print(f"# generated_at: {_timestamp()}")
        print(orbit_table_csv(rows), end="")
    else:
        for row in rows:
            classes = ", ".join(f"+-{c}" for c in row.a_classes)
            print(f"p={row.p}: first t={row.t}, residue={row.residue}, a in {{{classes}}} mod {row.p**2}")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    value = eval_mahler(args.a, args.d, args.eps, args.which)
    prefix = real_cf_prefix(value, args.cf_terms) if args.cf_terms else None
    if args.output == "json":
        payload = value.to_json_dict()
        if prefix is not None:
            payload["cf_prefix"] = prefix
        _emit_json(payload, args)
    else:
        print(f"{value.target} = {value.decimal()}  (error <= {value.error_bound})")
        if prefix is not None:
            print(f"certified continued-fraction prefix: {prefix}")
    return EXIT_OK


def _cmd_demo_hensel(args: argparse.Namespace) -> int:
    denominators = convergent_denominators(args.d, args.t)
    check = check_conditions(args.a, args.d, args.p, args.n0, args.t, denominators[args.t])
    if not check.passed:
        print(
            f"conditions fail at a={args.a}, d={args.d}, p={args.p}, "
            f"n0={args.n0}, t={args.t}: {check.verdicts}"
        )
        return EXIT_FAIL
    witness = witness_from_check(check)
    try:
        demo = hensel_divisibility_demo(witness, args.m, args.cap)
    except SearchExhausted as exc:
        print(f"no exponent found: {exc}")
        return EXIT_FAIL
    payload = {
        "a": args.a,
        "d": args.d,
        "p": args.p,
        "t": args.t,
        "m": demo.m,
        "lifted_root": demo.lifted_root,
        "n": demo.n,
        "exponent_residue": demo.exponent_residue,
        "evaluation": demo.evaluation,
    }
    if args.output == "json":
        _emit_json(payload, args)
    else:
        print(
            f"root {witness.residue} mod {args.p}^2 lifts to {demo.lifted_root} "
            f"mod {args.p}^{demo.m}"
        )
        print(
            f"n = {demo.n}: {args.a}^{args.d}^{demo.n} = {demo.exponent_residue} "
            f"mod {args.p}^{demo.m}, and q_{args.t} evaluates to {demo.evaluation} there"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="mahlercf", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, outputs: tuple[str, ...]) -> None:
        p.add_argument("--output", choices=outputs, default="text")
        p.add_argument("--no-timestamp", action="store_true")

    p_cf = sub.add_parser("cf", help="expand a continued fraction")
    p_cf.add_argument("--d", type=int, required=True)
    p_cf.add_argument("--n", type=int, required=True)
    p_cf.add_argument("--kind", choices=("F", "G", "H", "U"), default="G")
    p_cf.add_argument("--floor", type=int, default=None)
    add_common(p_cf, ("text", "json"))

    p_verify = sub.add_parser("verify", help="verify a named identity")
    p_verify.add_argument("--identity", choices=IDENTITY_NAMES, required=True)
    p_verify.add_argument("--d", type=int, default=None)
    p_verify.add_argument("--k", type=_parse_range, default=None, metavar="A..B")
    p_verify.add_argument("--m", type=_parse_range, default=None, metavar="A..B")
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--floor", type=int, default=None)
    add_common(p_verify, ("text", "json"))

    p_witness = sub.add_parser("witness", help="search for or replay a witness")
    p_witness.add_argument("--a", type=int, default=None)
    p_witness.add_argument("--d", type=int, default=None)
    p_witness.add_argument("--p-bound", type=int, default=DEFAULT_P_BOUND)
    p_witness.add_argument("--n0-bound", type=int, default=DEFAULT_N0_BOUND)
    p_witness.add_argument("--t-bound", type=int, default=DEFAULT_T_BOUND)
    p_witness.add_argument("--threads", type=int, default=None)
    p_witness.add_argument("--save", default=None, metavar="FILE")
    p_witness.add_argument("--replay", default=None, metavar="FILE")
    add_common(p_witness, ("text", "json"))

    p_table = sub.add_parser("table", help="per-prime orbit table")
    p_table.add_argument("--d", type=int, default=2)
    p_table.add_argument("--primes", type=_parse_primes, default=None)
    p_table.add_argument("--p-max", type=int, default=37)
    p_table.add_argument("--t-bound", type=int, default=DEFAULT_T_BOUND)
    p_table.add_argument("--include-missing", action="store_true")
    add_common(p_table, ("text", "json", "csv"))

    p_eval = sub.add_parser("eval", help="certified numeric evaluation")
    p_eval.add_argument("--a", type=int, required=True)
    p_eval.add_argument("--d", type=int, required=True)
    p_eval.add_argument("--which", choices=("F", "G"), default="F")
    p_eval.add_argument("--eps", type=_parse_fraction, default=Fraction(1, 10**12))
    p_eval.add_argument("--cf-terms", type=int, default=0)
    add_common(p_eval, ("text", "json"))

    p_hensel = sub.add_parser("demo-hensel", help="p-adic root lifting demo")
    p_hensel.add_argument("--a", type=int, required=True)
    p_hensel.add_argument("--d", type=int, required=True)
    p_hensel.add_argument("--p", type=int, required=True)
    p_hensel.add_argument("--n0", type=int, required=True)
    p_hensel.add_argument("--t", type=int, required=True)
    p_hensel.add_argument("--m", type=int, default=3)
    p_hensel.add_argument("--cap", type=int, default=None)
    add_common(p_hensel, ("text", "json"))

    return parser


_DISPATCH = {
    "cf": _cmd_cf,
    "verify": _cmd_verify,
    "witness": _cmd_witness,
    "table": _cmd_table,
    "eval": _cmd_eval,
    "demo-hensel": _cmd_demo_hensel,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ShapeViolation as exc:
        print(f"quotient shape violated at index {exc.index}: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (InsufficientPrecision, PrecisionCascade) as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (InvalidParameter, ScaleNotInvertible) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except MahlerCFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
