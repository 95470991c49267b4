"""Command-line front end.

Exit codes (stable, for scripting):

    0   success / factored / audit completed
    2   the attack does not apply to the input (not a crash)
    64  usage error (bad flags, unparsable argument)
    65  data error (input outside the algorithm's domain, bad batch lines)

Plain output is line oriented. ``audit`` prints one line per modulus::

    <modulus> <VERDICT> [factors=<f>,<g>] [r=<r> s=<s>] [n0=<n0> i=<i>] elapsed_ms=<ms>
    <input> ERROR <message>

With ``--json`` every report is a single-line JSON object with the keys
``modulus``, ``verdict``, ``factors``, ``r``, ``s``, ``i``, ``n0`` and
``elapsed_ms``; integers other than ``elapsed_ms`` are decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, NoReturn, Sequence, TextIO

from . import __version__
from .bench import SweepSpec, run_sweep, to_csv
from .errors import CloseFactorError, DomainError
from .fermat import FactorPair, NotApplicable, PerfectSquare, Success, close_factor, count_squares
from .keygen import Mode, ModulusRecipe, gen_modulus
from .multiplier import MultiplierHit, SearchConfig, search_multiplier

EXIT_OK = 0
EXIT_NOT_APPLICABLE = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class Verdict(str, Enum):
    VULNERABLE_CLOSE_GAP = "VULNERABLE_CLOSE_GAP"
    VULNERABLE_WITH_MULTIPLIER = "VULNERABLE_WITH_MULTIPLIER"
    NOT_VULNERABLE_AT_TESTED_DEPTH = "NOT_VULNERABLE_AT_TESTED_DEPTH"


@dataclass(frozen=True)
class AuditReport:
    modulus: int
    verdict: Verdict
    evidence: FactorPair | MultiplierHit | None
    r_max_tested: int
    elapsed_ms: int

    def factors(self) -> tuple[int, int] | None:
        if isinstance(self.evidence, FactorPair):
            return self.evidence.f, self.evidence.g
        if isinstance(self.evidence, MultiplierHit):
            d = self.evidence.divisor
            return tuple(sorted((d, self.modulus // d)))  # type: ignore[return-value]
        return None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "modulus": str(self.modulus),
            "verdict": self.verdict.value,
            "factors": None,
            "r": None,
            "s": None,
            "i": None,
            "n0": None,
            "elapsed_ms": self.elapsed_ms,
        }
        f = self.factors()
        if f is not None:
            out["factors"] = [str(x) for x in f]
        ev = self.evidence
        if isinstance(ev, MultiplierHit):
            out.update(r=str(ev.r), s=str(ev.s), i=str(ev.i), n0=str(ev.n0))
        elif isinstance(ev, FactorPair):
            half = ev.gap // 2
            out.update(r="1", s="1", i=str(half), n0=str(ev.f + half))
        return out

    def to_line(self) -> str:
        parts = [str(self.modulus), self.verdict.value]
        f = self.factors()
        if f is not None:
            parts.append(f"factors={f[0]},{f[1]}")
        if isinstance(self.evidence, MultiplierHit):
            ev = self.evidence
            parts += [f"r={ev.r}", f"s={ev.s}", f"n0={ev.n0}", f"i={ev.i}"]
        parts.append(f"elapsed_ms={self.elapsed_ms}")
        return " ".join(parts)


def parse_int(text: str) -> int:
    """Parse a positive integer in decimal, or hexadecimal with a 0x prefix."""
    t = text.strip()
    try:
        if t[:2].lower() == "0x":
            value = int(t[2:], 16)
        else:
            if not t.isdigit():
                raise ValueError
            value = int(t, 10)
    except ValueError:
        raise ValueError(f"not an integer: {text!r}") from None
    if value < 1:
        raise ValueError(f"not a positive integer: {text!r}")
    return value


def audit(n: int, r_max: int = 1, s_max: int = 1) -> AuditReport:
    """Classify one modulus; raises DomainError for even or tiny input."""
    t0 = time.perf_counter()
    outcome = close_factor(n)
    evidence: FactorPair | MultiplierHit | None = None
    if isinstance(outcome, Success):
        verdict, evidence = Verdict.VULNERABLE_CLOSE_GAP, outcome.pair
    elif isinstance(outcome, PerfectSquare):
        verdict = Verdict.VULNERABLE_CLOSE_GAP
        evidence = FactorPair(outcome.root, outcome.root)
    else:
        verdict = Verdict.NOT_VULNERABLE_AT_TESTED_DEPTH
        if r_max > 1:
            hit = search_multiplier(n, SearchConfig(r_max, s_max))
            if hit is not None:
                verdict, evidence = Verdict.VULNERABLE_WITH_MULTIPLIER, hit
    elapsed = round((time.perf_counter() - t0) * 1000)
    return AuditReport(n, verdict, evidence, r_max, elapsed)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which collides with EXIT_NOT_APPLICABLE.
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive(text: str) -> int:
    try:
        return parse_int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _natural(text: str) -> int:
    if text.strip() == "0":
        return 0
    return _positive(text)


def _emit(obj: dict[str, Any], out: TextIO) -> None:
    out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def cmd_factor(args: argparse.Namespace, out: TextIO) -> int:
    n = args.n
    t0 = time.perf_counter()
    try:
        outcome = close_factor(n)
    except DomainError as exc:
        return _data_error(args, out, str(n), str(exc))
    elapsed = round((time.perf_counter() - t0) * 1000)
    rec: dict[str, Any] = {"modulus": str(n), "verdict": None, "factors": None, "i": None, "n0": None}
    if isinstance(outcome, Success):
        f, g = outcome.pair.f, outcome.pair.g
        rec.update(verdict="FACTORED", factors=[str(f), str(g)], i=str(outcome.i), n0=str(outcome.n0))
        line, code = f"{f} {g}", EXIT_OK
    elif isinstance(outcome, PerfectSquare):
        root = outcome.root
        rec.update(verdict="PERFECT_SQUARE", factors=[str(root), str(root)])
        line, code = f"{root} {root}", EXIT_OK
    else:
        assert isinstance(outcome, NotApplicable)
        rec.update(verdict="NOT_APPLICABLE", residual=str(outcome.residual))
        line = f"not-applicable: residual {outcome.residual} is not a perfect square"
        code = EXIT_NOT_APPLICABLE
    rec["elapsed_ms"] = elapsed
    if args.json:
        _emit(rec, out)
    else:
        out.write(line + "\n")
    return code


def _data_error(args: argparse.Namespace, out: TextIO, text: str, msg: str) -> int:
    if args.json:
        _emit({"modulus": text, "verdict": "ERROR", "error": msg}, out)
    else:
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_DATA


def _audit_line(job: tuple[str, int, int]) -> tuple[str, AuditReport | None, str]:
    text, r_max, s_max = job
    try:
        return text, audit(parse_int(text), r_max, s_max), ""
    except (ValueError, CloseFactorError) as exc:
        return text, None, str(exc)


def _batch_lines(source: str) -> Iterable[str]:
    if source == "-":
        stream: TextIO = sys.stdin
        for line in stream:
            yield line.rstrip("\r\n")
        return
    with open(source, encoding="utf-8") as fh:
        for line in fh:
            yield line.rstrip("\r\n")


def cmd_audit(args: argparse.Namespace, out: TextIO) -> int:
    if args.batch is None:
        if args.n is None:
            raise _UsageError("audit: give a modulus or --batch")
        try:
            parse_int(args.n)
        except ValueError as exc:
            raise _UsageError(f"audit: {exc}") from None
        inputs: Iterable[str] = [args.n]
    else:
        if args.n is not None:
            raise _UsageError("audit: a modulus argument and --batch are exclusive")
        inputs = _batch_lines(args.batch)

    jobs = ((text, args.r_max, args.s_max) for text in inputs)
    if args.jobs > 1:
        pool = ProcessPoolExecutor(args.jobs)
        results: Iterable[tuple[str, AuditReport | None, str]] = pool.map(_audit_line, jobs, chunksize=16)
    else:
        pool = None
        results = map(_audit_line, jobs)

    failed = False
    try:
        for text, report, err in results:
            if report is None:
                failed = True
                if args.json:
                    _emit({"modulus": text, "verdict": "ERROR", "error": err}, out)
                else:
                    out.write(f"{text} ERROR {err}\n")
            elif args.json:
                _emit(report.to_json(), out)
            else:
                out.write(report.to_line() + "\n")
    finally:
        if pool is not None:
            pool.shutdown()
    return EXIT_DATA if failed else EXIT_OK


def cmd_search(args: argparse.Namespace, out: TextIO) -> int:
    try:
        hit = search_multiplier(args.n, SearchConfig(args.r_max, args.s_max))
    except DomainError as exc:
        return _data_error(args, out, str(args.n), str(exc))
    if hit is None:
        if args.json:
            _emit({"modulus": str(args.n), "verdict": "NOT_FOUND"}, out)
        else:
            out.write("not-found\n")
        return EXIT_NOT_APPLICABLE
    if args.json:
        _emit(
            {
                "modulus": str(args.n),
                "verdict": "FOUND",
                "factors": [str(hit.divisor), str(args.n // hit.divisor)],
                "r": str(hit.r),
                "s": str(hit.s),
                "n0": str(hit.n0),
                "i": str(hit.i),
            },
            out,
        )
    else:
        out.write(f"{hit.divisor} {args.n // hit.divisor} r={hit.r} s={hit.s} n0={hit.n0} i={hit.i}\n")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    try:
        recipe = ModulusRecipe(Mode(args.mode), bits=args.bits, alpha=args.alpha, seed=args.seed)
    except DomainError as exc:
        raise _UsageError(f"gen: {exc}") from None
    try:
        n, p, q = gen_modulus(recipe)
    except CloseFactorError as exc:
        return _data_error(args, out, "", str(exc))
    if args.json:
        _emit({"n": str(n), "p": str(p), "q": str(q), "mode": recipe.mode.value, "seed": recipe.seed}, out)
    else:
        out.write(f"n={n} p={p} q={q} mode={recipe.mode.value}\n")
    return EXIT_OK


def cmd_count_squares(args: argparse.Namespace, out: TextIO) -> int:
    if args.n > args.m:
        raise _UsageError(f"count-squares: need n <= m, got {args.n} > {args.m}")
    c = count_squares(args.n, args.m)
    if args.json:
        _emit({"n": str(args.n), "m": str(args.m), "count": str(c)}, out)
    else:
        out.write(f"{c}\n")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    try:
        mults = [Fraction(m) for m in args.mult]
        spec = SweepSpec(args.bits, mults, args.trials, args.seed)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"bench: {exc}") from None
    out.write(to_csv(run_sweep(spec, workers=args.jobs)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="closefactor", description="Close-factor attack toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit one JSON object per report")

    p = sub.add_parser("factor", help="run the one-shot close-factor attack")
    p.add_argument("n", type=_positive)
    common(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("audit", help="classify moduli as vulnerable or not")
    p.add_argument("n", nargs="?", help="a single modulus (omit with --batch)")
    p.add_argument("--batch", nargs="?", const="-", metavar="FILE", help="read one modulus per line (default stdin)")
    p.add_argument("--r-max", type=_positive, default=1)
    p.add_argument("--s-max", type=_positive, default=1)
    p.add_argument("--jobs", type=_positive, default=1)
    common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("search", help="sweep odd multipliers for a divisor")
    p.add_argument("n", type=_positive)
    p.add_argument("--r-max", type=_positive, default=99)
    p.add_argument("--s-max", type=_positive, default=1)
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", help="generate a test modulus")
    p.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    p.add_argument("--bits", type=_positive, default=64)
    p.add_argument("--alpha", type=_positive, default=1)
    p.add_argument("--seed", type=_natural, default=0)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count-squares", help="count squares x^2 with n < x^2 <= m")
    p.add_argument("n", type=_natural)
    p.add_argument("m", type=_natural)
    common(p)
    p.set_defaults(func=cmd_count_squares)

    p = sub.add_parser("bench", help="success-rate sweep, CSV on stdout")
    p.add_argument("--bits", type=_positive, nargs="+", default=[32, 64, 128])
    p.add_argument("--mult", nargs="+", default=["0", "1/2", "1", "9/8", "5/4", "2"])
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--seed", type=_natural, default=0)
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
