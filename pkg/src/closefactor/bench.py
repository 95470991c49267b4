"""Success-rate and latency sweep of the close-factor attack.

Each cell of the sweep is a (bit size, gap multiplier) pair. A trial draws a
balanced prime ``p`` and takes ``q`` as the largest prime within
``multiplier * 2**((k+5)/4)`` of it, then times one call to ``close_factor``.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .arith import bit_size, iroot4
from .errors import DomainError
from .fermat import Success, close_factor
from .keygen import balanced_range, next_prime, prev_prime, random_prime

__all__ = ["SweepSpec", "CellResult", "target_gap", "run_sweep", "to_csv", "CSV_COLUMNS"]

CSV_COLUMNS = ("bit_size", "gap_multiplier", "trials", "successes", "success_fraction", "median_us")

GEN_RETRIES = 50


@dataclass(frozen=True)
class SweepSpec:
    bit_sizes: Sequence[int]
    gap_multipliers: Sequence[Fraction | int | str]
    trials_per_cell: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials_per_cell < 1:
            raise DomainError("trials_per_cell must be >= 1")
        if any(b < 16 for b in self.bit_sizes):
            raise DomainError("bit sizes must be >= 16")
        mults = tuple(Fraction(m) for m in self.gap_multipliers)
        if any(m < 0 for m in mults):
            raise DomainError("gap multipliers must be non-negative")
        object.__setattr__(self, "bit_sizes", tuple(self.bit_sizes))
        object.__setattr__(self, "gap_multipliers", mults)


@dataclass
class CellResult:
    bit_size: int
    gap_multiplier: Fraction
    successes: int = 0
    skipped: int = 0
    latencies_ns: list[int] = field(default_factory=list)
    gaps: list[tuple[int, int]] = field(default_factory=list)  # (q - p, k)

    @property
    def trials(self) -> int:
        return len(self.latencies_ns)

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def median_us(self) -> float:
        if not self.latencies_ns:
            return 0.0
        return statistics.median(self.latencies_ns) / 1000


def target_gap(k: int, multiplier: Fraction) -> int:
    """floor(multiplier * 2**((k+5)/4)), computed without floats."""
    a, b = multiplier.numerator, multiplier.denominator
    return iroot4((a**4 << (k + 5)) // b**4)


def _draw_pair(rng: random.Random, k: int, target: int) -> tuple[int, int] | None:
    lo, hi = balanced_range(k)
    for _ in range(GEN_RETRIES):
        p = random_prime(rng, lo, hi - max(target, 2))
        if p is None:
            return None
        if target < 2:
            q = next_prime(p + 1)
        else:
            q = prev_prime(p + target, floor=p + 1)
        if q is not None and q > p:
            return p, q
    return None


def _run_cell(
    k: int, mult: Fraction, trials: int, seed: int, timer: Callable[[], int]
) -> CellResult:
    rng = random.Random(f"{seed}:{k}:{mult}")
    cell = CellResult(k, mult)
    target = target_gap(k, mult)
    for _ in range(trials):
        pair = _draw_pair(rng, k, target)
        if pair is None:
            cell.skipped += 1
            continue
        p, q = pair
        n = p * q
        t0 = timer()
        outcome = close_factor(n)
        cell.latencies_ns.append(timer() - t0)
        cell.gaps.append((q - p, bit_size(n)))
        if isinstance(outcome, Success) and outcome.pair.f * outcome.pair.g == n:
            cell.successes += 1
    return cell


def run_sweep(
    spec: SweepSpec,
    timer: Callable[[], int] = time.perf_counter_ns,
    workers: int = 1,
) -> list[CellResult]:
    """Run every cell; rows come back sorted by (bit_size, gap_multiplier)."""
    cells = sorted((k, m) for k in set(spec.bit_sizes) for m in set(spec.gap_multipliers))

    def job(cell: tuple[int, Fraction]) -> CellResult:
        return _run_cell(cell[0], cell[1], spec.trials_per_cell, spec.seed, timer)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(job, cells))
    return [job(c) for c in cells]


def _fmt_mult(m: Fraction) -> str:
    return str(m.numerator) if m.denominator == 1 else f"{float(m):g}"


def to_csv(results: Sequence[CellResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for c in results:
        writer.writerow(
            [
                c.bit_size,
                _fmt_mult(c.gap_multiplier),
                c.trials,
                c.successes,
                f"{c.success_fraction:.4f}",
                f"{c.median_us:.3f}",
            ]
        )
    return buf.getvalue()
