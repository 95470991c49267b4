"""Multiplier rescue for factors that are not close.

When the factors of ``n`` are far apart, a small odd multiplier can move ``r*n``
(or ``r*s*n``) right below a square. The close-factor step is then applied to
the multiplied number and a divisor of ``n`` is pulled back out with a gcd.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .arith import gcd, is_perfect_square, isqrt
from .errors import DomainError

__all__ = [
    "MultiplierHit",
    "SearchConfig",
    "factor_with_multiplier",
    "factor_with_multiplier_pair",
    "search_multiplier",
]


@dataclass(frozen=True)
class MultiplierHit:
    r: int
    s: int
    n0: int
    i: int
    divisor: int

    def cofactor(self, n: int) -> int:
        return n // self.divisor


@dataclass(frozen=True)
class SearchConfig:
    r_max: int = 1
    s_max: int = 1
    odd_only: bool = True

    def __post_init__(self) -> None:
        if self.r_max < 1 or self.s_max < 1:
            raise DomainError("r_max and s_max must be at least 1")


def _attempt(n: int, r: int, s: int) -> MultiplierHit | None:
    big = r * s * n
    n0 = isqrt(big) + 1
    i = is_perfect_square(n0 * n0 - big)
    if i is None:
        return None
    # Spurious squares give trivial gcds on both sides; treat them as misses.
    for side in (n0 - i, n0 + i):
        d = gcd(n, side)
        if 1 < d < n:
            return MultiplierHit(r, s, n0, i, d)
    return None


def _check_odd(**values: int) -> None:
    for name, v in values.items():
        if v < 1 or v % 2 == 0:
            raise DomainError(f"{name} must be a positive odd integer, got {v}")


def factor_with_multiplier(n: int, r: int) -> MultiplierHit | None:
    """Try the close-factor step on ``r*n`` and recover a divisor of ``n``."""
    _check_odd(n=n, r=r)
    if n < 3:
        raise DomainError(f"n must be at least 3, got {n}")
    return _attempt(n, r, 1)


def factor_with_multiplier_pair(n: int, r: int, s: int) -> MultiplierHit | None:
    """Same as :func:`factor_with_multiplier` over ``r*s*n``."""
    _check_odd(n=n, r=r, s=s)
    if n < 3:
        raise DomainError(f"n must be at least 3, got {n}")
    return _attempt(n, r, s)


def _candidates(cfg: SearchConfig) -> Iterator[tuple[int, int]]:
    step = 2 if cfg.odd_only else 1
    for r in range(1, cfg.r_max + 1, step):
        for s in range(1, min(r, cfg.s_max) + 1, step):
            yield r, s


def search_multiplier(n: int, cfg: SearchConfig) -> MultiplierHit | None:
    """Sweep multipliers in (r ascending, s ascending, s <= r) order.

    Returns the first hit, so the result is a pure function of ``n`` and
    ``cfg``.
    """
    _check_odd(n=n)
    if n < 3:
        raise DomainError(f"n must be at least 3, got {n}")
    for r, s in _candidates(cfg):
        hit = _attempt(n, r, s)
        if hit is not None:
            return hit
    return None
