"""Slow, transparent reference computations used to check the fast paths.

Nothing here is clever on purpose. Inputs are capped by a desk limit so a
stray large argument fails fast instead of hanging a test run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import isqrt
from .errors import DomainError, OracleLimitError
from .fermat import FactorPair

__all__ = [
    "DEFAULT_DESK_LIMIT",
    "Factorization",
    "trial_factor",
    "closest_divisor_pair",
    "count_squares_naive",
]

DEFAULT_DESK_LIMIT = 1 << 64

# Gaps between successive candidates coprime to 30, starting at 7.
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


@dataclass(frozen=True)
class Factorization:
    prime_powers: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.prime_powers:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.prime_powers]


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise OracleLimitError(f"{n} exceeds the oracle desk limit {limit}")


def trial_factor(n: int, limit: int = DEFAULT_DESK_LIMIT) -> Factorization:
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    _check_limit(n, limit)
    out: list[tuple[int, int]] = []
    for d in (2, 3, 5):
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
    d, w = 7, 0
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += _WHEEL[w]
        w = (w + 1) & 7
    if n > 1:
        out.append((n, 1))
    return Factorization(tuple(out))


def closest_divisor_pair(n: int, limit: int = DEFAULT_DESK_LIMIT) -> FactorPair:
    """The split n = f*g, 1 < f <= g, with the smallest g - f."""
    if n < 4:
        raise DomainError(f"{n} has no nontrivial factor pair")
    _check_limit(n, limit)
    for f in range(isqrt(n), 1, -1):
        if n % f == 0:
            return FactorPair(f, n // f)
    raise DomainError(f"{n} is prime")


def count_squares_naive(n: int, m: int, limit: int = DEFAULT_DESK_LIMIT) -> int:
    if n < 0 or n > m:
        raise DomainError(f"need 0 <= n <= m, got n={n}, m={m}")
    _check_limit(m, limit)
    count = 0
    x = 0
    while x * x <= m:
        if x * x > n:
            count += 1
        x += 1
    return count
