"""One-shot close-factor attack and its guarantee predicates.

For an odd ``n = p*q`` the attack looks only at the first square above ``n``:
with ``n0 = isqrt(n) + 1`` and ``I = n0**2 - n``, if ``I == i**2`` then
``n = (n0 - i) * (n0 + i)``. This always works when ``(q - p)**4 <= 2**(k + 5)``
with ``k`` the bit size of ``n``; it never looks past ``n0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .arith import bit_size, iroot4, is_perfect_square, isqrt
from .errors import DomainError

__all__ = [
    "FactorPair",
    "Success",
    "PerfectSquare",
    "NotApplicable",
    "CloseFactorOutcome",
    "count_squares",
    "close_factor",
    "gap_bound",
    "gap_guarantee_holds",
    "msb_quarter_match",
]


@dataclass(frozen=True, order=True)
class FactorPair:
    f: int
    g: int

    def __post_init__(self) -> None:
        if not 1 < self.f <= self.g:
            raise DomainError(f"invalid factor pair ({self.f}, {self.g})")

    @property
    def product(self) -> int:
        return self.f * self.g

    @property
    def gap(self) -> int:
        return self.g - self.f


@dataclass(frozen=True)
class Success:
    pair: FactorPair
    i: int

    @property
    def n0(self) -> int:
        return self.pair.f + self.i


@dataclass(frozen=True)
class PerfectSquare:
    root: int


@dataclass(frozen=True)
class NotApplicable:
    residual: int


CloseFactorOutcome = Union[Success, PerfectSquare, NotApplicable]


def count_squares(n: int, m: int) -> int:
    """Count the squares x**2 with n < x**2 <= m."""
    if n < 0 or n > m:
        raise DomainError(f"need 0 <= n <= m, got n={n}, m={m}")
    return isqrt(m) - isqrt(n)


def close_factor(n: int) -> CloseFactorOutcome:
    """Run the single-step close-factor algorithm on an odd ``n >= 3``.

    Returns ``Success`` with the split ``(n0 - i, n0 + i)``, ``PerfectSquare``
    when ``n`` is itself a square, or ``NotApplicable`` carrying the residual
    ``n0**2 - n``. The split ``1 * n`` (only reachable for n = 3, 5) is not a
    factorization and is reported as ``NotApplicable``.
    """
    if n < 3 or n % 2 == 0:
        raise DomainError(f"close_factor needs an odd integer >= 3, got {n}")
    root = is_perfect_square(n)
    if root is not None:
        return PerfectSquare(root)
    n0 = isqrt(n) + 1
    residual = n0 * n0 - n
    i = is_perfect_square(residual)
    if i is None or n0 - i == 1:
        return NotApplicable(residual)
    return Success(FactorPair(n0 - i, n0 + i), i)


def gap_bound(k: int) -> int:
    """Largest gap d with d**4 <= 2**(k + 5), i.e. floor(2**((k+5)/4))."""
    return iroot4(1 << (k + 5))


def gap_guarantee_holds(p: int, q: int, k: int) -> bool:
    """True when |q - p| <= 2**((k+5)/4), compared as fourth powers."""
    return abs(q - p) ** 4 <= 1 << (k + 5)


def msb_quarter_match(p: int, q: int) -> bool:
    """Whether p and q agree on their top ceil(k/4) bits, k = bit size of p*q.

    Both factors must have the same bit size.
    """
    h = bit_size(p)
    if bit_size(q) != h:
        raise DomainError(f"{p} and {q} have different bit sizes")
    k = bit_size(p * q)
    top = -(-k // 4)
    shift = max(h - top, 0)
    return p >> shift == q >> shift
