"""Exact integer primitives.

Everything here works on Python ints, so there is no precision ceiling; floats
are never involved.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["isqrt", "is_perfect_square", "bit_size", "gcd", "iroot4"]

# Quadratic residue tables for cheap rejection before the exact root check.
_QR_MODULI = (64, 63, 65, 11)
_QR_TABLES = {m: frozenset((x * x) % m for x in range(m)) for m in _QR_MODULI}


def isqrt(n: int) -> int:
    """Return floor(sqrt(n)) exactly."""
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_perfect_square(n: int) -> int | None:
    """Return the integer square root of ``n`` if ``n`` is a square, else None."""
    if n < 0:
        return None
    for m in _QR_MODULI:
        if n % m not in _QR_TABLES[m]:
            return None
    r = math.isqrt(n)
    return r if r * r == n else None


def bit_size(n: int) -> int:
    """Number of binary digits of ``n``; undefined for 0."""
    if n < 1:
        raise DomainError(f"bit size is undefined for {n}")
    return n.bit_length()


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def iroot4(n: int) -> int:
    """floor(n ** (1/4)) for n >= 0."""
    return math.isqrt(math.isqrt(n))
