"""Test-modulus generation.

All randomness comes from :class:`random.Random` (CPython's MT19937) seeded
with the recipe's integer seed, so a recipe always yields the same triple.
Primality is Miller-Rabin with a fixed witness set where it is known to be
deterministic and extra witnesses derived from ``n`` above that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .arith import bit_size, isqrt
from .errors import DomainError, GenerationError
from .fermat import gap_bound, gap_guarantee_holds, msb_quarter_match

__all__ = [
    "Mode",
    "ModulusRecipe",
    "is_probable_prime",
    "next_prime",
    "prev_prime",
    "random_prime",
    "balanced_range",
    "gen_modulus",
    "special_family",
]

# First 13 primes: deterministic Miller-Rabin for n < 3317044064679887385961981.
_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_SMALL_PRIMES = _BASES + (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

MAX_RETRIES = 1000


class Mode(str, Enum):
    CLOSE_GAP = "close"
    SHARED_MSB = "msb"
    SAFE = "safe"
    SPECIAL_FAMILY = "special"


@dataclass(frozen=True)
class ModulusRecipe:
    mode: Mode
    bits: int = 64
    alpha: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.SPECIAL_FAMILY:
            if self.alpha < 1:
                raise DomainError(f"alpha must be >= 1, got {self.alpha}")
        elif self.bits < 16:
            raise DomainError(f"random modes need bits >= 16, got {self.bits}")


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 20) -> bool:
    """Miller-Rabin test.

    Exact below ~3.3e24. Above that, ``rounds`` extra random witnesses are
    drawn from a generator seeded by ``n`` itself, so the answer is still a
    pure function of the arguments.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, a, d, s) for a in _BASES):
        return False
    if n < _DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(
        _strong_probable_prime(n, rng.randrange(2, n - 1), d, s) for _ in range(rounds)
    )


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    n |= 1
    while not is_probable_prime(n):
        n += 2
    return n


def prev_prime(n: int, floor: int = 2) -> int | None:
    """Largest prime p with floor <= p <= n, or None."""
    if n < 2 or n < floor:
        return None
    if n == 2:
        return 2
    if n % 2 == 0:
        n -= 1
    while n >= max(floor, 3):
        if is_probable_prime(n):
            return n
        n -= 2
    return 2 if floor <= 2 else None


def random_prime(rng: random.Random, lo: int, hi: int) -> int | None:
    """A prime in [lo, hi]: random start, scanning upward, wrapping once."""
    if lo > hi:
        return None
    start = rng.randint(lo, hi)
    p = next_prime(start)
    if p <= hi:
        return p
    p = next_prime(lo)
    return p if p < start else None


def balanced_range(bits: int) -> tuple[int, int]:
    """Bounds [lo, hi] such that every x in it has x*x of exactly ``bits`` bits."""
    return isqrt((1 << (bits - 1)) - 1) + 1, isqrt((1 << bits) - 1)


def special_family(alpha: int) -> tuple[int, int, int]:
    """The split of 2**(4a+2) + 1 as (2**(2a+1) -/+ 2**(a+1) + 1).

    The factors are not prime in general (alpha = 2 gives 25 * 41).
    """
    if alpha < 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    m0 = (1 << (2 * alpha + 1)) + 1
    step = 1 << (alpha + 1)
    return (1 << (4 * alpha + 2)) + 1, m0 - step, m0 + step


def _close_gap(rng: random.Random, k: int) -> tuple[int, int]:
    lo, hi = balanced_range(k)
    w = gap_bound(k)
    for _ in range(MAX_RETRIES):
        p = random_prime(rng, lo, hi - w - 1)
        if p is None:
            break
        q = next_prime(p + 2)
        if q <= p + w and bit_size(p * q) == k:
            return p, q
    raise GenerationError(f"no close prime pair found for {k} bits")


def _shared_msb(rng: random.Random, k: int) -> tuple[int, int]:
    lo, hi = balanced_range(k)
    top = -(-k // 4)
    for _ in range(MAX_RETRIES):
        p = random_prime(rng, lo, hi)
        if p is None:
            break
        low = max(bit_size(p) - top, 0)
        prefix = p >> low << low
        block_hi = min(prefix + (1 << low) - 1, hi)
        q = random_prime(rng, max(prefix, lo), block_hi)
        if q is None or q == p:
            continue
        p, q = min(p, q), max(p, q)
        if bit_size(p * q) == k and msb_quarter_match(p, q):
            return p, q
    raise GenerationError(f"no prime pair sharing top bits found for {k} bits")


def _safe(rng: random.Random, k: int) -> tuple[int, int]:
    lo, hi = balanced_range(k)
    for _ in range(MAX_RETRIES):
        p = random_prime(rng, lo, hi)
        if p is None:
            break
        q = random_prime(rng, -(-(1 << (k - 1)) // p), ((1 << k) - 1) // p)
        if q is None or q == p:
            continue
        p, q = min(p, q), max(p, q)
        n = p * q
        if bit_size(n) == k and (q - p) ** 4 > 1 << (k + 9):
            return p, q
    raise GenerationError(f"no well-separated prime pair found for {k} bits")


_GENERATORS = {
    Mode.CLOSE_GAP: _close_gap,
    Mode.SHARED_MSB: _shared_msb,
    Mode.SAFE: _safe,
}


def gen_modulus(recipe: ModulusRecipe) -> tuple[int, int, int]:
    """Build ``(n, p, q)`` for a recipe, with p <= q and n = p*q."""
    if recipe.mode is Mode.SPECIAL_FAMILY:
        return special_family(recipe.alpha)
    rng = random.Random(recipe.seed)
    p, q = _GENERATORS[recipe.mode](rng, recipe.bits)
    n = p * q
    if recipe.mode is Mode.CLOSE_GAP and not gap_guarantee_holds(p, q, bit_size(n)):
        raise GenerationError("generated pair violates the gap bound")
    return n, p, q
