"""Factoring integers whose two factors are abnormally close."""

__version__ = "0.1.0"

from .arith import bit_size, gcd, is_perfect_square, isqrt
from .errors import CloseFactorError, DomainError, GenerationError, OracleLimitError
from .fermat import (
    FactorPair,
    NotApplicable,
    PerfectSquare,
    Success,
    close_factor,
    count_squares,
    gap_guarantee_holds,
    msb_quarter_match,
)
from .multiplier import (
    MultiplierHit,
    SearchConfig,
    factor_with_multiplier,
    factor_with_multiplier_pair,
    search_multiplier,
)
