"""Exception hierarchy shared by the library and the CLI."""


class CloseFactorError(Exception):
    """Base class for errors raised by closefactor."""


class DomainError(CloseFactorError, ValueError):
    """Input lies outside the domain an operation is defined on."""


class OracleLimitError(DomainError):
    """Input exceeds the configured desk limit of a brute-force oracle."""


class GenerationError(CloseFactorError):
    """A modulus recipe could not be satisfied within the retry budget."""
