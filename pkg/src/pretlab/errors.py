"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 2 (click's default),
CapacityError exits 3, everything else is a plain failure.
"""


class PretlabError(Exception):
    """Base class for package errors."""


class CapacityError(PretlabError):
    """An input exceeds a hard scan/sieve cap."""


class AccuracyError(PretlabError):
    """A requested precision cannot be met at the configured truncation."""


class DomainError(PretlabError, ValueError):
    """An argument is outside an operation's supported domain."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class UnitDiscError(PretlabError):
    """A multiplicative-function value left the closed unit disc."""


class PreconditionError(PretlabError, ValueError):
    """A documented precondition was violated."""


def require_finite(z: complex, what: str = "value") -> complex:
    """Raise AccuracyError instead of letting NaN/Inf escape an operation."""
    if z != z or abs(z.real) == float("inf") or abs(z.imag) == float("inf"):
        raise AccuracyError(f"non-finite {what}: {z!r}")
    return z
