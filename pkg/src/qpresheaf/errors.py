"""Exception hierarchy.

Every error raised by :mod:`qpresheaf` derives from :class:`Error`. Validation
failures carry the name of the violated invariant in :attr:`Error.invariant`.
"""

from __future__ import annotations


class Error(Exception):
    """Base class of all qpresheaf errors."""

    invariant: str | None = None

    def __init__(self, message: str, invariant: str | None = None) -> None:
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class ConfigError(Error):
    invariant = 'config'


class NotHermitian(Error):
    invariant = 'hermitian'


class NotAProjection(Error):
    invariant = 'idempotent'


class NotAState(Error):
    invariant = 'density-state'


class DimMismatch(Error):
    invariant = 'same-dim'


class DomainMismatch(Error):
    invariant = 'same-domain'


class NotMeetPreserving(Error):
    invariant = 'meet-preserving'


class NotMonotone(Error):
    invariant = 'monotone'


class OutOfRange(Error):
    invariant = 'unit-interval'


class AxiomViolation(Error):
    invariant = 'q-observable-axioms'


class NonCommuting(Error):
    """Raised when operators that must generate a context do not commute."""

    invariant = 'commuting'

    def __init__(self, message: str, pair: tuple[int, int], norm: float) -> None:
        super().__init__(message)
        self.pair = pair
        self.norm = norm


class InvalidContext(Error):
    invariant = 'partition-of-unity'


class NotIncluded(Error):
    invariant = 'inclusion'


class NotASubobject(Error):
    invariant = 'subobject'


class MissingOperatorContext(Error):
    invariant = 'operator-context'


class ScenarioError(Error):
    """Raised for unreadable or inconsistent scenario files."""

    invariant = 'scenario'


__all__ = (
    'AxiomViolation',
    'ConfigError',
    'DimMismatch',
    'DomainMismatch',
    'Error',
    'InvalidContext',
    'MissingOperatorContext',
    'NonCommuting',
    'NotAProjection',
    'NotAState',
    'NotASubobject',
    'NotHermitian',
    'NotIncluded',
    'NotMeetPreserving',
    'NotMonotone',
    'OutOfRange',
    'ScenarioError',
)
