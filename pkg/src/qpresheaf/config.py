"""Numerical tolerances.

Defaults can be overridden through the ``QPRESHEAF_TOL`` environment variable
(the general law-check tolerance) or per call with :func:`use_tolerances`.
"""

from __future__ import annotations

import contextlib
import dataclasses
import logging
import math
import os
from collections.abc import Iterator
from typing import Any

from qpresheaf.errors import ConfigError

logger = logging.getLogger(__name__)

ENV_TOL = 'QPRESHEAF_TOL'


@dataclasses.dataclass(frozen=True)
class Tolerances:
    tol: float = 1e-9
    hermitian_tol: float = 1e-12
    reconstruct_tol: float = 1e-8
    state_tol: float = 1e-10
    rank_rcond: float = 1e-9
    cluster_rel: float = 1e-8

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (isinstance(value, float) and math.isfinite(value) and value > 0):
                raise ConfigError(f'{field.name} must be a positive finite float, got {value!r}')

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> Tolerances:
        environ = dict(os.environ) if environ is None else environ
        raw = environ.get(ENV_TOL)
        if raw is None:
            return cls()
        try:
            tol = float(raw)
        except ValueError as error:
            raise ConfigError(f'{ENV_TOL}={raw!r} is not a number') from error
        logger.debug('tolerance overridden from environment: %s', tol)
        return cls(tol=tol)

    def replace(self, **changes: Any) -> Tolerances:
        return dataclasses.replace(self, **changes)


_current: Tolerances | None = None


def get_tolerances() -> Tolerances:
    global _current
    if _current is None:
        _current = Tolerances.from_env()
    return _current


@contextlib.contextmanager
def use_tolerances(tolerances: Tolerances) -> Iterator[Tolerances]:
    """Temporarily replace the process-wide tolerances."""
    global _current
    previous = _current
    _current = tolerances
    try:
        yield tolerances
    finally:
        _current = previous


__all__ = ('ENV_TOL', 'Tolerances', 'get_tolerances', 'use_tolerances')
