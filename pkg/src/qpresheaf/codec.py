"""JSON encodings of matrices, extended reals, Borel sets and context posets.

A complex entry is written as ``[re, im]`` (a bare number is accepted on
input), a matrix as row-major nested lists. Infinite extended reals are the
strings ``'-inf'`` and ``'inf'``. A Borel set is a list whose items are
numbers (points), interval objects ``{"lo", "hi", "lo_closed", "hi_closed"}``
or ``{"points": [...]}`` groups.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import numpy as np

from qpresheaf.contexts import ContextPoset
from qpresheaf.errors import ScenarioError
from qpresheaf.linop_core import HermitianOperator, Matrix
from qpresheaf.order_core import ExtendedReal, Number, Tag
from qpresheaf.spectral import BorelSet, Interval

DIGITS = 12


def encode_number(value: Number | float) -> int | float | str:
    """Canonical JSON number, rounded to a fixed number of significant digits."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    number = float(value)
    if math.isinf(number):
        return 'inf' if number > 0 else '-inf'
    if number == 0:
        return 0.0
    return float(f'{number:.{DIGITS}g}')


def encode_extended(value: ExtendedReal) -> int | float | str:
    if value.tag is Tag.NEG_INF:
        return '-inf'
    if value.tag is Tag.POS_INF:
        return 'inf'
    assert value.value is not None
    return encode_number(value.value)


def decode_extended(raw: Any) -> ExtendedReal:
    try:
        return ExtendedReal.coerce(raw)
    except (TypeError, ValueError) as error:
        raise ScenarioError(f'not an extended real: {raw!r}') from error


def _decode_entry(raw: Any) -> complex:
    if isinstance(raw, bool):
        raise ScenarioError(f'matrix entry {raw!r} is not a number')
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(isinstance(x, (int, float)) for x in raw):
        return complex(raw[0], raw[1])
    raise ScenarioError(f'matrix entry {raw!r} is neither a number nor [re, im]')


def decode_matrix(raw: Any) -> Matrix:
    if not isinstance(raw, list) or not raw or not all(isinstance(row, list) for row in raw):
        raise ScenarioError('a matrix must be a non-empty list of rows')
    size = len(raw)
    if any(len(row) != size for row in raw):
        raise ScenarioError(f'matrix is not square ({size} rows of lengths {[len(row) for row in raw]})')
    return np.array([[_decode_entry(x) for x in row] for row in raw], dtype=np.complex128)


def encode_matrix(matrix: Matrix | HermitianOperator) -> list[list[list[int | float | str]]]:
    if isinstance(matrix, HermitianOperator):
        matrix = matrix.matrix
    return [[[encode_number(float(x.real)), encode_number(float(x.imag))] for x in row] for row in matrix]


def _decode_interval(item: dict[str, Any]) -> Interval:
    try:
        lo, hi = item['lo'], item['hi']
    except KeyError as error:
        raise ScenarioError(f'interval {item!r} lacks {error.args[0]!r}') from None
    closed = bool(item.get('lo_closed', True)), bool(item.get('hi_closed', True))
    return Interval(decode_extended(lo), decode_extended(hi), *closed)


def _decode_points(raw: Any) -> list[Interval]:
    if not isinstance(raw, list):
        raise ScenarioError(f'"points" must be a list, got {raw!r}')
    return [Interval(point, point) for point in map(decode_extended, raw)]


def decode_borel_set(raw: Any) -> BorelSet:
    """Decode a list of points, intervals and ``{"points": [...]}`` groups.

    An object ``{"intervals": [...], "points": [...]}`` is accepted as well.
    """
    if isinstance(raw, dict):
        unknown = set(raw) - {'intervals', 'points'}
        if unknown:
            raise ScenarioError(f'unknown Borel set keys {sorted(unknown)}')
        raw = [*raw.get('intervals', []), {'points': raw.get('points', [])}]
    if not isinstance(raw, list):
        raise ScenarioError('a Borel set must be a list of points and intervals')
    components: list[Interval] = []
    for item in raw:
        if isinstance(item, dict) and 'points' in item:
            components.extend(_decode_points(item['points']))
        elif isinstance(item, dict):
            components.append(_decode_interval(item))
        else:
            point = decode_extended(item)
            components.append(Interval(point, point))
    return BorelSet(tuple(components))


def encode_borel_set(delta: BorelSet) -> list[Any]:
    result: list[Any] = []
    for component in delta.components:
        if component.is_point:
            result.append(encode_extended(component.lo))
        else:
            result.append(
                {
                    'lo': encode_extended(component.lo),
                    'hi': encode_extended(component.hi),
                    'lo_closed': component.lo_closed,
                    'hi_closed': component.hi_closed,
                }
            )
    return result


def encode_poset(poset: ContextPoset) -> dict[str, Any]:
    return {
        'contexts': list(poset.labels),
        'inclusion_edges': [list(edge) for edge in poset.inclusion_edges],
    }


def encode_blocks(components: Sequence[frozenset[int]], poset: ContextPoset) -> dict[str, list[int]]:
    """``{context label: sorted block indices}``."""
    return {_label(poset, i): sorted(blocks) for i, blocks in enumerate(components)}


def encode_values(values: Sequence[float], poset: ContextPoset) -> dict[str, int | float | str]:
    return {_label(poset, i): encode_number(v) for i, v in enumerate(values)}


def _label(poset: ContextPoset, index: int) -> str:
    return poset.labels[index]


__all__ = (
    'decode_borel_set',
    'decode_extended',
    'decode_matrix',
    'encode_blocks',
    'encode_borel_set',
    'encode_extended',
    'encode_matrix',
    'encode_number',
    'encode_poset',
    'encode_values',
)
