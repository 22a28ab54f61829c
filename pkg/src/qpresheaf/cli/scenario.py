"""Scenario files.

A scenario is a JSON object naming the operators, states, contexts, Borel
sets, classical fixtures and q-observable tables that the ``check`` and
``report`` commands work on. See ``doc/source/scenario.rst`` for the schema.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from collections.abc import Mapping
from importlib import resources
from pathlib import Path
from typing import Any

from qpresheaf.classical_prob import Fixture
from qpresheaf.codec import decode_borel_set, decode_extended, decode_matrix
from qpresheaf.contexts import ClosePolicy, Context, ContextPoset, context_from_commuting, context_of_operator, poset_build
from qpresheaf.errors import Error, ScenarioError
from qpresheaf.linop_core import HermitianOperator, Projection
from qpresheaf.order_core import ExtendedReal
from qpresheaf.quantum_prob import DensityState
from qpresheaf.spectral import BorelSet

logger = logging.getLogger(__name__)

POLICIES: tuple[ClosePolicy, ...] = ('coarsenings', 'intersections', 'none')

FIXTURE = 'fixture.json'


@dataclasses.dataclass(frozen=True)
class QTable:
    operator: str
    entries: tuple[tuple[Projection, ExtendedReal], ...]


@dataclasses.dataclass(frozen=True)
class Pair:
    state: str
    operator: str
    borel_set: str | None = None


@dataclasses.dataclass(frozen=True, eq=False)
class Scenario:
    dim: int
    operators: Mapping[str, HermitianOperator]
    states: Mapping[str, DensityState]
    policy: ClosePolicy
    seeds: tuple[Context, ...]
    borel_sets: Mapping[str, BorelSet]
    classical: tuple[Fixture, ...]
    q_tables: Mapping[str, QTable]
    pairs: tuple[Pair, ...]
    grid_steps: int = 100
    samples: int = 20
    tolerance: float | None = None
    source: str = '<scenario>'

    def poset(self, policy: ClosePolicy | None = None) -> ContextPoset | None:
        """The context poset; ``None`` when there is nothing to build it from."""
        seeds = list(self.seeds)
        if not seeds:
            for name in sorted(self.operators):
                operator = self.operators[name]
                try:
                    seeds.append(context_of_operator(operator, f'V_{name}'))
                except Error:
                    logger.info('operator %s is scalar and generates no context', name)
        if not seeds:
            return None
        return poset_build(seeds, policy or self.policy)


def _require(data: Mapping[str, Any], key: str, kind: type, where: str) -> Any:
    if key not in data:
        raise ScenarioError(f'{where}: missing key {key!r}')
    value = data[key]
    if not isinstance(value, kind):
        raise ScenarioError(f'{where}.{key}: expected {kind.__name__}, got {type(value).__name__}')
    return value


def _positive_int(data: Mapping[str, Any], key: str, default: int, where: str) -> int:
    if key not in data:
        return default
    value = _require(data, key, int, where)
    if isinstance(value, bool) or value < 1:
        raise ScenarioError(f'{where}.{key}: must be a positive integer, got {value!r}')
    return int(value)


def _mapping(data: Mapping[str, Any], key: str, where: str) -> dict[str, Any]:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ScenarioError(f'{where}.{key}: expected an object')
    return value


def _sorted_items(data: Mapping[str, Any], key: str, where: str) -> list[tuple[str, Any]]:
    return sorted(_mapping(data, key, where).items())


def _wrap(where: str, error: Error) -> ScenarioError:
    return ScenarioError(f'{where}: {error}', error.invariant)


def _operator(raw: Any, dim: int, where: str) -> HermitianOperator:
    try:
        operator = HermitianOperator(decode_matrix(raw))
    except ScenarioError as error:
        raise ScenarioError(f'{where}: {error}') from error
    except Error as error:
        raise _wrap(where, error) from error
    if operator.dim != dim:
        raise ScenarioError(f'{where}: dimension {operator.dim} does not match the scenario dimension {dim}', 'same-dim')
    return operator


def _projection(raw: Any, dim: int, where: str) -> Projection:
    operator = _operator(raw, dim, where)
    try:
        return Projection(operator.matrix)
    except Error as error:
        raise _wrap(where, error) from error


def _state(raw: Any, dim: int, where: str) -> DensityState:
    operator = _operator(raw, dim, where)
    try:
        return DensityState(operator.matrix)
    except Error as error:
        raise _wrap(where, error) from error


def _seed(raw: Any, operators: Mapping[str, HermitianOperator], dim: int, where: str) -> Context:
    if not isinstance(raw, dict):
        raise ScenarioError(f'{where}: expected an object')
    label = str(raw.get('label', ''))
    try:
        if 'projections' in raw:
            blocks = [_projection(m, dim, f'{where}.projections[{i}]') for i, m in enumerate(raw['projections'])]
            return Context(blocks, label)
        if 'operators' in raw:
            names = raw['operators']
            missing = [name for name in names if name not in operators]
            if missing:
                raise ScenarioError(f'{where}.operators: unknown operators {missing!r}')
            return context_from_commuting([operators[name] for name in names], label)
    except ScenarioError:
        raise
    except Error as error:
        raise _wrap(where, error) from error
    raise ScenarioError(f'{where}: a seed needs "projections" or "operators"')


def _fixture(raw: Any, where: str) -> Fixture:
    if not isinstance(raw, dict):
        raise ScenarioError(f'{where}: expected an object')
    name = str(raw.get('name', where))
    points = _require(raw, 'points', list, where)
    weights = raw.get('weights')
    variable = raw.get('variable')
    if isinstance(weights, dict):
        weights = [weights.get(p) for p in points]
    if isinstance(variable, dict):
        variable = [variable.get(p) for p in points]
    if not isinstance(weights, list) or not isinstance(variable, list) or None in weights or None in variable:
        raise ScenarioError(f'{where}: weights and variable must give a value for every point')
    try:
        return Fixture.build(name, points, weights, variable)
    except (Error, ValueError, ZeroDivisionError) as error:
        raise ScenarioError(f'{where}: {error}') from error


def _q_table(raw: Any, operators: Mapping[str, HermitianOperator], dim: int, where: str) -> QTable:
    if not isinstance(raw, dict):
        raise ScenarioError(f'{where}: expected an object')
    operator = _require(raw, 'operator', str, where)
    if operator not in operators:
        raise ScenarioError(f'{where}.operator: unknown operator {operator!r}')
    entries = []
    for i, entry in enumerate(_require(raw, 'entries', list, where)):
        if not isinstance(entry, dict) or 'projection' not in entry or 'value' not in entry:
            raise ScenarioError(f'{where}.entries[{i}]: expected {{"projection", "value"}}')
        entries.append((_projection(entry['projection'], dim, f'{where}.entries[{i}]'), decode_extended(entry['value'])))
    if not entries:
        raise ScenarioError(f'{where}: a q-observable table needs entries')
    return QTable(operator, tuple(entries))


def _pair(raw: Any, scenario: dict[str, Any], where: str) -> Pair:
    if not isinstance(raw, dict):
        raise ScenarioError(f'{where}: expected an object')
    state = _require(raw, 'state', str, where)
    operator = _require(raw, 'operator', str, where)
    borel_set = raw.get('borel_set')
    if state not in scenario['states']:
        raise ScenarioError(f'{where}.state: unknown state {state!r}')
    if operator not in scenario['operators']:
        raise ScenarioError(f'{where}.operator: unknown operator {operator!r}')
    if borel_set is not None and borel_set not in scenario['borel_sets']:
        raise ScenarioError(f'{where}.borel_set: unknown Borel set {borel_set!r}')
    return Pair(state, operator, borel_set)


def parse_scenario(data: Any, source: str = '<scenario>') -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(f'{source}: a scenario must be a JSON object')
    dim = _require(data, 'dim', int, source)
    if dim < 1:
        raise ScenarioError(f'{source}.dim: must be positive')
    operators = {name: _operator(raw, dim, f'operators.{name}') for name, raw in _sorted_items(data, 'operators', source)}
    states = {name: _state(raw, dim, f'states.{name}') for name, raw in _sorted_items(data, 'states', source)}
    contexts = _mapping(data, 'contexts', source)
    policy = contexts.get('policy', 'none')
    if policy not in POLICIES:
        raise ScenarioError(f'contexts.policy: expected one of {POLICIES}, got {policy!r}')
    seeds = tuple(_seed(raw, operators, dim, f'contexts.seeds[{i}]') for i, raw in enumerate(contexts.get('seeds', [])))
    borel_sets = {name: decode_borel_set(raw) for name, raw in _sorted_items(data, 'borel_sets', source)}
    classical = tuple(_fixture(raw, f'classical[{i}]') for i, raw in enumerate(data.get('classical', [])))
    q_tables = {name: _q_table(raw, operators, dim, f'q_tables.{name}') for name, raw in _sorted_items(data, 'q_tables', source)}
    names = {'states': states, 'operators': operators, 'borel_sets': borel_sets}
    pairs = tuple(_pair(raw, names, f'pairs[{i}]') for i, raw in enumerate(data.get('pairs', [])))
    tolerance = data.get('tolerance')
    if tolerance is not None and not isinstance(tolerance, (int, float)):
        raise ScenarioError(f'{source}.tolerance: expected a number')
    return Scenario(
        dim=dim,
        operators=operators,
        states=states,
        policy=policy,
        seeds=seeds,
        borel_sets=borel_sets,
        classical=classical,
        q_tables=q_tables,
        pairs=pairs,
        grid_steps=_positive_int(data, 'grid_steps', 100, source),
        samples=_positive_int(data, 'samples', 20, source),
        tolerance=float(tolerance) if tolerance is not None else None,
        source=source,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file; every failure is a :class:`ScenarioError`."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as error:
        raise ScenarioError(f'{path}: cannot read scenario ({error.strerror})') from error
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ScenarioError(f'{path}:{error.lineno}:{error.colno}: {error.msg}') from error
    return parse_scenario(data, str(path))


def bundled_fixture() -> Scenario:
    text = resources.files('qpresheaf').joinpath('data').joinpath(FIXTURE).read_text(encoding='utf-8')
    return parse_scenario(json.loads(text), FIXTURE)


__all__ = ('POLICIES', 'Pair', 'QTable', 'Scenario', 'bundled_fixture', 'load_scenario', 'parse_scenario')
