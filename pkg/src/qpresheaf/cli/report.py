"""Table 1 and Table 2 reports.

Table 1 sets the classical and the quantum picture side by side for every
pair of a scenario: lattice-valued CDF and quantile, state values, the
ordinary CDF and quantile steps and the kappa maps. Table 2 repeats the
quantum column on the spectral presheaf: presheaf CDF, presheaf quantile,
per-context antitone measures and the Born minimum.

Both tables are plain data; :func:`render_json` and :func:`render_text` turn
them into canonical JSON or aligned text.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import numpy as np

from qpresheaf.classical_prob import EventLattice, Fixture, cdf, kappa_chain, lcdf, lquantile, quantile
from qpresheaf.cli.scenario import Pair, Scenario
from qpresheaf.codec import encode_blocks, encode_borel_set, encode_extended, encode_number, encode_poset, encode_values
from qpresheaf.config import get_tolerances
from qpresheaf.contexts import ClosePolicy, ContextPoset
from qpresheaf.linop_core import HermitianOperator, Projection, eig_hermitian
from qpresheaf.order_core import NEG_INF, POS_INF, ExtendedReal, Number
from qpresheaf.presheaf import PresheafCDF, born_report, breve_cdf, breve_quantile, daseinise, measure_on_sig
from qpresheaf.quantum_prob import DensityState, expectation, kappa_rho, mu_rho, quantum_cdf, quantum_quantile
from qpresheaf.sampling import make_rng, random_projection
from qpresheaf.spectral import BorelSet, QObservableFunction, spectral_family_of

logger = logging.getLogger(__name__)

REPORT_SAMPLES = 4
EVENT_LISTING_LIMIT = 4


def _sample(operator: HermitianOperator, rng: np.random.Generator, count: int) -> list[tuple[str, Projection]]:
    """Eigenprojections of ``operator`` followed by ``count`` seeded random projections."""
    decomposition = eig_hermitian(operator)
    named = [(f'P[{encode_number(v)}]', p) for v, p in zip(decomposition.eigenvalues, decomposition.eigenprojections)]
    named.extend((f'R{i}', random_projection(rng, operator.dim)) for i in range(count))
    return named


Step = tuple[Number, Number, ExtendedReal]


def _quantile_steps(levels: Sequence[tuple[ExtendedReal, Number]]) -> list[Step]:
    """``(above, upto, value)``: the quantile equals ``value`` on levels in ``(above, upto]``."""
    steps: list[Step] = [(0, 0, NEG_INF)]
    previous: Number = 0
    for r, level in levels:
        if float(level) > float(previous):
            steps.append((previous, level, r))
            previous = level
    return steps


def _encode_steps(steps: Sequence[Step]) -> list[dict[str, Any]]:
    return [
        {'above': None if i == 0 else encode_number(above), 'upto': encode_number(upto), 'value': encode_extended(value)}
        for i, (above, upto, value) in enumerate(steps)
    ]


# table 1


def _quantum_column(rho: DensityState, a: HermitianOperator, rng: np.random.Generator, count: int) -> dict[str, Any]:
    family = spectral_family_of(a)
    o = QObservableFunction.of(a)
    sample = _sample(a, rng, count)
    points = (NEG_INF, *family.extended_breakpoints, POS_INF)
    levels = [(r, quantum_cdf(rho, a, r)) for r in family.extended_breakpoints]
    steps = _quantile_steps(levels)
    return {
        'lcdf': [{'r': encode_extended(r), 'rank': family(r).rank} for r in points],
        'lquantile': [{'projection': name, 'rank': p.rank, 'value': encode_extended(o(p))} for name, p in sample],
        'state_values': [{'projection': name, 'value': encode_number(mu_rho(rho, p))} for name, p in sample],
        'cdf': [
            {'r': encode_extended(r), 'value': encode_number(quantum_cdf(rho, a, r))}
            for r in (NEG_INF, *family.extended_breakpoints)
        ],
        'quantile': _encode_steps(steps),
        'kappa': [
            {
                's': encode_number(upto),
                'rank': kappa_rho(rho, a, _clamped(upto)).rank,
                'quantile': encode_extended(quantum_quantile(rho, a, _clamped(upto))),
            }
            for _, upto, _ in steps
        ],
        'expectation': encode_number(expectation(rho, a)),
    }


def _clamped(level: Number) -> float:
    """A measured level, clipped into [0, 1] against rounding."""
    return min(max(float(level), 0.0), 1.0)


def _events(fixture: Fixture) -> list[frozenset[Any]]:
    points = fixture.space.points
    if len(points) <= EVENT_LISTING_LIMIT:
        return list(EventLattice(fixture.space).events())
    return [frozenset(), *(frozenset([p]) for p in points), fixture.space.whole]


def _event_name(event: frozenset[Any]) -> str:
    return '{' + ','.join(sorted(str(p) for p in event)) + '}'


def _classical_column(fixture: Fixture) -> dict[str, Any]:
    a, mu = fixture.variable, fixture.measure
    points = (NEG_INF, *a.breakpoints, POS_INF)
    levels = [(r, cdf(a, mu, r)) for r in a.breakpoints]
    steps = _quantile_steps(levels)
    events = _events(fixture)
    return {
        'name': fixture.name,
        'lcdf': [{'r': encode_extended(r), 'event': _event_name(lcdf(a, r))} for r in points],
        'lquantile': [{'event': _event_name(e), 'value': encode_extended(lquantile(a, e))} for e in events],
        'state_values': [{'event': _event_name(e), 'value': encode_number(mu(e))} for e in events],
        'cdf': [{'r': encode_extended(r), 'value': encode_number(cdf(a, mu, r))} for r in (NEG_INF, *a.breakpoints)],
        'quantile': _encode_steps(steps),
        'kappa': [
            {
                's': encode_number(upto),
                'event': _event_name(kappa_chain(a, mu, upto)),
                'quantile': encode_extended(quantile(a, mu, upto)),
            }
            for _, upto, _ in steps
        ],
    }


def _pairs(scenario: Scenario) -> list[tuple[Pair, DensityState, HermitianOperator]]:
    return [(pair, scenario.states[pair.state], scenario.operators[pair.operator]) for pair in scenario.pairs]


def table_one(scenario: Scenario, seed: int = 42) -> dict[str, Any]:
    """Classical against quantum probability, one row block per pair."""
    rng = make_rng(seed)
    count = min(scenario.samples, REPORT_SAMPLES)
    rows = []
    for pair, rho, a in _pairs(scenario):
        column = _quantum_column(rho, a, rng, count)
        rows.append({'state': pair.state, 'operator': pair.operator, 'quantum': column})
    return {
        'table': 1,
        'seed': seed,
        'scenario': scenario.source,
        'pairs': rows,
        'classical': [_classical_column(fixture) for fixture in scenario.classical],
    }


# table 2


def _presheaf_column(
    rho: DensityState,
    a: HermitianOperator,
    delta: BorelSet | None,
    poset: ContextPoset,
    rng: np.random.Generator,
    count: int,
    notes: list[str],
    name: str,
) -> dict[str, Any]:
    presheaf_cdf = PresheafCDF(a, poset)
    has_context = bool(poset.contexts_containing(a))
    rows = []
    agrees = True
    for r in presheaf_cdf.support:
        subobject = presheaf_cdf(r)
        row: dict[str, Any] = {
            'r': encode_extended(r),
            'subobject': encode_blocks(subobject.components, poset),
            'measure': encode_values(measure_on_sig(rho, poset, subobject).values, poset),
            'quantum': encode_number(quantum_cdf(rho, a, r)),
        }
        if has_context:
            breve = breve_cdf(rho, a, poset, r)
            agrees = agrees and abs(breve - quantum_cdf(rho, a, r)) <= get_tolerances().tol
            row['breve'] = encode_number(breve)
        rows.append(row)
    o = QObservableFunction.of(a)
    quantiles = []
    for label, p in _sample(a, rng, count):
        value = presheaf_cdf.quantile(daseinise(p, poset))
        quantiles.append({'projection': label, 'value': encode_extended(value), 'expected': encode_extended(o(p))})
    column: dict[str, Any] = {'cdf': rows, 'quantile': quantiles}
    if not has_context:
        notes.append(f'{name}: no context contains the operator; Born minimum and breve cdf omitted')
        column['cdf_agrees'] = None
        return column
    column['cdf_agrees'] = agrees
    column['breve_quantile'] = [
        {'s': encode_number(s), 'value': encode_extended(breve_quantile(rho, a, poset, s))}
        for s in (Fraction(k, 10) for k in range(11))
    ]
    if delta is not None:
        report = born_report(rho, a, delta, poset)
        column['born'] = {
            'borel_set': encode_borel_set(delta),
            'measure': encode_values(report.per_context.values, poset),
            'minimum': encode_number(report.minimum),
            'argmin': [poset.labels[i] for i in report.argmin],
            'born': encode_number(report.born),
            'attained': report.attained,
        }
    return column


def table_two(scenario: Scenario, seed: int = 42, policy: ClosePolicy | None = None) -> dict[str, Any]:
    """Quantum probability on the spectral presheaf, one row block per pair."""
    rng = make_rng(seed)
    count = min(scenario.samples, REPORT_SAMPLES)
    notes: list[str] = []
    poset = scenario.poset(policy)
    report: dict[str, Any] = {'table': 2, 'seed': seed, 'scenario': scenario.source, 'poset': None, 'pairs': [], 'notes': notes}
    if poset is None:
        notes.append('the scenario names no contexts and no non-scalar operator')
        return report
    report['poset'] = encode_poset(poset)
    for pair, rho, a in _pairs(scenario):
        name = f'{pair.state}/{pair.operator}'
        delta = scenario.borel_sets[pair.borel_set] if pair.borel_set is not None else None
        column = _presheaf_column(rho, a, delta, poset, rng, count, notes, name)
        report['pairs'].append({'state': pair.state, 'operator': pair.operator, 'presheaf': column})
    return report


def build_report(scenario: Scenario, table: int, seed: int = 42, policy: ClosePolicy | None = None) -> dict[str, Any]:
    if table == 1:
        return table_one(scenario, seed)
    if table == 2:
        return table_two(scenario, seed, policy)
    raise ValueError(f'unknown table {table!r}')


# rendering


def render_json(report: dict[str, Any]) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + '\n'


def _cell(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, dict):
        return ' '.join(f'{k}={_cell(v)}' for k, v in sorted(value.items()))
    if isinstance(value, list):
        return '[' + ', '.join(_cell(v) for v in value) + ']'
    return str(value)


def format_table(rows: Sequence[dict[str, Any]], columns: Sequence[str] | None = None) -> list[str]:
    """Fixed-width text table; every column is as wide as its widest cell."""
    if not rows:
        return ['  (none)']
    columns = list(columns) if columns is not None else list(rows[0])
    cells = [[_cell(row.get(column)) for column in columns] for row in rows]
    widths = [max(len(column), *(len(line[i]) for line in cells)) for i, column in enumerate(columns)]
    lines = ['  ' + '  '.join(column.ljust(width) for column, width in zip(columns, widths)).rstrip()]
    lines.append('  ' + '  '.join('-' * width for width in widths))
    lines.extend('  ' + '  '.join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in cells)
    return lines


def _section(title: str, rows: Sequence[dict[str, Any]]) -> list[str]:
    return [f'{title}:', *format_table(rows), '']


def render_text(report: dict[str, Any]) -> str:
    lines = [f'Table {report["table"]}  scenario={report["scenario"]}  seed={report["seed"]}', '']
    if report['table'] == 2 and report['poset'] is not None:
        poset = report['poset']
        lines.append('contexts: ' + ', '.join(poset['contexts']))
        edges = ', '.join(f'{poset["contexts"][small]} < {poset["contexts"][big]}' for small, big in poset['inclusion_edges'])
        lines.extend([f'inclusions: {edges or "none"}', ''])
    for row in report['pairs']:
        lines.append(f'== state {row["state"]}, operator {row["operator"]} ==')
        if report['table'] == 1:
            column = row['quantum']
            for key in ('lcdf', 'lquantile', 'state_values', 'cdf', 'quantile', 'kappa'):
                lines.extend(_section(key, column[key]))
            lines.extend([f'expectation: {column["expectation"]}', ''])
        else:
            column = row['presheaf']
            lines.extend(_section('presheaf cdf', column['cdf']))
            lines.extend(_section('presheaf quantile', column['quantile']))
            if 'breve_quantile' in column:
                lines.extend(_section('breve quantile', column['breve_quantile']))
            if 'born' in column:
                born = column['born']
                lines.extend(_section('born', [{k: born[k] for k in ('minimum', 'argmin', 'born', 'attained')}]))
                lines.extend(_section('born measure', [born['measure']]))
            lines.extend([f'cdf agrees with quantum cdf: {_cell(column["cdf_agrees"])}', ''])
    for fixture in report.get('classical', []):
        lines.append(f'== classical fixture {fixture["name"]} ==')
        for key in ('lcdf', 'lquantile', 'state_values', 'cdf', 'quantile', 'kappa'):
            lines.extend(_section(key, fixture[key]))
    for note in report.get('notes', []):
        lines.append(f'note: {note}')
    return '\n'.join(lines).rstrip() + '\n'


__all__ = ('build_report', 'format_table', 'render_json', 'render_text', 'table_one', 'table_two')
