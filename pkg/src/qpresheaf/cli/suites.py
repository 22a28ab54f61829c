"""Law-check suites behind ``qpresheaf check``.

Each suite walks the objects named in a scenario and a batch of seeded random
instances, counting every law it evaluates. A law that fails, or that raises
a library error while being evaluated, becomes a :class:`Violation` carrying
the inputs that triggered it.
"""

from __future__ import annotations

import contextlib
import dataclasses
import itertools
import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from fractions import Fraction
from typing import Any

import numpy as np

from qpresheaf.classical_prob import (
    Fixture,
    cdf,
    cdf_map,
    kappa_chain,
    kappa_global,
    lcdf,
    lquantile,
    measure_map,
    quantile,
    quantile_map,
    random_fixture,
    unit_grid,
)
from qpresheaf.cli.scenario import Scenario
from qpresheaf.codec import encode_blocks, encode_extended, encode_matrix, encode_number
from qpresheaf.config import get_tolerances
from qpresheaf.contexts import ClosePolicy, ContextPoset
from qpresheaf.errors import AxiomViolation, Error
from qpresheaf.linop_core import (
    HermitianOperator,
    Projection,
    eig_hermitian,
    join_all,
    orthocomplement,
    proj_eq,
    proj_join,
    proj_leq,
    proj_meet,
)
from qpresheaf.order_core import (
    NEG_INF,
    POS_INF,
    ExtendedReal,
    GaloisReport,
    check_preservation,
    values_close,
    verify_galois_pair,
)
from qpresheaf.presheaf import (
    ENUMERATION_LIMIT,
    ClopenSubobject,
    MeasureOnSig,
    PresheafCDF,
    born_report,
    breve_cdf,
    breve_quantile,
    coheyting_neg,
    convex_combine,
    daseinisation_injective,
    daseinise,
    enumerate_subobjects,
    global_section_search,
    heyting_neg,
    heyting_witness,
)
from qpresheaf.quantum_prob import (
    DensityState,
    expectation,
    expectation_from_cdf,
    gelfand_shadow,
    kappa_rho,
    mu_rho,
    quantum_cdf,
    quantum_cdf_map,
    quantum_quantile,
    quantum_quantile_global,
    quantum_quantile_map,
    real_rank_one_sample,
)
from qpresheaf.sampling import (
    random_borel_set,
    random_commuting_pair,
    random_hermitian,
    random_monotone_map,
    random_poset,
    random_projection,
    random_state,
    spawn_rngs,
)
from qpresheaf.spectral import (
    BorelSet,
    QObservableFunction,
    operator_from_q,
    rescale_check,
    spectral_family_from_q,
    spectral_family_of,
    spectral_max,
    spectral_min,
    spectral_order_leq,
)

logger = logging.getLogger(__name__)

SUITE_NAMES = ('classical', 'quantum', 'presheaf')

CLASSICAL_RANDOM_SIZES = 12
RANDOM_GRID_STEPS = 20
MAPS_PER_OPERATOR = 20


def _show(value: Any) -> Any:
    """JSON-ready rendering of a law input."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, ExtendedReal):
        return encode_extended(value)
    if isinstance(value, (int, float, Fraction, np.floating)):
        return encode_number(float(value) if isinstance(value, np.floating) else value)
    if isinstance(value, HermitianOperator):
        return encode_matrix(value)
    if isinstance(value, ClopenSubobject):
        return encode_blocks(value.components, value.poset)
    if isinstance(value, (frozenset, set)):
        return sorted(str(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_show(v) for v in value]
    return str(value)


@dataclasses.dataclass(frozen=True)
class Violation:
    module: str
    law: str
    inputs: Mapping[str, Any]

    def as_dict(self) -> dict[str, Any]:
        return {'module': self.module, 'law': self.law, 'inputs': dict(self.inputs)}


@dataclasses.dataclass
class SuiteResult:
    """Counts, violations and notes of one suite run."""

    name: str
    checked: int = 0
    violations: list[Violation] = dataclasses.field(default_factory=list)
    notes: list[str] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def check(self, module: str, law: str, holds: bool, **inputs: Any) -> bool:
        self.checked += 1
        if not holds:
            self._violate(module, law, inputs)
        return holds

    def _violate(self, module: str, law: str, inputs: Mapping[str, Any]) -> None:
        shown = {key: _show(value) for key, value in inputs.items()}
        logger.info('%s: %s violated (%s)', module, law, ', '.join(sorted(shown)))
        self.violations.append(Violation(module, law, shown))

    def galois(self, module: str, report: GaloisReport[Any, Any], **inputs: Any) -> None:
        self.checked += report.checked
        for violation in report.violations:
            self._violate(module, 'galois-adjunction', {**inputs, 'x': violation.x, 'y': violation.y})

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    @contextlib.contextmanager
    def guard(self, module: str, law: str, **inputs: Any) -> Iterator[None]:
        """Record a library error raised inside the block as a violation of ``law``."""
        try:
            yield
        except Error as error:
            self.checked += 1
            self._violate(module, law, {**inputs, 'error': f'{type(error).__name__}: {error}'})

    def as_dict(self) -> dict[str, Any]:
        return {
            'checked': self.checked,
            'violations': [v.as_dict() for v in self.violations],
            'notes': list(self.notes),
        }


def _grid_levels(steps: int) -> tuple[Fraction, ...]:
    return unit_grid(max(1, steps))


# classical


def _classical_laws(result: SuiteResult, fixture: Fixture, grid: Sequence[Fraction]) -> None:
    module = 'classical_prob'
    a, mu, name = fixture.variable, fixture.measure, fixture.name
    with result.guard(module, 'galois-adjunction', fixture=name):
        result.galois(module, verify_galois_pair(quantile_map(a, mu, grid), cdf_map(a, mu)), fixture=name)

    for r in (NEG_INF, *a.breakpoints, POS_INF):
        direct = sum((mu.weights[p] for p in a.space if ExtendedReal.finite(a(p)) <= r), Fraction(0))
        result.check(module, 'cdf-decomposition', values_close(cdf(a, mu, r), direct), fixture=name, r=r)

    for r, s in itertools.combinations(a.breakpoints, 2):
        result.check(module, 'lcdf-meets', lcdf(a, min(r, s)) == lcdf(a, r) & lcdf(a, s), fixture=name, r=r, s=s)

    values = sorted({cdf(a, mu, r) for r in a.breakpoints} | {Fraction(0)})
    image = {ExtendedReal.finite(v) for v in a.image}
    for p in grid:
        q = quantile(a, mu, p)
        result.check(module, 'quantile-decomposition', q == lquantile(a, kappa_chain(a, mu, p)), fixture=name, p=p)
        if p == 0:
            result.check(module, 'quantile-at-zero', q == NEG_INF, fixture=name)
            continue
        result.check(module, 'quantile-in-image', q in image, fixture=name, p=p, quantile=q)
        previous = max(v for v in values if v < p)
        result.check(module, 'left-continuity', quantile(a, mu, (previous + p) / 2) == q, fixture=name, p=p)

    if len(a.space) <= 4:
        if not check_preservation(measure_map(mu), 'meets'):
            result.note(f'{name}: the measure does not preserve meets on all events, so only the chain kappa is an adjoint')
        if any(kappa_global(mu, p) != kappa_chain(a, mu, p) for p in grid):
            result.note(f'{name}: global and chain kappa differ on the grid')


def classical_suite(scenario: Scenario | None, rng: np.random.Generator, count: int) -> SuiteResult:
    result = SuiteResult('classical')
    fixtures = list(scenario.classical) if scenario is not None else []
    grid = _grid_levels(scenario.grid_steps if scenario is not None else 100)
    for index in range(min(count, CLASSICAL_RANDOM_SIZES)):
        fixtures.append(random_fixture(rng, 1 + index % CLASSICAL_RANDOM_SIZES, f'random#{index}'))
    for fixture in fixtures:
        _classical_laws(result, fixture, grid)
    logger.debug('classical suite: %d fixtures, %d laws', len(fixtures), result.checked)
    return result


# quantum


def _spectral_laws(
    result: SuiteResult, name: str, a: HermitianOperator, samples: Sequence[Projection], maps: Sequence[Any] = ()
) -> None:
    module = 'spectral'
    with result.guard(module, 'spectral-family', operator=name):
        family = spectral_family_of(a)
        o = QObservableFunction.of(a)
        increments = family.increments()
        projections = [*increments, *family.cumulative, *samples]
        points = (NEG_INF, *family.extended_breakpoints, POS_INF)
        for index, p in enumerate(projections):
            value = o(p)
            for r in points:
                result.check(
                    module, 'galois-adjunction', (value <= r) == proj_leq(p, family(r)), operator=name, projection=index, r=r
                )
            if p.is_zero():
                result.check(module, 'zero-is-bottom', value == NEG_INF, operator=name, projection=index)
            else:
                result.check(module, 'spectrum-image', value in family.extended_breakpoints, operator=name, projection=index)
        for breakpoint, increment in zip(family.extended_breakpoints, increments):
            result.check(module, 'eigenvalue-attained', o(increment) == breakpoint, operator=name, eigenvalue=breakpoint)

        result.check(module, 'round-trip', spectral_family_from_q(o).close_to(family), operator=name)
        result.check(module, 'operator-round-trip', operator_from_q(o).close_to(a), operator=name)
        result.check('linop_core', 'eig-reconstruction', eig_hermitian(a).reconstruct().close_to(a), operator=name)

        for index, f in enumerate(maps):
            report = rescale_check(a, f, samples)
            result.checked += report.checked
            for violation in report.violations:
                result.check(
                    module, 'rescaling', False, operator=name, map=index,
                    projection=violation.projection, rescaled=violation.rescaled, expected=violation.expected,
                )


def _lattice_laws(result: SuiteResult, name: str, p: Projection, q: Projection) -> None:
    module = 'linop_core'
    meet, join = proj_meet(p, q), proj_join(p, q)
    result.check(module, 'absorption', proj_eq(proj_join(p, proj_meet(p, q)), p, get_tolerances().reconstruct_tol), pair=name)
    result.check(module, 'absorption', proj_eq(proj_meet(p, proj_join(p, q)), p, get_tolerances().reconstruct_tol), pair=name)
    result.check(module, 'meet-below', proj_leq(meet, p) and proj_leq(meet, q), pair=name)
    result.check(module, 'join-above', proj_leq(p, join) and proj_leq(q, join), pair=name)
    restored = proj_join(p, proj_meet(join, orthocomplement(p)))
    result.check(module, 'orthomodular', proj_eq(restored, join, get_tolerances().reconstruct_tol), pair=name)


def _distributivity_witness(result: SuiteResult) -> None:
    p = Projection.diag([1, 0])
    q = Projection.diag([0, 1])
    px = Projection.onto([1, 1])
    left = proj_meet(p, proj_join(px, q))
    right = proj_join(proj_meet(p, px), proj_meet(p, q))
    holds = proj_eq(left, p) and right.is_zero()
    result.check('linop_core', 'distributivity-failure', holds, witness='P=diag(1,0), Q=diag(0,1), R=span(1,1)')


def _order_pair_laws(
    result: SuiteResult, name: str, a: HermitianOperator, b: HermitianOperator, samples: Sequence[Projection]
) -> None:
    module = 'spectral'
    with result.guard(module, 'spectral-order', pair=name):
        family_a, family_b = spectral_family_of(a), spectral_family_of(b)
        o_a, o_b = QObservableFunction.of(a), QObservableFunction.of(b)
        sample = [*family_a.cumulative, *family_b.cumulative, *samples]
        pointwise = all(o_a(p) <= o_b(p) for p in sample)
        result.check(module, 'spectral-order', spectral_order_leq(a, b) == pointwise, pair=name)
        low, high = spectral_min(a, b), spectral_max(a, b)
        result.check(module, 'spectral-min', spectral_order_leq(low, a) and spectral_order_leq(low, b), pair=name)
        result.check(module, 'spectral-max', spectral_order_leq(a, high) and spectral_order_leq(b, high), pair=name)


def _state_laws(result: SuiteResult, name: str, rho: DensityState, a: HermitianOperator, grid: Sequence[Fraction]) -> None:
    module = 'quantum_prob'
    tol = get_tolerances().tol
    decomposition = eig_hermitian(a)
    projections = decomposition.eigenprojections
    for i, j in itertools.combinations(range(len(projections)), 2):
        total = mu_rho(rho, join_all([projections[i], projections[j]], a.dim))
        parts = mu_rho(rho, projections[i]) + mu_rho(rho, projections[j])
        result.check(module, 'finite-additivity', abs(total - parts) <= tol, pair=name, blocks=[i, j])
    result.check(module, 'normalization', abs(mu_rho(rho, Projection.identity(a.dim)) - 1.0) <= tol, pair=name)

    with result.guard(module, 'galois-adjunction', pair=name):
        result.galois(module, verify_galois_pair(quantum_quantile_map(rho, a, grid), quantum_cdf_map(rho, a)), pair=name)

    with result.guard(module, 'kappa-lemma', pair=name):
        for s in grid:
            kappa = kappa_rho(rho, a, s)
            result.check(module, 'kappa-lemma', quantum_quantile(rho, a, s) == QObservableFunction.of(a)(kappa), pair=name, s=s)

    with result.guard(module, 'gelfand-shadow', pair=name):
        shadow = gelfand_shadow(rho, a, name)
        variable, measure = shadow.variable, shadow.measure
        for r in spectral_family_of(a).extended_breakpoints:
            agrees = abs(float(cdf(variable, measure, r)) - quantum_cdf(rho, a, r)) <= tol
            result.check(module, 'gelfand-shadow', agrees, pair=name, r=r)
    gap = abs(expectation(rho, a) - expectation_from_cdf(rho, a))
    result.check(module, 'expectation', gap <= get_tolerances().reconstruct_tol, pair=name)


def _kappa_witness(result: SuiteResult) -> None:
    rho = DensityState.maximally_mixed(2)
    a = HermitianOperator.diag([0, 1])
    chain = quantum_quantile(rho, a, Fraction(1, 2))
    global_route = quantum_quantile_global(rho, a, Fraction(1, 2))
    holds = chain == ExtendedReal.finite(0) and global_route == NEG_INF
    result.check('quantum_prob', 'kappa-discrepancy', holds, chain=chain, global_route=global_route)
    wide = quantum_quantile_global(rho, a, Fraction(1, 2), real_rank_one_sample(8))
    result.note(f'global kappa over the real rank-one sample gives quantile {wide} at s=1/2 where the chain gives {chain}')


def _q_table_laws(
    result: SuiteResult, name: str, entries: Sequence[tuple[Projection, ExtendedReal]], a: HermitianOperator
) -> None:
    module = 'spectral'
    o = QObservableFunction.from_table(entries)
    try:
        family = spectral_family_from_q(o)
    except AxiomViolation as error:
        result.check(module, 'q-observable-axioms', False, table=name, error=str(error))
        return
    except Error as error:
        result.check(module, 'spectral-family', False, table=name, error=f'{type(error).__name__}: {error}')
        return
    points = (NEG_INF, *family.extended_breakpoints, POS_INF)
    for index, (p, value) in enumerate(entries):
        for r in points:
            result.check(module, 'galois-adjunction', (value <= r) == proj_leq(p, family(r)), table=name, entry=index, r=r)
    expected = QObservableFunction.of(a)
    for index, (p, value) in enumerate(entries):
        want = expected(p)
        result.check(module, 'q-table-agreement', value == want, table=name, entry=index, value=value, expected=want)
    result.check(module, 'q-table-family', family.close_to(spectral_family_of(a)), table=name)


def quantum_suite(scenario: Scenario | None, rng: np.random.Generator, count: int) -> SuiteResult:
    result = SuiteResult('quantum')
    sample_count = scenario.samples if scenario is not None else 20
    full_grid = _grid_levels(scenario.grid_steps if scenario is not None else 100)
    random_grid = _grid_levels(RANDOM_GRID_STEPS)

    _distributivity_witness(result)
    _kappa_witness(result)

    if scenario is not None:
        for name, operator in scenario.operators.items():
            samples = [random_projection(rng, scenario.dim) for _ in range(sample_count)]
            _spectral_laws(result, name, operator, samples, [random_monotone_map(rng) for _ in range(MAPS_PER_OPERATOR)])
        for name, table in scenario.q_tables.items():
            _q_table_laws(result, name, table.entries, scenario.operators[table.operator])
        for pair in scenario.pairs:
            rho, operator = scenario.states[pair.state], scenario.operators[pair.operator]
            _state_laws(result, f'{pair.state}/{pair.operator}', rho, operator, full_grid)

    for index in range(count):
        dim = 2 + index % 5
        operator = random_hermitian(rng, dim, degenerate=index % 3 == 0)
        samples = [random_projection(rng, dim) for _ in range(sample_count)]
        _spectral_laws(result, f'random#{index}', operator, samples, [random_monotone_map(rng) for _ in range(MAPS_PER_OPERATOR)])
        if len(samples) >= 2:
            _lattice_laws(result, f'random#{index}', samples[0], samples[1])

    for index in range(count // 2):
        dim = 2 + index % 3
        kind = index % 3
        if kind == 0:
            a, b = random_commuting_pair(rng, dim)
        elif kind == 1:
            a = random_hermitian(rng, dim)
            b = HermitianOperator(a.matrix + float(rng.uniform(0.0, 2.0)) * np.eye(dim))
        else:
            a, b = random_hermitian(rng, dim), random_hermitian(rng, dim)
        samples = [random_projection(rng, dim) for _ in range(sample_count)]
        _order_pair_laws(result, f'pair#{index}', a, b, samples)
        _order_pair_laws(result, f'pair#{index}-swapped', b, a, samples)

    for index in range(max(1, count // 4)):
        dim = 2 + index % 3
        rho = random_state(rng, dim)
        operator = random_hermitian(rng, dim, degenerate=index % 2 == 1)
        _state_laws(result, f'state#{index}', rho, operator, random_grid)

    logger.debug('quantum suite: %d laws', result.checked)
    return result


# presheaf


def _heyting_witness_laws(result: SuiteResult) -> None:
    module = 'presheaf'
    poset, s = heyting_witness()
    top = ClopenSubobject.top(poset)
    negation, conegation = heyting_neg(s), coheyting_neg(s)
    result.check(module, 'heyting-witness', negation.is_empty and s | negation != top, subobject=s, negation=negation)
    expected = ClopenSubobject(poset, [{1, 2}, {1}])
    overlaps = not (s & conegation).is_empty
    result.check(module, 'coheyting-witness', conegation == expected and overlaps, subobject=s, negation=conegation)
    single = ClopenSubobject(poset, [{0}, {0}])
    result.check(module, 'heyting-witness', heyting_neg(single) == expected, subobject=single)


def _heyting_laws(result: SuiteResult, name: str, poset: ContextPoset, subjects: Sequence[ClopenSubobject]) -> None:
    module = 'presheaf'
    if sum(len(context) for context in poset) > ENUMERATION_LIMIT:
        return
    everything = tuple(enumerate_subobjects(poset))
    top = ClopenSubobject.top(poset)
    for s in subjects:
        negation, conegation = heyting_neg(s), coheyting_neg(s)
        disjoint = [t for t in everything if not any(a & b for a, b in zip(s.components, t.components))]
        covering = [t for t in everything if (s | t) == top]
        largest = negation in disjoint and all(t <= negation for t in disjoint)
        smallest = conegation in covering and all(conegation <= t for t in covering)
        result.check(module, 'heyting-negation', largest, poset=name, subobject=s)
        result.check(module, 'coheyting-negation', smallest, poset=name, subobject=s)


def _daseinisation_laws(result: SuiteResult, name: str, poset: ContextPoset, projections: Sequence[Projection]) -> None:
    module = 'presheaf'
    dim = poset.dim
    result.check(module, 'daseinisation-bounds', daseinise(Projection.zero(dim), poset).is_empty, poset=name)
    result.check(module, 'daseinisation-bounds', daseinise(Projection.identity(dim), poset).is_top, poset=name)
    images = [daseinise(p, poset) for p in projections]
    for (i, p), (j, q) in itertools.combinations(enumerate(projections), 2):
        join = proj_join(p, q)
        joined = daseinise(join, poset)
        result.check(module, 'daseinisation-joins', joined == images[i] | images[j], poset=name, pair=[i, j])
        result.check(module, 'daseinisation-monotone', images[i] <= joined and images[j] <= joined, poset=name, pair=[i, j])
        if proj_leq(p, q):
            result.check(module, 'daseinisation-monotone', images[i] <= images[j], poset=name, pair=[i, j])
        meet = daseinise(proj_meet(p, q), poset)
        result.check(module, 'daseinisation-meets', meet <= images[i] & images[j], poset=name, pair=[i, j])


def _injectivity_laws(result: SuiteResult, name: str, poset: ContextPoset, projections: Sequence[Projection]) -> None:
    for (i, p), (j, q) in itertools.combinations(enumerate(projections), 2):
        outcome = daseinisation_injective(p, q, poset)
        if outcome.holds is None:
            result.note(f'{name}: daseinisation injectivity {outcome.note}')
            continue
        result.check('presheaf', 'daseinisation-injective', outcome.holds, poset=name, pair=[i, j])


def _cdf_laws(
    result: SuiteResult,
    name: str,
    rho: DensityState,
    a: HermitianOperator,
    poset: ContextPoset,
    samples: Sequence[Projection],
) -> None:
    module = 'presheaf'
    tol = get_tolerances().tol
    presheaf_cdf = PresheafCDF(a, poset)
    family = presheaf_cdf.family
    result.check(module, 'cdf-bounds', presheaf_cdf(NEG_INF).is_empty and presheaf_cdf(POS_INF).is_top, pair=name)
    points = family.breakpoints
    for position, breakpoint in enumerate(points):
        upper = points[position + 1] if position + 1 < len(points) else breakpoint + 1.0
        midpoint = (breakpoint + upper) / 2
        result.check(module, 'right-continuity', presheaf_cdf(midpoint) == presheaf_cdf(breakpoint), pair=name, r=breakpoint)
    o = QObservableFunction.of(a)
    for index, p in enumerate([*family.increments(), *family.cumulative, *samples]):
        value = presheaf_cdf.quantile(daseinise(p, poset))
        result.check(module, 'quantile-daseinisation', value == o(p), pair=name, projection=index, value=value, expected=o(p))
    for r in presheaf_cdf.support:
        breve, direct = breve_cdf(rho, a, poset, r), quantum_cdf(rho, a, r)
        result.check(module, 'breve-cdf', abs(breve - direct) <= tol, pair=name, r=r, breve=breve, quantum=direct)
    for s in _grid_levels(10):
        result.check(module, 'breve-quantile', breve_quantile(rho, a, poset, s) == quantum_quantile(rho, a, s), pair=name, s=s)


def _born_laws(
    result: SuiteResult, name: str, rho: DensityState, a: HermitianOperator, delta: BorelSet, poset: ContextPoset
) -> None:
    report = born_report(rho, a, delta, poset)
    shown = {'minimum': report.minimum, 'born': report.born, 'argmin': list(report.argmin)}
    result.check('presheaf', 'born-minimum', report.attained, pair=name, **shown)


def _measure_laws(
    result: SuiteResult,
    name: str,
    first: DensityState,
    second: DensityState,
    poset: ContextPoset,
    subjects: Sequence[ClopenSubobject],
    weight: Fraction,
) -> None:
    module = 'presheaf'
    tol = get_tolerances().tol
    mu = MeasureOnSig(first, poset)
    nu = MeasureOnSig(second, poset)
    result.check(module, 'measure-empty', all(abs(v) <= tol for v in mu(ClopenSubobject.bottom(poset)).values), poset=name)
    result.check(module, 'measure-top', all(abs(v - 1.0) <= tol for v in mu(ClopenSubobject.top(poset)).values), poset=name)
    for (i, s), (j, t) in itertools.combinations(enumerate(subjects), 2):
        left = np.add(mu(s).values, mu(t).values)
        right = np.add(mu(s | t).values, mu(s & t).values)
        result.check(module, 'measure-modular', bool(np.allclose(left, right, rtol=0.0, atol=tol)), poset=name, pair=[i, j])
    combined = convex_combine(mu, nu, weight)
    c = float(weight)
    for index, s in enumerate(subjects):
        expected = c * np.asarray(mu(s).values) + (1 - c) * np.asarray(nu(s).values)
        agrees = np.allclose(combined(s).values, expected, rtol=0.0, atol=tol)
        result.check(module, 'convex-combination', bool(agrees), poset=name, subobject=index, weight=weight)


def _presheaf_instance(
    result: SuiteResult,
    name: str,
    rng: np.random.Generator,
    rho: DensityState,
    a: HermitianOperator,
    delta: BorelSet,
    poset: ContextPoset,
    sample_count: int,
) -> None:
    module = 'presheaf'
    dim = poset.dim
    family = spectral_family_of(a)
    samples = [random_projection(rng, dim) for _ in range(sample_count)]
    named = [*eig_hermitian(a).eigenprojections, *family.cumulative[:-1]]
    with result.guard(module, 'daseinisation', pair=name):
        _daseinisation_laws(result, name, poset, [*named, *samples[:3]])
        _injectivity_laws(result, name, poset, named)
    subjects = [daseinise(p, poset) for p in [*named, *samples[:2]]]
    if poset.contexts_containing(a):
        with result.guard(module, 'presheaf-cdf', pair=name):
            _cdf_laws(result, name, rho, a, poset, samples)
        with result.guard(module, 'born-minimum', pair=name):
            _born_laws(result, name, rho, a, delta, poset)
    else:
        result.note(f'{name}: no context contains the operator; presheaf cdf and Born checks skipped')
    with result.guard(module, 'measure', pair=name):
        _measure_laws(result, name, rho, random_state(rng, dim), poset, subjects, Fraction(int(rng.integers(0, 11)), 10))
    with result.guard(module, 'heyting-negation', pair=name):
        _heyting_laws(result, name, poset, subjects)


def presheaf_suite(
    scenario: Scenario | None, rng: np.random.Generator, count: int, policy: ClosePolicy | None = None
) -> SuiteResult:
    result = SuiteResult('presheaf')
    sample_count = min(scenario.samples if scenario is not None else 20, 6)
    _heyting_witness_laws(result)
    witness, _ = heyting_witness()
    result.note(f'witness poset: {len(global_section_search(witness))} global sections')

    if scenario is not None:
        poset = scenario.poset(policy)
        if poset is None:
            result.note('scenario has no contexts; presheaf checks on it skipped')
        else:
            result.note(f'scenario poset: {len(poset)} contexts, {len(global_section_search(poset))} global sections')
            for pair in scenario.pairs:
                name = f'{pair.state}/{pair.operator}'
                a = scenario.operators[pair.operator]
                delta = scenario.borel_sets[pair.borel_set] if pair.borel_set is not None else random_borel_set(rng, a)
                _presheaf_instance(result, name, rng, scenario.states[pair.state], a, delta, poset, sample_count)

    for index in range(count):
        dim = 2 + index % 3
        a = random_hermitian(rng, dim, degenerate=index % 2 == 0)
        poset = random_poset(rng, a)
        rho, delta = random_state(rng, dim), random_borel_set(rng, a)
        _presheaf_instance(result, f'random#{index}', rng, rho, a, delta, poset, sample_count)

    logger.debug('presheaf suite: %d laws', result.checked)
    return result


_RUNNERS: dict[str, Callable[..., SuiteResult]] = {
    'classical': lambda scenario, rng, count, policy: classical_suite(scenario, rng, count),
    'quantum': lambda scenario, rng, count, policy: quantum_suite(scenario, rng, count),
    'presheaf': presheaf_suite,
}


def run_suites(
    scenario: Scenario | None,
    suite: str = 'all',
    seed: int = 42,
    random_count: int = 100,
    policy: ClosePolicy | None = None,
) -> dict[str, Any]:
    """Run the selected suites and return the report as plain data.

    Every suite draws from its own child of ``SeedSequence(seed)``, so a
    suite's results do not depend on which other suites run alongside it.
    """
    if suite != 'all' and suite not in SUITE_NAMES:
        raise ValueError(f'unknown suite {suite!r}')
    selected = SUITE_NAMES if suite == 'all' else (suite,)
    rngs = dict(zip(SUITE_NAMES, spawn_rngs(seed, len(SUITE_NAMES))))
    results = {}
    for name in selected:
        rng = rngs[name]
        logger.info('running %s suite', name)
        results[name] = _RUNNERS[name](scenario, rng, random_count, policy)
    return {
        'seed': seed,
        'tolerance': get_tolerances().tol,
        'scenario': scenario.source if scenario is not None else None,
        'suites': {name: result.as_dict() for name, result in results.items()},
        'passed': all(result.passed for result in results.values()),
    }


__all__ = (
    'SUITE_NAMES',
    'SuiteResult',
    'Violation',
    'classical_suite',
    'presheaf_suite',
    'quantum_suite',
    'run_suites',
)
