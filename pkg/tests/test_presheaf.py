import logging

import numpy as np

from qpresheaf import errors
from qpresheaf.contexts import Context, ContextPoset, context_of_operator, poset_build
from qpresheaf.linop_core import HermitianOperator, Projection
from qpresheaf.order_core import NEG_INF, ExtendedReal
from qpresheaf.presheaf import (
    ENUMERATION_LIMIT,
    AntitoneFunction,
    ClopenSubobject,
    MeasureOnSig,
    PresheafCDF,
    SubobjectLattice,
    born_report,
    breve_cdf,
    breve_quantile,
    coheyting_neg,
    convex_combine,
    daseinisation_injective,
    daseinise,
    daseinise_to_context,
    enumerate_subobjects,
    global_section_search,
    heyting_neg,
    heyting_witness,
    largest_subobject_below,
    measure_on_sig,
    presheaf_cdf,
    presheaf_quantile,
    subobject_meet,
)
from qpresheaf.quantum_prob import DensityState, quantum_cdf, quantum_quantile
from qpresheaf.spectral import BorelSet
from tests import base

A = HermitianOperator.diag([1, 3])
RHO = DensityState(np.diag([0.7, 0.3]))
VZ = Context([Projection.diag([1, 0]), Projection.diag([0, 1])], 'Vz')
VX = Context([Projection(np.full((2, 2), 0.5)), Projection(np.array([[0.5, -0.5], [-0.5, 0.5]]))], 'Vx')


def qubit_poset():
    return ContextPoset([VZ, VX])


class TestSubobjects(base.TestCase):
    def test_restriction_closed(self):
        poset, _ = heyting_witness()
        ClopenSubobject(poset, [{0}, {0}])
        with self.assertRaises(errors.NotASubobject) as context:
            ClopenSubobject(poset, [{1}, {0}])
        self.assertEqual('restriction-closed', context.exception.invariant)

    def test_component_count_and_range(self):
        poset, _ = heyting_witness()
        with self.assertRaises(errors.NotASubobject):
            ClopenSubobject(poset, [{0}])
        with self.assertRaises(errors.NotASubobject):
            ClopenSubobject(poset, [{0}, {0, 2}])

    def test_top_and_bottom(self):
        poset, s = heyting_witness()
        top, bottom = ClopenSubobject.top(poset), ClopenSubobject.bottom(poset)
        self.assertTrue(top.is_top)
        self.assertTrue(bottom.is_empty)
        self.assertTrue(bottom <= s <= top)

    def test_meet_and_join(self):
        poset, s = heyting_witness()
        t = ClopenSubobject(poset, [{1, 2}, {1}])
        self.assertEqual(ClopenSubobject(poset, [(), {1}]), s & t)
        self.assertTrue((s | t).is_top)

    def test_largest_subobject_below(self):
        poset, _ = heyting_witness()
        fixed = largest_subobject_below(poset, [{1}, {0}])
        self.assertEqual(ClopenSubobject(poset, [(), {0}]), fixed)

    def test_from_projections(self):
        poset, s = heyting_witness()
        rebuilt = ClopenSubobject.from_projections(poset, s.projections())
        self.assertEqual(s, rebuilt)
        with self.assertRaises(errors.NotASubobject):
            ClopenSubobject.from_projections(poset, [Projection.onto([1, 1, 0]), Projection.identity(3)])

    def test_different_posets(self):
        s = ClopenSubobject.top(qubit_poset())
        t = ClopenSubobject.top(qubit_poset())
        with self.assertRaises(errors.DomainMismatch):
            subobject_meet(s, t)

    def test_enumeration(self):
        poset, s = heyting_witness()
        everything = list(enumerate_subobjects(poset))
        # Vc choices: {} allows 1, {0} allows 2, {1} allows 4, {0,1} allows 8
        self.assertEqual(15, len(everything))
        self.assertIn(s, everything)
        self.assertEqual(15, len(SubobjectLattice(poset).elements()))

    def test_enumeration_limit(self):
        big = ContextPoset([Context([Projection.onto(v) for v in np.eye(17)], 'V17')])
        self.assertGreater(sum(len(c) for c in big), ENUMERATION_LIMIT)
        with self.assertRaises(ValueError):
            list(enumerate_subobjects(big))


class TestNegations(base.TestCase):
    def test_heyting_negation_is_strict(self):
        poset, s = heyting_witness()
        negation = heyting_neg(s)
        self.assertTrue(negation.is_empty)
        self.assertFalse((s | negation).is_top)

    def test_coheyting_negation(self):
        poset, s = heyting_witness()
        conegation = coheyting_neg(s)
        self.assertEqual(ClopenSubobject(poset, [{1, 2}, {1}]), conegation)
        self.assertFalse((s & conegation).is_empty)
        self.assertTrue((s | conegation).is_top)

    def test_heyting_negation_of_single_block(self):
        poset, _ = heyting_witness()
        self.assertEqual(ClopenSubobject(poset, [{1, 2}, {1}]), heyting_neg(ClopenSubobject(poset, [{0}, {0}])))

    def test_pseudo_complement_everywhere(self):
        poset, _ = heyting_witness()
        everything = list(enumerate_subobjects(poset))
        top = ClopenSubobject.top(poset)
        for s in everything:
            negation, conegation = heyting_neg(s), coheyting_neg(s)
            self.assertTrue((s & negation).is_empty)
            self.assertTrue((s | conegation) == top)
            for t in everything:
                if (s & t).is_empty:
                    self.assertTrue(t <= negation)
                if (s | t) == top:
                    self.assertTrue(conegation <= t)

    def test_negation_of_extremes(self):
        poset, _ = heyting_witness()
        top, bottom = ClopenSubobject.top(poset), ClopenSubobject.bottom(poset)
        self.assertEqual(top, heyting_neg(bottom))
        self.assertEqual(bottom, heyting_neg(top))
        self.assertEqual(top, coheyting_neg(bottom))
        self.assertEqual(bottom, coheyting_neg(top))


class TestDaseinisation(base.TestCase):
    def test_to_context(self):
        plus = Projection(np.full((2, 2), 0.5))
        self.assertEqual(Projection.identity(2), daseinise_to_context(plus, VZ))
        self.assertEqual(plus, daseinise_to_context(plus, VX))

    def test_subobject(self):
        poset = qubit_poset()
        s = daseinise(Projection.diag([1, 0]), poset)
        self.assertEqual((frozenset({0}), frozenset({0, 1})), s.components)
        self.assertTrue(daseinise(Projection.zero(2), poset).is_empty)
        self.assertTrue(daseinise(Projection.identity(2), poset).is_top)

    def test_monotone_and_join_preserving(self):
        poset = qubit_poset()
        p, q = Projection.diag([1, 0]), Projection.diag([0, 1])
        self.assertTrue(daseinise(p, poset) <= daseinise(Projection.identity(2), poset))
        self.assertEqual(daseinise(Projection.identity(2), poset), daseinise(p, poset) | daseinise(q, poset))

    def test_injectivity(self):
        poset = qubit_poset()
        check = daseinisation_injective(Projection.diag([1, 0]), Projection.diag([0, 1]), poset)
        self.assertTrue(check.holds)
        skipped = daseinisation_injective(Projection.onto([1, 2]), Projection.diag([0, 1]), poset)
        self.assertIsNone(skipped.holds)
        self.assertIn('skipped', skipped.note)

    def test_dim_mismatch(self):
        with self.assertRaises(errors.DimMismatch):
            daseinise(Projection.identity(3), qubit_poset())


class TestMeasure(base.TestCase):
    def test_antitone_values(self):
        poset = qubit_poset()
        values = measure_on_sig(RHO, poset, daseinise(Projection.diag([1, 0]), poset))
        self.assertAlmostEqual(0.7, values[0])
        self.assertAlmostEqual(1.0, values[1])
        self.assertAlmostEqual(0.7, values.minimum)
        self.assertEqual((0,), values.argmin())

    def test_antitone_is_enforced(self):
        poset, _ = heyting_witness()
        with self.assertRaises(errors.NotMonotone):
            AntitoneFunction(poset, (0.5, 0.2))
        with self.assertRaises(ValueError):
            AntitoneFunction(poset, (0.2,))

    def test_empty_and_top(self):
        poset = qubit_poset()
        measure = MeasureOnSig(RHO, poset)
        self.assertEqual((0.0, 0.0), measure(ClopenSubobject.bottom(poset)).values)
        for value in measure(ClopenSubobject.top(poset)).values:
            self.assertAlmostEqual(1.0, value)

    def test_convex_combination(self):
        poset = qubit_poset()
        first, second = MeasureOnSig(RHO, poset), MeasureOnSig(DensityState.maximally_mixed(2), poset)
        mixed = convex_combine(first, second, 0.25)
        s = daseinise(Projection.diag([1, 0]), poset)
        for index in range(len(poset)):
            self.assertAlmostEqual(0.25 * first(s)[index] + 0.75 * second(s)[index], mixed(s)[index])
        with self.assertRaises(errors.OutOfRange):
            convex_combine(first, second, 2)

    def test_measure_dim_mismatch(self):
        with self.assertRaises(errors.DimMismatch):
            MeasureOnSig(DensityState.maximally_mixed(3), qubit_poset())


class TestPresheafCDF(base.TestCase):
    def test_values(self):
        poset = qubit_poset()
        self.assertTrue(presheaf_cdf(A, poset, NEG_INF).is_empty)
        self.assertTrue(presheaf_cdf(A, poset, 0).is_empty)
        self.assertEqual(daseinise(Projection.diag([1, 0]), poset), presheaf_cdf(A, poset, 2))
        self.assertTrue(presheaf_cdf(A, poset, 3).is_top)

    def test_quantile_is_left_adjoint(self):
        poset = qubit_poset()
        cdf = PresheafCDF(A, poset)
        for s in enumerate_subobjects(poset):
            q = cdf.quantile(s)
            for r in cdf.support:
                self.assertEqual(q <= r, s <= cdf(r))

    def test_quantile_values(self):
        poset = qubit_poset()
        self.assertEqual(NEG_INF, presheaf_quantile(A, poset, ClopenSubobject.bottom(poset)))
        self.assertEqual(ExtendedReal.finite(1), presheaf_quantile(A, poset, daseinise(Projection.diag([1, 0]), poset)))
        self.assertEqual(ExtendedReal.finite(3), presheaf_quantile(A, poset, ClopenSubobject.top(poset)))

    def test_warns_without_operator_context(self):
        poset = ContextPoset([VX])
        with self.assertLogs('qpresheaf.presheaf', level=logging.WARNING):
            PresheafCDF(A, poset)

    def test_breve_cdf_matches_quantum(self):
        poset = qubit_poset()
        for r in (0, 1, 2, 3):
            self.assertAlmostEqual(quantum_cdf(RHO, A, r), breve_cdf(RHO, A, poset, r))

    def test_breve_quantile_matches_quantum(self):
        poset = qubit_poset()
        for k in range(11):
            s = k / 10
            self.assertEqual(quantum_quantile(RHO, A, s), breve_quantile(RHO, A, poset, s))

    def test_breve_needs_operator_context(self):
        with self.assertRaises(errors.MissingOperatorContext):
            breve_cdf(RHO, A, ContextPoset([VX]), 1)
        with self.assertRaises(errors.OutOfRange):
            breve_quantile(RHO, A, qubit_poset(), 1.5)


class TestBornRule(base.TestCase):
    def test_minimum_is_born_probability(self):
        report = born_report(RHO, A, BorelSet.points(1), qubit_poset())
        self.assertAlmostEqual(0.7, report.minimum)
        self.assertAlmostEqual(0.7, report.born)
        self.assertEqual((0,), report.argmin)
        self.assertTrue(report.attained)

    def test_with_coarsened_poset(self):
        a = HermitianOperator.diag([1, 2, 2])
        rho = DensityState(np.diag([0.5, 0.25, 0.25]))
        poset = poset_build([Context([Projection.onto(v) for v in np.eye(3)], 'Vd')], 'coarsenings')
        report = born_report(rho, a, BorelSet.points(2), poset)
        self.assertAlmostEqual(0.5, report.born)
        self.assertTrue(report.attained)
        self.assertIn(poset.index_of(context_of_operator(a)), report.operator_contexts)

    def test_needs_operator_context(self):
        with self.assertRaises(errors.MissingOperatorContext):
            born_report(RHO, A, BorelSet.points(1), ContextPoset([VX]))


class TestGlobalSections(base.TestCase):
    def test_witness_poset(self):
        poset, _ = heyting_witness()
        self.assertEqual([(0, 0), (1, 1), (2, 1)], sorted(global_section_search(poset)))

    def test_limit(self):
        poset, _ = heyting_witness()
        self.assertEqual(1, len(global_section_search(poset, limit=1)))

    def test_unrelated_contexts_combine_freely(self):
        self.assertEqual(4, len(global_section_search(qubit_poset())))
