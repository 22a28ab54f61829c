"""Order-theoretic classical and quantum probability on finite-dimensional spaces.

CDFs and quantile functions are treated as Galois connections: classical
ones between the extended reals and ``[0, 1]``, quantum ones through spectral
families and q-observable functions, and presheaf ones over a finite poset of
contexts where the Born rule appears as the minimum of an antitone function.
"""

from __future__ import annotations

import importlib.metadata

from qpresheaf.classical_prob import Fixture, ProbabilityMeasure, RandomVariable, cdf, lcdf, lquantile, quantile
from qpresheaf.config import Tolerances, get_tolerances, use_tolerances
from qpresheaf.contexts import Context, ContextPoset, context_from_commuting, context_of_operator, poset_build
from qpresheaf.errors import Error
from qpresheaf.linop_core import HermitianOperator, Projection, eig_hermitian, proj_join, proj_leq, proj_meet
from qpresheaf.order_core import NEG_INF, POS_INF, ExtendedReal, MonotoneMap, left_adjoint, verify_galois_pair
from qpresheaf.presheaf import ClopenSubobject, born_report, coheyting_neg, daseinise, heyting_neg, measure_on_sig, presheaf_cdf
from qpresheaf.quantum_prob import DensityState, kappa_rho, mu_rho, pairing, quantum_cdf, quantum_quantile
from qpresheaf.spectral import BorelSet, QObservableFunction, q_observable, spectral_family_from_q, spectral_family_of

try:
    __version__ = importlib.metadata.version('qpresheaf')
except importlib.metadata.PackageNotFoundError:
    __version__ = '0.0.0'

__all__ = (
    'NEG_INF',
    'POS_INF',
    'BorelSet',
    'ClopenSubobject',
    'Context',
    'ContextPoset',
    'DensityState',
    'Error',
    'ExtendedReal',
    'Fixture',
    'HermitianOperator',
    'MonotoneMap',
    'ProbabilityMeasure',
    'Projection',
    'QObservableFunction',
    'RandomVariable',
    'Tolerances',
    '__version__',
    'born_report',
    'cdf',
    'coheyting_neg',
    'context_from_commuting',
    'context_of_operator',
    'daseinise',
    'eig_hermitian',
    'get_tolerances',
    'heyting_neg',
    'kappa_rho',
    'lcdf',
    'left_adjoint',
    'lquantile',
    'measure_on_sig',
    'mu_rho',
    'pairing',
    'poset_build',
    'presheaf_cdf',
    'proj_join',
    'proj_leq',
    'proj_meet',
    'q_observable',
    'quantile',
    'quantum_cdf',
    'quantum_quantile',
    'spectral_family_from_q',
    'spectral_family_of',
    'use_tolerances',
    'verify_galois_pair',
)
