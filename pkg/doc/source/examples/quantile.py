from fractions import Fraction

import qpresheaf

fixture = qpresheaf.Fixture.build('dice', ['a', 'b', 'c'], ['0.2', '0.3', '0.5'], [1, 1, 4])
for s in (Fraction(1, 10), Fraction(1, 2), Fraction(3, 4)):
    print(s, qpresheaf.quantile(fixture.variable, fixture.measure, s))

rho = qpresheaf.DensityState([[0.7, 0], [0, 0.3]])
a = qpresheaf.HermitianOperator.diag([1, 3])
for s in (Fraction(1, 2), Fraction(7, 10), Fraction(9, 10)):
    print(s, qpresheaf.quantum_quantile(rho, a, s), qpresheaf.kappa_rho(rho, a, s).rank)
