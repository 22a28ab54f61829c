import qpresheaf

z = qpresheaf.Context([qpresheaf.Projection.diag([1, 0]), qpresheaf.Projection.diag([0, 1])], 'Vz')
x = qpresheaf.Context([qpresheaf.Projection.onto([1, 1]), qpresheaf.Projection.onto([1, -1])], 'Vx')
poset = qpresheaf.poset_build([z, x])

rho = qpresheaf.DensityState([[0.7, 0], [0, 0.3]])
a = qpresheaf.HermitianOperator.diag([1, 3])
report = qpresheaf.born_report(rho, a, qpresheaf.BorelSet.points(1), poset)
print('per context:', dict(zip(poset.labels, report.per_context.values)))
print('minimum:', report.minimum, 'born:', report.born, 'attained:', report.attained)
