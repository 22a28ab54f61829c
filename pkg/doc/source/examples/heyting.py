import qpresheaf

diagonal = qpresheaf.Context([qpresheaf.Projection.diag(row) for row in ([1, 0, 0], [0, 1, 0], [0, 0, 1])], 'Vd')
coarse = qpresheaf.Context([qpresheaf.Projection.diag([1, 0, 0]), qpresheaf.Projection.diag([0, 1, 1])], 'Vc')
poset = qpresheaf.ContextPoset([diagonal, coarse])

s = qpresheaf.ClopenSubobject(poset, [{0}, {0, 1}])
print('s       ', s)
print('not s   ', qpresheaf.heyting_neg(s))
print('co-not s', qpresheaf.coheyting_neg(s))
print('s or not s is top:', (s | qpresheaf.heyting_neg(s)).is_top)
