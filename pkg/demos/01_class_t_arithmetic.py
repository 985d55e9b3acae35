"""
Continued fractions, class T and link groups
============================================

A cyclic quotient singularity 1/m(1,q) is resolved by a chain of curves whose
self-intersections come from the continued fraction of m/q.  Class T points
are the ones of shape 1/dn^2(1, dna-1).
"""

from orthocoll import CyclicQuotient, alpha_coefficients, classify_class_t, hj_expand
from orthocoll.link import chain_group

# The three singular points of the example cubic surface degeneration.
for m, q in [(4, 1), (50, 9), (486, 107)]:
    b = hj_expand(m, q)
    t = classify_class_t(CyclicQuotient(m, q))
    g = chain_group(b)
    print(f"1/{m}(1,{q}): chain {b}, class T (d,n,a) = ({t.d},{t.n},{t.a}), H_1 = Z/{g.order}")

# The loops around the chain curves are multiples of the first one.
print("alpha coefficients of [6,3,2,2,2]:", alpha_coefficients((6, 3, 2, 2, 2)))

# 1/5(1,2) is not of class T.
print("1/5(1,2) class T?", classify_class_t(CyclicQuotient(5, 2)))
