"""
Kazhdan-Lusztig polynomials
===========================

Build the table of p(x, w) for a group and query individual entries.
"""

import numpy as np

from cellcentre import build_group, build_kl_table

g = build_group("A3")
kl = build_kl_table(g)

# p(x, w) = v^(|x| - |w|) P_{x,w}(v^2) lives in v^-1 Z[v^-1] for x < w
x, w = g.element("s2"), g.element("s2 s1 s3 s2")
print("p(s2, s2 s1 s3 s2) =", kl.p(x, w))
print("classical P =", kl.classical(x, w))

# the non-trivial polynomials of A3
for w in range(g.n):
    for x in np.flatnonzero(kl.P[w, :, 0]):
        if len(kl.classical(x, w)) > 1:
            print(f"  P({g.format_word(x)}, {g.format_word(w)}) = {kl.classical(x, w)}")

# larger coefficients appear quickly
f4 = build_kl_table(build_group("F4"))
print("F4 largest coefficient:", int(f4.P.max()))
print("invariants:", f4.check_invariants())
