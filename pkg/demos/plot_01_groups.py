"""
Finite Coxeter groups as lookup tables
======================================

Enumerate a few groups, inspect lengths and words, and check the Bruhat
order on a small example.
"""

import numpy as np

from cellcentre import build_group

# A group is a table: element indices sorted by (length, ShortLex word),
# with left and right multiplication by each generator precomputed.
g = build_group("B3")
print(g.matrix.type_tag, "order", g.n, "longest word", g.format_word(g.w_max))

# Poincare polynomial coefficients: how many elements of each length
print("elements per length:", np.bincount(g.length).tolist())

# words parse back to indices and multiply through the tables
x = g.element("s1 s2")
y = g.element("s3 s2")
print(g.format_word(x), "*", g.format_word(y), "=", g.format_word(g.mul(x, y)))

# Bruhat order by the subword property
a2 = build_group("A2")
B = a2.bruhat_matrix()
for w in range(a2.n):
    below = [a2.format_word(x) for x in np.flatnonzero(B[w])]
    print(f"{a2.format_word(w):>10} >= {below}")

# the table checks its own relations
print({k: v for k, v in build_group("H3").validate().items()})
