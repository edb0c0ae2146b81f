"""
Hom dimensions in the twisted centre
====================================

For a cell stable under an ordinary automorphism eps, compute the Hom
dimensions between induced objects and the multiplicities psi, and compare
the two.
"""

import numpy as np

from cellcentre import (build_group, build_jring, build_kl_table, cell_partition, centre_report,
                        ordinary_automorphisms)

for name in ["A2", "A3", "D4"]:
    g = build_group(name)
    kl = build_kl_table(g)
    part = cell_partition(kl)
    for eps in ordinary_automorphisms(g):
        for c in range(part.n_two_sided):
            members = part.two_sided_cell(c)
            if not np.array_equal(np.sort(eps.perm[members]), members):
                continue        # this cell is moved by eps
            r = centre_report(part, build_jring(kl, part, c), eps)
            if len(members) > 1:
                print(f"{name} eps={eps.name:<12} cell {c} |cell|={len(members):2d} "
                      f"|boc0|={int(r.boc0.sum()):2d} total_dim={r.total_dim:3d} ok={r.ok}")

# the A2 example in full
g = build_group("A2")
kl = build_kl_table(g)
part = cell_partition(kl)
mid = int(part.two_sided[g.element("s1")])
for eps in ordinary_automorphisms(g):
    print(centre_report(part, build_jring(kl, part, mid), eps).to_text())
