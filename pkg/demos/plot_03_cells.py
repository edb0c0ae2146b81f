"""
Cells and the a-function
========================

Partition a group into left and two-sided cells, then read off the
a-function and the distinguished involutions.
"""

from cellcentre import build_group, build_kl_table, cell_partition

g = build_group("B3")
part = cell_partition(build_kl_table(g))
print(f"{part.n_left} left cells, {part.n_two_sided} two-sided cells")

for c in range(part.n_two_sided):
    members = part.two_sided_cell(c)
    d = [g.format_word(z) for z in part.distinguished_in(c)]
    print(f"cell {c}: size {len(members):2d}  a = {part.cell_a(c)}  distinguished {d}")

# order[i, j] is True when cell i lies below cell j
print(part.order.astype(int))
print(part.check_invariants())
