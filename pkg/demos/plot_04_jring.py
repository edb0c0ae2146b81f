"""
The asymptotic ring J
=====================

Structure constants of J on one two-sided cell.  For the middle cell of A2
the ring is 2x2 matrices, with t_s1, t_s2 the diagonal units.
"""

from cellcentre import JElement, build_group, build_jring, build_kl_table, cell_partition, j_mul

g = build_group("A2")
kl = build_kl_table(g)
part = cell_partition(kl)
mid = int(part.two_sided[g.element("s1")])
j = build_jring(kl, part, mid)

w = g.format_word
for x in j.elements:
    row = []
    for y in j.elements:
        prod = j.product(x, y)
        row.append(" + ".join(f"t[{w(z)}]" for z in prod) or "0")
    print(f"t[{w(x)}] * ...: {row}")

# the unit is the sum over distinguished involutions
one = j.unit()
t = JElement.t(g.element("s1 s2"))
print("unit * t = t:", j_mul(j, one, t) == t)
print("guards:", j.guards)
