"""
Slow, independent reference computations used by the tests.

Nothing here touches the KL recursion, the numpy Hecke kernel or the left cell
modules.  The group is realised concretely (permutations, signed permutations)
where possible, the c-basis is rebuilt from its defining properties in the
T-basis with exact Laurent polynomials, and cell data and centre dimensions are
recomputed by literal sums over dictionaries.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache

import numpy as np

from cellcentre.coxeter import GroupTable, build_group
from cellcentre.hecke import HeckeElement, t_mul
from cellcentre.laurent import LaurentPoly, V

ONE = LaurentPoly(1)
VINV = V ** -1


# concrete groups

def perm_generators(n: int) -> list[tuple[int, ...]]:
    """Adjacent transpositions of S_n, acting on positions 0..n-1."""
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(tuple(p))
    return gens


def signed_perm_generators(n: int) -> list[tuple[int, ...]]:
    """B_n as signed permutations of 1..n: s_1..s_{n-1} swap, s_n negates the last."""
    gens = []
    for i in range(n - 1):
        p = list(range(1, n + 1))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(tuple(p))
    p = list(range(1, n + 1))
    p[n - 1] = -p[n - 1]
    gens.append(tuple(p))
    return gens


def compose(p, q):
    """(p*q)(i) = p(q(i)) for permutations of 0..n-1."""
    return tuple(p[i] for i in q)


def compose_signed(p, q):
    out = []
    for i in q:
        v = p[abs(i) - 1]
        out.append(v if i > 0 else -v)
    return tuple(out)


def bfs_lengths(gens, mul, identity) -> dict:
    """Word length of every element of the group generated by ``gens``."""
    seen = {identity: 0}
    queue = deque([identity])
    while queue:
        w = queue.popleft()
        for s in gens:
            x = mul(s, w)
            if x not in seen:
                seen[x] = seen[w] + 1
                queue.append(x)
    return seen


def realise(g: GroupTable, gens, mul, identity) -> list:
    """Concrete image of each element of the table, read along its word."""
    out = []
    for w in range(g.n):
        x = identity
        for s in reversed(g.words[w]):
            x = mul(gens[s], x)
        out.append(x)
    return out


def inversions(p) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


def bruhat_tableau(x, w) -> bool:
    """Bruhat order in S_n by rank matrices: x <= w iff r_x <= r_w entrywise,
    r[i, j] = #{a <= i : p(a) >= j}."""
    n = len(x)

    def ranks(p):
        r = np.zeros((n, n), dtype=int)
        for i in range(n):
            for j in range(n):
                r[i, j] = sum(1 for a in range(i + 1) if p[a] >= j)
        return r
    return bool(np.all(ranks(x) <= ranks(w)))


# the c-basis from first principles

class OracleHecke:
    """c-basis, structure constants and cells of a small group, all in dicts.

    c_w is built as c_s c_{sw} minus the lower terms needed to restore
    p(x, w) in v^-1 Z[v^-1]; that is the defining property together with bar
    invariance, which is checked separately.
    """

    def __init__(self, g: GroupTable):
        self.g = g
        self.c: list[dict[int, LaurentPoly]] = [None] * g.n
        self.c[0] = {0: ONE}
        for w in range(1, g.n):
            s = g.words[w][0]
            prev = int(g.lmul[s, w])
            cs = {int(g.lmul[s, 0]): ONE, 0: VINV}
            cur = t_mul(g, HeckeElement(cs), HeckeElement(dict(self.c[prev]))).terms
            cur = dict(cur)
            # strip lower c_z whose coefficient has a constant term; the v^0
            # coefficient at T_z is mu and the correction is mu * c_z
            for z in sorted(cur, key=lambda x: (-g.length[x], -x)):
                if z == w or z not in cur:
                    continue
                m = cur[z].coeff(0)
                if m:
                    for x, p in self.c[z].items():
                        q = cur.get(x, LaurentPoly()) - p * m
                        if q:
                            cur[x] = q
                        else:
                            cur.pop(x, None)
            self.c[w] = cur

    def p(self, x: int, w: int) -> LaurentPoly:
        return self.c[w].get(x, LaurentPoly())

    def bar_T(self, w: int) -> dict[int, LaurentPoly]:
        """bar(T_w) = T_{s1}^-1 ... T_{sk}^-1, with T_s^-1 = T_s - (v - v^-1)."""
        g = self.g
        acc = HeckeElement({0: ONE})
        for s in g.words[w]:
            inv_s = HeckeElement({int(g.lmul[s, 0]): ONE, 0: VINV - V})
            acc = t_mul(g, acc, inv_s)
        return acc.terms

    def is_bar_invariant(self, w: int) -> bool:
        out: dict[int, LaurentPoly] = {}
        for x, p in self.c[w].items():
            for y, q in self.bar_T(x).items():
                out[y] = out.get(y, LaurentPoly()) + p.bar() * q
        out = {k: v for k, v in out.items() if v}
        return out == {k: v for k, v in self.c[w].items() if v}

    def to_c(self, t: dict[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        g = self.g
        rest = {k: v for k, v in t.items() if v}
        out = {}
        while rest:
            z = max(rest, key=lambda x: (g.length[x], x))
            f = rest[z]
            out[z] = f
            for x, p in self.c[z].items():
                q = rest.get(x, LaurentPoly()) - f * p
                if q:
                    rest[x] = q
                else:
                    rest.pop(x, None)
        return out

    @lru_cache(maxsize=None)
    def products(self) -> dict[tuple[int, int], dict[int, LaurentPoly]]:
        """c_x c_y in the c-basis for every pair."""
        g = self.g
        out = {}
        for y in range(g.n):
            ta = [None] * g.n              # T_a c_y
            ta[0] = dict(self.c[y])
            for a in range(1, g.n):
                s = g.words[a][0]
                ts = HeckeElement({int(g.lmul[s, 0]): ONE})
                ta[a] = t_mul(g, ts, HeckeElement(dict(ta[int(g.lmul[s, a])]))).terms
            for x in range(g.n):
                acc: dict[int, LaurentPoly] = {}
                for a, p in self.c[x].items():
                    for z, q in ta[a].items():
                        acc[z] = acc.get(z, LaurentPoly()) + p * q
                out[(x, y)] = self.to_c(acc)
        return out

    def h(self, x, y, z) -> LaurentPoly:
        return self.products()[(x, y)].get(z, LaurentPoly())

    def left_cells(self) -> set[frozenset[int]]:
        """Mutual reachability under y -> z whenever c_z occurs in some c_x c_y."""
        n = self.g.n
        reach = np.eye(n, dtype=bool)
        for (x, y), prod in self.products().items():
            for z in prod:
                reach[y, z] = True
        for k in range(n):                      # Warshall closure
            reach |= reach[:, [k]] & reach[[k], :]
        both = reach & reach.T
        return {frozenset(np.flatnonzero(both[i]).tolist()) for i in range(n)}

    def two_sided_cells(self) -> set[frozenset[int]]:
        n = self.g.n
        inv = self.g.inverse
        reach = np.eye(n, dtype=bool)
        for (x, y), prod in self.products().items():
            for z in prod:
                reach[y, z] = True
                reach[inv[y], inv[z]] = True
        for k in range(n):
            reach |= reach[:, [k]] & reach[[k], :]
        both = reach & reach.T
        return {frozenset(np.flatnonzero(both[i]).tolist()) for i in range(n)}

    def a_value(self, z: int) -> int:
        return max(p.degree() for prod in self.products().values()
                   for w, p in prod.items() if w == z)

    def jc(self, cell: frozenset[int]) -> tuple[int, dict[tuple[int, int, int], int]]:
        """(a, {(x, y, z): coeff of v^a in h_{x,y,z}}) on one two-sided cell."""
        a = max(self.a_value(z) for z in cell)
        out = {}
        for x in cell:
            for y in cell:
                for z, p in self.products()[(x, y)].items():
                    if z in cell and p.coeff(a):
                        out[(x, y, z)] = p.coeff(a)
        return a, out

    def distinguished(self, cell) -> set[int]:
        """d with a(d) = Delta(d), Delta read off p(e, d) directly."""
        a = max(self.a_value(z) for z in cell)
        out = set()
        for d in cell:
            p = self.p(0, d)
            delta = -p.degree()        # p(e, d) = n_d v^{-Delta} + lower
            if delta == a:
                out.add(d)
        return out


def literal_centre(oh: OracleHecke, cell, eps_perm) -> tuple[dict, dict]:
    """dim_hom and psi by nested loops over the J structure constants.

    Returns ({(z, u): dim}, {(x, z): psi}) over the cell.
    """
    g = oh.g
    inv = g.inverse
    a, jc = oh.jc(frozenset(cell))
    dset = oh.distinguished(cell)
    table: dict[tuple[int, int], dict[int, int]] = {}
    for (x, y, z), c in jc.items():
        table.setdefault((x, y), {})[z] = c

    def mul(f: dict[int, int], h: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for x, cx in f.items():
            for y, cy in h.items():
                for z, c in table.get((x, y), {}).items():
                    out[z] = out.get(z, 0) + cx * cy * c
        return out

    def tau(f):
        return sum(c for z, c in f.items() if z in dset)

    cells = sorted(cell)
    dim = {}
    for z in cells:
        for u in cells:
            total = 0
            for y in cells:
                f = mul(mul(mul({int(inv[y]): 1}, {z: 1}), {int(eps_perm[y]): 1}), {int(inv[u]): 1})
                total += tau(f)
            dim[(z, u)] = total
    psi = {}
    for x in cells:
        acc: dict[int, int] = {}
        for y in cells:
            f = mul(mul({y: 1}, {x: 1}), {int(inv[eps_perm[y]]): 1})
            for z, c in f.items():
                acc[z] = acc.get(z, 0) + c
        for z in cells:
            psi[(x, z)] = acc.get(z, 0)
    return dim, psi


@lru_cache(maxsize=None)
def oracle_for(type_name: str) -> OracleHecke:
    return OracleHecke(build_group(type_name))
