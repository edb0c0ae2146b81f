"""
The asymptotic ring J on one two-sided cell.

The multiplicity of t_z in t_x t_y is the coefficient of v^a in h_{x,y,z},
a being the a-value of the cell.  Building the table runs three guards (unit,
associativity, tau pairing) and fails loudly when any of them breaks, since
every downstream dimension depends on this convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from .cells import CellPartition
from .kl import KLTable
from .leftcell import LeftCellModule

__all__ = [
    "JRingTable", "JElement", "JRingConventionError",
    "build_jring", "j_mul", "tau", "EXHAUSTIVE_ASSOC_LIMIT",
]

EXHAUSTIVE_ASSOC_LIMIT = 200
RANDOM_ASSOC_TRIPLES = 10_000


class JRingConventionError(RuntimeError):
    pass


@dataclass(frozen=True)
class JElement:
    terms: dict[int, int] = field(default_factory=dict)

    @classmethod
    def t(cls, z: int, c: int = 1) -> JElement:
        return cls({int(z): c})

    def __add__(self, other: JElement) -> JElement:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return JElement({k: c for k, c in out.items() if c})

    def __eq__(self, other):
        return isinstance(other, JElement) and \
            {k: c for k, c in self.terms.items() if c} == {k: c for k, c in other.terms.items() if c}


@dataclass(eq=False)
class JRingTable:
    cell: int
    elements: np.ndarray                # ascending global indices
    a: int
    distinguished: np.ndarray
    inverse: np.ndarray                 # global inverse table
    triples: np.ndarray                 # rows (x, y, z, c), global indices
    guards: dict[str, bool] = field(default_factory=dict)
    _prod: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        prod: dict[tuple[int, int], dict[int, int]] = {}
        for x, y, z, c in self.triples.tolist():
            prod.setdefault((x, y), {})[z] = c
        self._prod = prod
        self._local = {int(w): i for i, w in enumerate(self.elements.tolist())}

    @property
    def size(self) -> int:
        return len(self.elements)

    def local(self, w: int) -> int:
        return self._local[int(w)]

    def __contains__(self, w) -> bool:
        return int(w) in self._local

    def jc(self, x: int, y: int, z: int) -> int:
        return self._prod.get((int(x), int(y)), {}).get(int(z), 0)

    def product(self, x: int, y: int) -> dict[int, int]:
        """t_x t_y as {z: multiplicity}."""
        return dict(self._prod.get((int(x), int(y)), {}))

    def unit(self) -> JElement:
        return JElement({int(d): 1 for d in self.distinguished})

    def local_triples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        loc = np.full(int(self.inverse.shape[0]), -1, dtype=np.int64)
        loc[self.elements] = np.arange(self.size)
        t = self.triples
        return loc[t[:, 0]], loc[t[:, 1]], loc[t[:, 2]], t[:, 3]

    def check_guards(self, seed: int = 0) -> dict[str, bool]:
        m = self.size
        xs, ys, zs, cs = self.local_triples()
        out = {"nonnegative": bool(np.all(cs >= 0))}
        dmask = np.zeros(m, dtype=bool)
        dmask[[self.local(d) for d in self.distinguished]] = True
        ident = np.eye(m, dtype=np.int64)
        sel = dmask[xs]
        left = coo_matrix((cs[sel], (ys[sel], zs[sel])), shape=(m, m)).toarray()
        sel = dmask[ys]
        right = coo_matrix((cs[sel], (xs[sel], zs[sel])), shape=(m, m)).toarray()
        out["unit_two_sided"] = bool(np.array_equal(left, ident) and np.array_equal(right, ident))
        sel = dmask[zs]
        pair = coo_matrix((cs[sel], (xs[sel], ys[sel])), shape=(m, m)).toarray()
        inv_local = np.array([self.local(self.inverse[w]) for w in self.elements], dtype=np.int64)
        expect = np.zeros((m, m), dtype=np.int64)
        expect[np.arange(m), inv_local] = 1
        out["tau_pairing"] = bool(np.array_equal(pair, expect))
        if m <= EXHAUSTIVE_ASSOC_LIMIT:
            out["associative_exhaustive"] = _assoc_exhaustive(m, xs, ys, zs, cs)
        else:
            out["associative_sampled"] = self._assoc_sampled(RANDOM_ASSOC_TRIPLES, seed)
        return out

    def _assoc_sampled(self, count: int, seed: int) -> bool:
        rng = np.random.default_rng(seed)
        el = self.elements
        for x, y, z in rng.integers(0, self.size, size=(count, 3)):
            a = JElement.t(el[x])
            b = JElement.t(el[y])
            c = JElement.t(el[z])
            if j_mul(self, j_mul(self, a, b), c) != j_mul(self, a, j_mul(self, b, c)):
                return False
        return True


def _assoc_exhaustive(m, xs, ys, zs, cs) -> bool:
    """(t_x t_y) t_z == t_x (t_y t_z) for every triple, via sparse products."""
    sq = m * m
    p1 = csr_matrix((cs, (xs * m + ys, zs)), shape=(sq, m))     # (xy) -> w
    q1 = csr_matrix((cs, (xs, ys * m + zs)), shape=(m, sq))     # w -> (z u)
    lhs = (p1 @ q1).tocoo()
    s1 = csr_matrix((cs, (ys, xs * m + zs)), shape=(m, sq))     # w -> (x u) from A[x,w,u]
    rhs = (p1 @ s1).tocoo()                                     # (y z) -> (x u)

    def keyed(rows, cols, vals, swap):
        if swap:
            y, z = rows // m, rows % m
            x, u = cols // m, cols % m
        else:
            x, y = rows // m, rows % m
            z, u = cols // m, cols % m
        key = ((x * m + y) * m + z) * m + u
        keep = vals != 0
        key, vals = key[keep], vals[keep]
        order = np.argsort(key)
        return key[order], vals[order]

    k1, v1 = keyed(lhs.row.astype(np.int64), lhs.col.astype(np.int64), lhs.data, False)
    k2, v2 = keyed(rhs.row.astype(np.int64), rhs.col.astype(np.int64), rhs.data, True)
    return bool(np.array_equal(k1, k2) and np.array_equal(v1, v2))


def _triples_from_modules(kl: KLTable, part: CellPartition, cell: int) -> np.ndarray:
    members = part.two_sided_cell(cell)
    a = part.cell_a(cell)
    rows = []
    for lc in part.left_cells_in(cell):
        lead = part.leading.get(lc)
        if lead is None:
            cells = part.left_cell(lc)
            mod = LeftCellModule.build(kl, cells, int(part.delta[cells].min()), keep=members)
            dense = mod.leading(members, a)
            i, z, y = np.nonzero(dense)
            lead = np.stack([members[i], mod.cell[y], mod.cell[z], dense[i, z, y]], axis=1)
        rows.append(lead)
    t = np.concatenate(rows, axis=0) if rows else np.zeros((0, 4), dtype=np.int64)
    order = np.lexsort((t[:, 2], t[:, 1], t[:, 0]))
    return t[order]


def build_jring(kl: KLTable, part: CellPartition, cell: int, check: bool = True,
                seed: int = 0) -> JRingTable:
    """Structure constants of J on one two-sided cell, with guards."""
    members = part.two_sided_cell(cell)
    triples = _triples_from_modules(kl, part, cell)
    inside = np.isin(triples[:, :3], members).all(axis=1) if len(triples) else np.ones(0, bool)
    if not np.all(inside):
        raise JRingConventionError("structure constant outside the cell")
    table = JRingTable(cell, members, part.cell_a(cell), part.distinguished_in(cell),
                       kl.group.inverse, triples)
    table.guards = table.check_guards(seed)
    if check:
        failures = [k for k, ok in table.guards.items() if not ok]
        if failures:
            names = {"unit_two_sided": "unit check failed",
                     "associative_exhaustive": "associativity check failed",
                     "associative_sampled": "associativity check failed",
                     "tau_pairing": "tau pairing check failed",
                     "nonnegative": "negative structure constant"}
            raise JRingConventionError("; ".join(names[f] for f in failures))
    return table


def j_mul(table: JRingTable, a: JElement, b: JElement) -> JElement:
    out: dict[int, int] = {}
    for x, cx in a.terms.items():
        if not cx:
            continue
        for y, cy in b.terms.items():
            if not cy:
                continue
            for z, c in table._prod.get((x, y), {}).items():
                out[z] = out.get(z, 0) + cx * cy * c
    return JElement({z: c for z, c in out.items() if c})


def tau(table: JRingTable, a: JElement) -> int:
    d = set(int(x) for x in table.distinguished)
    return sum(c for z, c in a.terms.items() if z in d)
