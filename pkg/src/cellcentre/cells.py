"""
Left, right and two-sided cells, the a-function and distinguished involutions.

The left preorder is generated by edges y -> z whenever c_z occurs in some
c_x c_y.  For small groups every product is used; above ``FULL_PRODUCT_LIMIT``
only generator products, read off the W-graph.  Cell ids are assigned in
order of the smallest element index each cell contains.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .hecke import HeckeKernel, all_structure_constants
from .kl import KLTable
from .leftcell import LeftCellModule

__all__ = [
    "CellPartition", "DistinguishedInvolutionError", "cell_partition",
    "a_value", "delta_data", "distinguished_involutions",
    "generator_edges", "product_edges", "FULL_PRODUCT_LIMIT",
]

log = logging.getLogger(__name__)

FULL_PRODUCT_LIMIT = 48


class DistinguishedInvolutionError(RuntimeError):
    def __init__(self, detail: str = ""):
        msg = "distinguished-involution invariant violated"
        super().__init__(f"{msg}: {detail}" if detail else msg)


@dataclass(eq=False)
class CellPartition:
    group: object
    left: np.ndarray
    right: np.ndarray
    two_sided: np.ndarray
    order: np.ndarray           # order[i, j]: two-sided cell i <= cell j
    a: np.ndarray
    delta: np.ndarray
    delta_coeff: np.ndarray
    distinguished: np.ndarray   # bool per element
    a_method: str = "products"
    # left cell id -> int64 rows (x, y, z, c): c = coeff of v^a in h_{x,y,z}
    # for x in the two-sided cell and y, z in the left cell; zeros omitted
    leading: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def members(self, labels: np.ndarray, cid: int) -> np.ndarray:
        return np.flatnonzero(labels == cid)

    @property
    def n_two_sided(self) -> int:
        return int(self.two_sided.max()) + 1

    @property
    def n_left(self) -> int:
        return int(self.left.max()) + 1

    def two_sided_cell(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.two_sided == cid)

    def left_cell(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.left == cid)

    def left_cells_in(self, cid: int) -> list[int]:
        return sorted(set(self.left[self.two_sided == cid].tolist()))

    def cell_a(self, cid: int) -> int:
        return int(self.a[self.two_sided == cid][0])

    def distinguished_in(self, cid: int) -> np.ndarray:
        return np.flatnonzero((self.two_sided == cid) & self.distinguished)

    def check_invariants(self) -> dict[str, bool]:
        g = self.group
        inv = g.inverse
        out = {}
        out["left_refines_two_sided"] = all(
            len(set(self.two_sided[self.left == c].tolist())) == 1 for c in range(self.n_left))
        out["right_refines_two_sided"] = all(
            len(set(self.two_sided[self.right == c].tolist())) == 1
            for c in range(int(self.right.max()) + 1))
        out["a_constant_on_two_sided"] = all(
            len(set(self.a[self.two_sided == c].tolist())) == 1 for c in range(self.n_two_sided))
        out["a_inverse_invariant"] = bool(np.array_equal(self.a, self.a[inv]))
        out["inverse_same_two_sided"] = bool(np.array_equal(self.two_sided, self.two_sided[inv]))
        out["one_distinguished_per_left_cell"] = bool(np.all(
            np.bincount(self.left[self.distinguished], minlength=self.n_left) == 1))
        out["distinguished_are_involutions"] = bool(
            np.all(inv[self.distinguished] == np.flatnonzero(self.distinguished)))
        o = self.order
        k = o.shape[0]
        out["order_reflexive"] = bool(np.all(np.diag(o)))
        out["order_antisymmetric"] = bool(not np.any(o & o.T & ~np.eye(k, dtype=bool)))
        oi = o.astype(np.int64)
        out["order_transitive"] = bool(np.all(((oi @ oi) > 0) <= o))
        return out


def generator_edges(kl: KLTable) -> tuple[np.ndarray, np.ndarray]:
    """Edges y -> z (z <=_L y) from c_s c_y for generators s."""
    g = kl.group
    length = g.length
    src, dst = [], []
    for s in range(g.rank):
        desc = length[g.lmul[s]] < length
        for y in range(g.n):
            if desc[y]:
                continue
            src.append(y)
            dst.append(int(g.lmul[s, y]))
            zs, _ = kl.mu_row(y)
            for z in zs[desc[zs]].tolist():
                src.append(y)
                dst.append(z)
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)


def product_edges(hprod: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edges y -> z whenever h_{x,y,z} != 0 for some x; hprod[x, y, z, :]."""
    nz = hprod.any(axis=3).any(axis=0)          # (y, z)
    y, z = np.nonzero(nz)
    return y.astype(np.int64), z.astype(np.int64)


def _scc_labels(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)).tocsr()
    _, lab = connected_components(graph, directed=True, connection="strong")
    return _canonical_labels(lab)


def _canonical_labels(lab: np.ndarray) -> np.ndarray:
    first: dict[int, int] = {}
    for i, c in enumerate(lab.tolist()):
        first.setdefault(c, len(first))
    return np.asarray([first[c] for c in lab.tolist()], dtype=np.int64)


def _cell_order(labels: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    k = int(labels.max()) + 1
    succ = [set() for _ in range(k)]
    for a, b in zip(labels[src].tolist(), labels[dst].tolist()):
        if a != b:
            succ[a].add(b)
    order = np.zeros((k, k), dtype=bool)
    for j in range(k):
        seen = {j}
        stack = [j]
        while stack:
            c = stack.pop()
            for d in succ[c]:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        order[list(seen), j] = True
    return order


def delta_data(kl: KLTable, z: int) -> tuple[int, int]:
    """(Delta(z), leading coefficient) from the top term of p(e, z)."""
    return kl.delta(z)


def _module_bound(delta: np.ndarray, cell: np.ndarray) -> int:
    return int(delta[cell].min())


def cell_partition(kl: KLTable, hprod: np.ndarray | None = None,
                   threads: int = 1) -> CellPartition:
    """Cells, a-values, Delta and distinguished involutions of the group.

    ``hprod`` (all structure constants) is computed automatically for groups
    of at most FULL_PRODUCT_LIMIT elements; it drives the exhaustive preorder
    and the a-function there.  For larger groups the a-function is the top
    degree seen on each left cell module.
    """
    g = kl.group
    n = g.n
    inv = g.inverse
    if hprod is None and n <= FULL_PRODUCT_LIMIT:
        hprod = all_structure_constants(kl)
    if hprod is not None:
        src, dst = product_edges(hprod)
    else:
        src, dst = generator_edges(kl)
    left = _scc_labels(n, src, dst)
    right = _canonical_labels(left[inv])
    src2 = np.concatenate([src, inv[src]])
    dst2 = np.concatenate([dst, inv[dst]])
    two = _scc_labels(n, src2, dst2)
    order = _cell_order(two, src2, dst2)

    dl = np.empty(n, dtype=np.int64)
    dc = np.empty(n, dtype=np.int64)
    for z in range(n):
        dl[z], dc[z] = kl.delta(z)

    n_left = int(left.max()) + 1
    cells = [np.flatnonzero(left == c) for c in range(n_left)]

    def run(c: int):
        cell = cells[c]
        members = np.flatnonzero(two == two[cell[0]])
        mod = LeftCellModule.build(kl, cell, _module_bound(dl, cell), keep=members)
        top = mod.top_degree
        dense = mod.leading(members, int(top.max()))
        i, z, y = np.nonzero(dense)
        lead = np.stack([members[i], mod.cell[y], mod.cell[z], dense[i, z, y]], axis=1)
        return top, lead

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(n_left)))
    else:
        results = [run(c) for c in range(n_left)]

    module_a = np.empty(n, dtype=np.int64)
    leading = {}
    for c, (top, lead) in enumerate(results):
        module_a[cells[c]] = top
        leading[c] = lead

    if hprod is not None:
        k = HeckeKernel(kl)
        present = hprod.any(axis=(0, 1))             # (z, width)
        a = np.array([int(np.flatnonzero(present[z]).max()) + k.lo for z in range(n)],
                     dtype=np.int64)
        method = "products"
        if not np.array_equal(a, module_a):
            raise RuntimeError("a-function: product route and left cell module route disagree")
    else:
        a = module_a
        method = "left-cell module"

    part = CellPartition(g, left, right, two, order, a, dl, dc,
                         a == dl, method, leading)
    distinguished_involutions(part)
    log.debug("%s: %d left cells, %d two-sided cells", g.matrix.type_tag,
              n_left, part.n_two_sided)
    return part


def a_value(kl: KLTable, part: CellPartition, z: int) -> int:
    return int(part.a[z])


def distinguished_involutions(part: CellPartition) -> set[int]:
    """{z : a(z) = Delta(z)}, checked to be one involution per left cell."""
    d = np.flatnonzero(part.distinguished)
    inv = part.group.inverse
    bad = [int(z) for z in d if inv[z] != z]
    if bad:
        raise DistinguishedInvolutionError(f"non-involution {part.group.format_word(bad[0])}")
    counts = np.bincount(part.left[d], minlength=part.n_left)
    if np.any(counts != 1):
        c = int(np.flatnonzero(counts != 1)[0])
        raise DistinguishedInvolutionError(f"left cell {c} has {int(counts[c])}")
    a_by_cell = {}
    for cid, av in zip(part.two_sided.tolist(), part.a.tolist()):
        if a_by_cell.setdefault(cid, av) != av:
            raise RuntimeError("a-function not constant on a two-sided cell")
    return set(d.tolist())
