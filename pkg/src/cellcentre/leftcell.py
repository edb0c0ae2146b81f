"""
The Hecke algebra acting on a left cell module.

For a left cell G, the quotient of span{c_w : w <=_L G} by span{c_w : w <_L G}
has basis {c_w : w in G}.  A generator acts through the W-graph:

    c_s c_w = (v + v^-1) c_w                              if sw < w
    c_s c_w = c_sw + sum_{z < w, sz < z} mu(z, w) c_z     if sw > w

with every term outside G dropped.  The matrix of c_x on the module is built
by the recursion c_x = c_s c_{sx} - sum_{z < sx, sz < z} mu(z, sx) c_z, so its
(z, y) entry is h_{x,y,z} for y, z in G.  Entries are kept on a symmetric
v-window [-bound, bound] with one guard column per side; a term landing in a
guard column means the bound was wrong and is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from .kl import KLTable

__all__ = ["LeftCellModule", "WindowExceeded"]


class WindowExceeded(ArithmeticError):
    """A structure constant has degree above the declared a-function bound."""


@dataclass(eq=False)
class LeftCellModule:
    cell: np.ndarray            # element indices of G, ascending
    bound: int
    top_degree: np.ndarray      # per z in G: max degree over x in W, y in G of h_{x,y,z}
    action: dict[int, np.ndarray]   # x -> (|G|, |G|, 2*bound+3); zero actions omitted

    @property
    def offset(self) -> int:
        return self.bound + 1

    def h_array(self, x: int) -> np.ndarray | None:
        return self.action.get(x)

    def leading(self, xs, degree: int) -> np.ndarray:
        """Coefficient of v^degree: out[i, z, y] for x = xs[i]."""
        g = len(self.cell)
        out = np.zeros((len(xs), g, g), dtype=np.int64)
        k = self.offset + degree
        for i, x in enumerate(xs):
            m = self.action.get(int(x))
            if m is not None:
                out[i] = m[:, :, k]
        return out

    @classmethod
    def build(cls, kl: KLTable, cell, bound: int, keep=None) -> LeftCellModule:
        """Act on the module of ``cell`` by every element of W.

        ``keep`` limits which action matrices are retained afterwards (all
        are needed transiently by the recursion).
        """
        g = kl.group
        n = g.n
        cell = np.asarray(sorted(int(c) for c in cell), dtype=np.int64)
        size = len(cell)
        loc = np.full(n, -1, dtype=np.int64)
        loc[cell] = np.arange(size)
        length = g.length
        desc = [length[g.lmul[s]] < length for s in range(g.rank)]
        width = 2 * bound + 3

        gens = []
        for s in range(g.rank):
            rows, cols, vals = [], [], []
            dmask = np.zeros(size, dtype=bool)
            for j, w in enumerate(cell.tolist()):
                sw = int(g.lmul[s, w])
                if desc[s][w]:
                    dmask[j] = True
                    continue
                if loc[sw] >= 0:
                    rows.append(loc[sw]); cols.append(j); vals.append(1)
                zs, ms = kl.mu_row(w)
                for z, m in zip(zs.tolist(), ms.tolist()):
                    if desc[s][z] and loc[z] >= 0:
                        rows.append(loc[z]); cols.append(j); vals.append(m)
            mat = csr_matrix((np.asarray(vals, dtype=np.int64), (rows, cols)),
                             shape=(size, size), dtype=np.int64)
            gens.append((mat, np.flatnonzero(dmask)))

        def apply_gen(s: int, m: np.ndarray) -> np.ndarray:
            mat, d = gens[s]
            out = (mat @ m.reshape(size, -1)).reshape(m.shape)
            if d.size:
                part = m[d]
                out[d, :, 1:] += part[:, :, :-1]
                out[d, :, :-1] += part[:, :, 1:]
            return out

        action: dict[int, np.ndarray] = {}
        ident = np.zeros((size, size, width), dtype=np.int64)
        ident[np.arange(size), np.arange(size), bound + 1] = 1
        action[0] = ident
        top = np.full(size, -10 ** 9, dtype=np.int64)
        top = np.maximum(top, _row_top(ident, bound))
        for x in range(1, n):
            s = g.words[x][0]
            prev = int(g.lmul[s, x])
            m_prev = action.get(prev)
            m = apply_gen(s, m_prev) if m_prev is not None else None
            zs, ms = kl.mu_row(prev)
            for z, mu in zip(zs.tolist(), ms.tolist()):
                if not desc[s][z]:
                    continue
                mz = action.get(z)
                if mz is None:
                    continue
                if m is None:
                    m = np.zeros_like(ident)
                m -= mu * mz
            if m is None or not m.any():
                continue
            if m[:, :, 0].any() or m[:, :, -1].any():
                raise WindowExceeded(
                    f"h-degree above bound {bound} for x={g.format_word(x)}")
            if np.abs(m).max() >= 2 ** 40:
                from .laurent import CoefficientOverflow
                raise CoefficientOverflow()
            action[x] = m
            top = np.maximum(top, _row_top(m, bound))
        if keep is not None:
            keep = set(int(k) for k in keep)
            action = {x: m for x, m in action.items() if x in keep}
        return cls(cell, bound, top, action)


def _row_top(m: np.ndarray, bound: int) -> np.ndarray:
    """Highest v-degree present in each row z (over all columns y)."""
    present = m.any(axis=1)                       # (z, width)
    width = present.shape[1]
    rev = present[:, ::-1]
    last = width - 1 - rev.argmax(axis=1)
    deg = last - (bound + 1)
    deg[~present.any(axis=1)] = -10 ** 9
    return deg
