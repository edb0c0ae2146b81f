"""
Kazhdan-Lusztig polynomials of a finite Coxeter group (equal parameters).

Internally the classical polynomials P_{x,w}(q) are held densely: row ``w`` of
``P`` is an ``(n, depth)`` array whose ``[x, k]`` entry is the coefficient of
q^k.  A row is zero at x exactly when x is not below w in the Bruhat order.
The normalized polynomial used for the c-basis is

    p(x, w) = v^(|x| - |w|) * P_{x,w}(v^2)

so c_w = sum_x p(x, w) T_x with p(w, w) = 1 and p(x, w) in v^-1 Z[v^-1].
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coxeter import GroupTable
from .laurent import CoefficientOverflow, LaurentPoly, check_int64

__all__ = ["KLTable", "build_kl_table", "NORMALIZATION", "TableTooLargeError", "MEMORY_LIMIT"]

log = logging.getLogger(__name__)

# bump when the stored normalization or layout changes
NORMALIZATION = "p=v^(|x|-|w|)P(v^2);v1"

# refuse dense tables above this many bytes instead of failing mid-build
MEMORY_LIMIT = 6 * 2 ** 30


class TableTooLargeError(MemoryError):
    pass


@dataclass(eq=False)
class KLTable:
    group: GroupTable
    P: np.ndarray                      # (n, n, depth): P[w, x, k]
    mu_z: list[np.ndarray] = field(repr=False)    # per w: z < w with mu(z, w) != 0
    mu_val: list[np.ndarray] = field(repr=False)
    version: str = NORMALIZATION

    @property
    def n(self) -> int:
        return self.group.n

    def classical(self, x: int, w: int) -> list[int]:
        """Coefficients of P_{x,w}(q), constant term first, trailing zeros cut."""
        row = self.P[w, x]
        nz = np.flatnonzero(row)
        return [int(c) for c in row[: nz[-1] + 1]] if nz.size else []

    def p(self, x: int, w: int) -> LaurentPoly:
        g = self.group
        shift = int(g.length[x] - g.length[w])
        return LaurentPoly({shift + 2 * k: int(c) for k, c in enumerate(self.P[w, x]) if c})

    def mu(self, x: int, w: int) -> int:
        """Coefficient of v^-1 in p(x, w), read symmetrically in (x, w).

        The W-graph needs mu for both orders of a comparable pair; for x > w
        this returns mu(w, x).  Incomparable or equal pairs give 0.
        """
        g = self.group
        if g.length[x] > g.length[w]:
            x, w = w, x
        d = int(g.length[w] - g.length[x])
        if d % 2 == 0:
            return 0
        return int(self.P[w, x, (d - 1) // 2])

    def leq(self, x: int, w: int) -> bool:
        """Bruhat order read off the table (P_{x,w}(0) = 1 iff x <= w)."""
        return bool(self.P[w, x, 0])

    def delta(self, z: int) -> tuple[int, int]:
        """(Delta(z), n_z): minus the top exponent of p(e, z) and its coefficient."""
        row = self.P[z, 0]
        nz = np.flatnonzero(row)
        top = int(nz[-1])
        return int(self.group.length[z]) - 2 * top, int(row[top])

    def mu_row(self, w: int) -> tuple[np.ndarray, np.ndarray]:
        return self.mu_z[w], self.mu_val[w]

    def check_invariants(self) -> dict[str, bool]:
        g = self.group
        n = g.n
        diag = self.P[np.arange(n), np.arange(n)]
        out = {"p_ww_is_one": bool(np.all(diag[:, 0] == 1) and np.all(diag[:, 1:] == 0))}
        out["coefficients_nonnegative"] = bool(np.all(self.P >= 0))
        # p(x, w) in v^-1 Z[v^-1] for x < w  <=>  deg P_{x,w} < (|w| - |x|) / 2
        lw = g.length[:, None]
        lx = g.length[None, :]
        depth = self.P.shape[2]
        k = np.arange(depth)[None, None, :]
        bad = (self.P != 0) & (2 * k >= (lw - lx)[:, :, None])
        bad[np.arange(n), np.arange(n), 0] = False
        out["negative_exponent_support"] = not bool(bad.any())
        support = self.P[:, :, 0] != 0
        out["support_is_bruhat_interval"] = bool(np.all(support == (self.P != 0).any(axis=2)))
        if n <= 4096:
            out["support_matches_subword_bruhat"] = bool(
                np.array_equal(support, g.bruhat_matrix()))
        return out


def _shift_q(a: np.ndarray) -> np.ndarray:
    if np.any(a[..., -1]):
        raise CoefficientOverflow("KL degree exceeded table depth")
    out = np.zeros_like(a)
    out[..., 1:] = a[..., :-1]
    return out


def build_kl_table(g: GroupTable, threads: int = 1) -> KLTable:
    """All P_{x,w} by the standard recursion on a left descent of w.

    For w = s v with s the smallest left descent of w:

        P_{x,w} = q^(1-c) P_{sx,v} + q^c P_{x,v}
                  - sum_{z < v, sz < z} mu(z, v) q^((|w|-|z|)/2) P_{x,z}

    with c = 1 if sx < x, else 0.  Rows of one length depend only on shorter
    rows, so a stratum can be filled by several threads; each row lands in
    its own slice, so the result does not depend on the thread count.
    """
    n = g.n
    # one spare column so the q-shift of any row stays inside the array
    depth = g.nu // 2 + 2
    need = n * n * depth * 8
    if need > MEMORY_LIMIT:
        raise TableTooLargeError(
            f"dense KL table for {n} elements needs {need / 2 ** 30:.1f} GiB "
            f"(limit {MEMORY_LIMIT / 2 ** 30:.0f} GiB)")
    P = np.zeros((n, n, depth), dtype=np.int64)
    P[0, 0, 0] = 1
    mu_z: list = [None] * n
    mu_val: list = [None] * n
    mu_z[0] = np.zeros(0, dtype=np.int64)
    mu_val[0] = np.zeros(0, dtype=np.int64)

    length = g.length
    desc_mask = [length[g.lmul[s]] < length for s in range(g.rank)]

    def row(w: int) -> None:
        s = g.words[w][0]
        v = int(g.lmul[s, w])
        perm = g.lmul[s]
        rv = P[v]
        a = rv[perm]                       # P_{sx, v}
        c = desc_mask[s][:, None]
        r = np.where(c, a + _shift_q(rv), _shift_q(a) + rv)
        zs, ms = mu_z[v], mu_val[v]
        lw = int(length[w])
        for z, m in zip(zs.tolist(), ms.tolist()):
            if not desc_mask[s][z]:
                continue
            e = (lw - int(length[z])) // 2
            pz = P[z]
            if e:
                if np.any(pz[:, depth - e:]):
                    raise CoefficientOverflow("KL degree exceeded table depth")
                r[:, e:] -= m * pz[:, : depth - e]
            else:
                r -= m * pz
        check_int64(r)
        P[w] = r
        # mu(z, w) for z < w: odd length gap d, coefficient of q^((d-1)/2)
        d = lw - length
        cand = np.flatnonzero((d > 0) & (d % 2 == 1))
        vals = r[cand, (d[cand] - 1) // 2]
        keep = vals != 0
        mu_z[w] = cand[keep]
        mu_val[w] = vals[keep]

    strata: dict[int, list[int]] = {}
    for w in range(1, n):
        strata.setdefault(int(length[w]), []).append(w)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for ell in sorted(strata):
            ws = strata[ell]
            if pool is None:
                for w in ws:
                    row(w)
            else:
                list(pool.map(row, ws))
    finally:
        if pool is not None:
            pool.shutdown()
    log.debug("KL table for %s: %d rows, depth %d", g.matrix.type_tag, n, depth)
    return KLTable(g, P, mu_z, mu_val)
