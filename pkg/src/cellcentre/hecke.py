"""
Hecke algebra arithmetic in the standard basis T_w and the c-basis.

``t_mul`` works on sparse :class:`HeckeElement` values with exact Laurent
coefficients.  :class:`HeckeKernel` is the bulk path: Hecke elements as int64
arrays of shape ``(n, width)`` over a fixed v-exponent window, with c-basis
products obtained by expanding c_x in the T-basis, multiplying, and converting
back through the unitriangular KL base change.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coxeter import GroupTable
from .kl import KLTable
from .laurent import CoefficientOverflow, LaurentPoly, V, check_int64

__all__ = [
    "HeckeElement", "t_mul", "c_to_t", "t_to_c", "c_mul", "h", "HeckeKernel",
    "all_structure_constants", "structure_constants_bar_invariant",
]

V_MINUS_VINV = V - V ** -1


@dataclass(frozen=True)
class HeckeElement:
    terms: dict[int, LaurentPoly] = field(default_factory=dict)
    basis: str = "T"

    def __post_init__(self):
        if self.basis not in ("T", "C"):
            raise ValueError("basis must be 'T' or 'C'")
        for k in [k for k, p in self.terms.items() if not p]:
            del self.terms[k]

    @classmethod
    def basis_element(cls, w: int, basis: str = "T") -> HeckeElement:
        return cls({w: LaurentPoly(1)}, basis)

    def __add__(self, other: HeckeElement) -> HeckeElement:
        if other.basis != self.basis:
            raise ValueError("basis mismatch")
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out.get(k, LaurentPoly()) + p
        return HeckeElement(out, self.basis)

    def scale(self, c) -> HeckeElement:
        return HeckeElement({k: p * c for k, p in self.terms.items()}, self.basis)

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.basis == other.basis \
            and self.terms == other.terms


def _left_Ts(g: GroupTable, s: int, a: dict[int, LaurentPoly]) -> dict[int, LaurentPoly]:
    out: dict[int, LaurentPoly] = {}
    for w, p in a.items():
        sw = int(g.lmul[s, w])
        out[sw] = out.get(sw, LaurentPoly()) + p
        if g.length[sw] < g.length[w]:
            out[w] = out.get(w, LaurentPoly()) + V_MINUS_VINV * p
    return out


def t_mul(g: GroupTable, a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product of two T-basis elements by generator-by-generator expansion."""
    if a.basis != "T" or b.basis != "T":
        raise ValueError("t_mul expects T-basis operands")
    out: dict[int, LaurentPoly] = {}
    for x, px in a.terms.items():
        cur = dict(b.terms)
        for s in reversed(g.words[x]):
            cur = _left_Ts(g, s, cur)
        for w, p in cur.items():
            out[w] = out.get(w, LaurentPoly()) + px * p
    return HeckeElement(out, "T")


def c_to_t(kl: KLTable, a: HeckeElement) -> HeckeElement:
    if a.basis == "T":
        return a
    out: dict[int, LaurentPoly] = {}
    for w, pw in a.terms.items():
        for x in np.flatnonzero(kl.P[w, :, 0]).tolist():
            out[x] = out.get(x, LaurentPoly()) + pw * kl.p(x, w)
    return HeckeElement(out, "T")


def t_to_c(kl: KLTable, a: HeckeElement) -> HeckeElement:
    """Peel off c_z at the longest remaining T_z until nothing is left."""
    if a.basis == "C":
        return a
    g = kl.group
    rest = {k: p for k, p in a.terms.items() if p}
    out: dict[int, LaurentPoly] = {}
    while rest:
        z = max(rest, key=lambda w: (g.length[w], w))
        f = rest[z]
        out[z] = f
        for x in np.flatnonzero(kl.P[z, :, 0]).tolist():
            q = rest.get(x, LaurentPoly()) - f * kl.p(x, z)
            if q:
                rest[x] = q
            else:
                rest.pop(x, None)
    return HeckeElement(out, "C")


def c_mul(kl: KLTable, x: int, y: int) -> dict[int, LaurentPoly]:
    """c_x c_y as a sparse map z -> h_{x,y,z}."""
    return HeckeKernel(kl).c_product(x, y)


def h(kl: KLTable, x: int, y: int, z: int) -> LaurentPoly:
    return c_mul(kl, x, y).get(z, LaurentPoly())


class HeckeKernel:
    """Dense int64 Hecke arithmetic on a v-exponent window [lo, hi]."""

    def __init__(self, kl: KLTable):
        g = kl.group
        self.kl = kl
        self.g = g
        nu = g.nu
        self.lo = -3 * nu - 2
        self.hi = nu + 2
        self.width = self.hi - self.lo + 1
        n = g.n
        self._desc = [np.flatnonzero(g.length[g.lmul[s]] < g.length) for s in range(g.rank)]
        # p(x, w) as dense v^-j coefficients: pv[w, x, j] = coeff of v^-j
        pv = np.zeros((n, n, nu + 1), dtype=np.int64)
        depth = kl.P.shape[2]
        gap = (g.length[:, None] - g.length[None, :])       # |w| - |x|
        for k in range(depth):
            j = gap - 2 * k
            ok = (kl.P[:, :, k] != 0) & (j >= 0) & (j <= nu)
            w_idx, x_idx = np.nonzero(ok)
            pv[w_idx, x_idx, j[ok]] = kl.P[w_idx, x_idx, k]
        self.pv = pv

    def _shift(self, a: np.ndarray, k: int) -> np.ndarray:
        """Multiply by v^k inside the window; refuse to drop terms."""
        if k == 0:
            return a
        out = np.zeros_like(a)
        if k > 0:
            if np.any(a[..., -k:]):
                raise CoefficientOverflow("v-window exceeded")
            out[..., k:] = a[..., :-k]
        else:
            if np.any(a[..., :-k]):
                raise CoefficientOverflow("v-window exceeded")
            out[..., :k] = a[..., -k:]
        return out

    def c_as_t(self, w: int) -> np.ndarray:
        """T-expansion of c_w as an (n, width) array."""
        out = np.zeros((self.g.n, self.width), dtype=np.int64)
        z = -self.lo
        for j in range(self.pv.shape[2]):
            out[:, z - j] = self.pv[w, :, j]
        return out

    def left_T(self, s: int, a: np.ndarray) -> np.ndarray:
        """T_s * a for a of shape (..., n, width)."""
        out = a[..., self.g.lmul[s], :].copy()
        d = self._desc[s]
        part = a[..., d, :]
        out[..., d, :] += self._shift(part, 1) - self._shift(part, -1)
        return out

    def all_T_times(self, b: np.ndarray) -> np.ndarray:
        """Stack of T_a * b for every a, shape (n, n, width)."""
        g = self.g
        out = np.empty((g.n,) + b.shape, dtype=np.int64)
        out[0] = b
        for a in range(1, g.n):
            s = g.words[a][0]
            out[a] = self.left_T(s, out[int(g.lmul[s, a])])
        return check_int64(out)

    def to_c(self, a: np.ndarray) -> np.ndarray:
        """Convert T-basis arrays (..., n, width) to c-basis, in place on a copy."""
        g = self.g
        a = a.copy()
        out = np.zeros_like(a)
        for z in range(g.n - 1, -1, -1):
            f = a[..., z, :].copy()
            if not f.any():
                continue
            out[..., z, :] = f
            below = np.flatnonzero(self.kl.P[z, :, 0])
            for j in range(self.pv.shape[2]):
                col = self.pv[z, below, j]
                if not col.any():
                    continue
                # subtract f * v^-j * p-coefficient at each x below z
                fj = self._shift(f, -j)
                a[..., below, :] -= col[:, None] * fj[..., None, :]
        if np.any(a):
            raise ArithmeticError("T to c conversion left a remainder")
        return check_int64(out)

    def c_products_right(self, y: int) -> np.ndarray:
        """c_x c_y in the c-basis for every x: array (n_x, n_z, width)."""
        cy = self.c_as_t(y)
        ta = self.all_T_times(cy)                        # (a, n, width)
        n = self.g.n
        prod = np.zeros((n, n, self.width), dtype=np.int64)
        for j in range(self.pv.shape[2]):
            coef = self.pv[:, :, j]                      # (x, a)
            if not coef.any():
                continue
            term = np.tensordot(coef, ta, axes=(1, 0))   # (x, n, width)
            prod += self._shift(term, -j)
        return self.to_c(check_int64(prod))

    def c_product(self, x: int, y: int) -> dict[int, LaurentPoly]:
        g = self.g
        cy = self.c_as_t(y)
        acc = np.zeros_like(cy)
        for a in np.flatnonzero(self.kl.P[x, :, 0]).tolist():
            cur = cy
            for s in reversed(g.words[a]):
                cur = self.left_T(s, cur)
            for j in range(self.pv.shape[2]):
                c = int(self.pv[x, a, j])
                if c:
                    acc += c * self._shift(cur, -j)
        res = self.to_c(check_int64(acc))
        return {int(z): LaurentPoly.from_array(res[z], -self.lo)
                for z in np.flatnonzero(res.any(axis=1))}

    def poly(self, arr: np.ndarray) -> LaurentPoly:
        return LaurentPoly.from_array(arr, -self.lo)


def all_structure_constants(kl: KLTable) -> np.ndarray:
    """h[x, y, z] coefficient arrays for every triple, shape (n, n, n, width).

    Only sensible for small groups; used for the exhaustive cell closure and
    as the independent route in cross-checks.
    """
    k = HeckeKernel(kl)
    n = kl.n
    out = np.zeros((n, n, n, k.width), dtype=np.int64)
    for y in range(n):
        out[:, y] = k.c_products_right(y)
    return out


def structure_constants_bar_invariant(kl: KLTable, hprod: np.ndarray | None = None) -> bool:
    """Every h_{x,y,z} is fixed by v -> v^-1 (so lies in a window [-nu, nu])."""
    k = HeckeKernel(kl)
    if hprod is None:
        hprod = all_structure_constants(kl)
    nu = kl.group.nu
    zero = -k.lo
    core = hprod[..., zero - nu: zero + nu + 1]
    outside = hprod[..., : zero - nu].any() or hprod[..., zero + nu + 1:].any()
    return bool(not outside and np.array_equal(core, core[..., ::-1]))
