"""
Hom dimensions and multiplicities for the twisted centre of a cell.

For a two-sided cell stable under an ordinary automorphism eps:

    dim_hom(z, u) = sum_y tau(t_{y^-1} t_z t_{eps(y)} t_{u^-1})
    sum_y t_y t_x t_{eps(y)^-1} = sum_z psi_x(z) t_z

Both are evaluated in J on the cell.  They are computed by separate sparse
contractions, so the identity psi_u(z) = dim_hom(z, u) is a real cross-check
between two different products in J.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from .cells import CellPartition
from .jring import JElement, JRingTable, j_mul, tau
from .twist import CellNotStableError, OrdinaryAut, boc0

__all__ = [
    "CentreReport", "NegativeDimensionError", "dim_hom", "dim_hom_matrix",
    "psi", "psi_matrix", "i_eps_class", "trunc_conv_class", "centre_report",
    "BLOCK_NOTE",
]

BLOCK_NOTE = ("block decomposition not computed: total_dim is reported, the number "
              "of simple objects is left to external knowledge")


class NegativeDimensionError(ArithmeticError):
    def __init__(self, detail: str = ""):
        super().__init__("negative dimension" + (f": {detail}" if detail else ""))


def _require_stable(j: JRingTable, eps: OrdinaryAut) -> None:
    if not np.array_equal(np.sort(eps.perm[j.elements]), j.elements):
        raise CellNotStableError(f"two-sided cell {j.cell} under {eps.name}")


def _local_perms(j: JRingTable, eps: OrdinaryAut) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """inverse, eps and eps^-1 as permutations of local indices."""
    loc = np.full(len(eps.perm), -1, dtype=np.int64)
    loc[j.elements] = np.arange(j.size)
    inv = loc[j.inverse[j.elements]]
    e = loc[eps.perm[j.elements]]
    e_inv = np.empty_like(e)
    e_inv[e] = np.arange(j.size)
    return inv, e, e_inv


def dim_hom(j: JRingTable, eps: OrdinaryAut, z: int, u: int) -> int:
    """Literal tau-sum for one pair of elements (global indices)."""
    _require_stable(j, eps)
    if z not in j or u not in j:
        raise ValueError("arguments must lie in the cell")
    inv = j.inverse
    tz = JElement.t(z)
    tu = JElement.t(inv[u])
    total = 0
    for y in j.elements.tolist():
        prod = j_mul(j, j_mul(j, j_mul(j, JElement.t(inv[y]), tz), JElement.t(eps(y))), tu)
        total += tau(j, prod)
    if total < 0:
        raise NegativeDimensionError(f"({z}, {u}) -> {total}")
    return total


def dim_hom_matrix(j: JRingTable, eps: OrdinaryAut) -> np.ndarray:
    """dim_hom over the whole cell, rows z and columns u in local order.

    Contracts t_{y^-1} t_z, then t_{eps(y)}, summed over y in a single sparse
    product, then pairs with t_{u^-1} through tau.
    """
    _require_stable(j, eps)
    m = j.size
    inv, e, e_inv = _local_perms(j, eps)
    xs, ys, zs, cs = j.local_triples()
    sq = m * m
    # left[z, (y, w)] = jc(y^-1, z, w): triple (x, y, z) read as x = y'^-1
    left = csr_matrix((cs, (ys, inv[xs] * m + zs)), shape=(m, sq))
    # right[(y, w), w'] = jc(w, eps(y), w')
    right = csr_matrix((cs, (e_inv[ys] * m + xs, zs)), shape=(sq, m))
    # pair[w', u] = tau(t_w' t_{u^-1}) = sum over distinguished d of jc(w', u^-1, d)
    dmask = np.zeros(m, dtype=bool)
    dmask[[j.local(d) for d in j.distinguished]] = True
    sel = dmask[zs]
    pair = csr_matrix((cs[sel], (xs[sel], inv[ys[sel]])), shape=(m, m))
    out = (left @ right @ pair).toarray().astype(np.int64)
    if np.any(out < 0):
        raise NegativeDimensionError()
    return out


def psi(j: JRingTable, eps: OrdinaryAut, x: int) -> dict[int, int]:
    """psi_x as {z: multiplicity} from sum_y t_y t_x t_{eps(y)^-1}."""
    _require_stable(j, eps)
    if x not in j:
        raise ValueError("argument must lie in the cell")
    inv = j.inverse
    acc = JElement()
    tx = JElement.t(x)
    for y in j.elements.tolist():
        acc = acc + j_mul(j, j_mul(j, JElement.t(y), tx), JElement.t(inv[eps(y)]))
    if any(c < 0 for c in acc.terms.values()):
        raise NegativeDimensionError(f"psi at {x}")
    return dict(sorted(acc.terms.items()))


def psi_matrix(j: JRingTable, eps: OrdinaryAut) -> np.ndarray:
    """psi[x, z] in local order, by one sparse contraction over (y, w)."""
    _require_stable(j, eps)
    m = j.size
    inv, e, e_inv = _local_perms(j, eps)
    xs, ys, zs, cs = j.local_triples()
    sq = m * m
    # first[x, (y, w)] = jc(y, x, w)
    first = csr_matrix((cs, (ys, xs * m + zs)), shape=(m, sq))
    # second[(y, w), z] = jc(w, eps(y)^-1, z): y = eps^-1(second arg inverted)
    second = csr_matrix((cs, (e_inv[inv[ys]] * m + xs, zs)), shape=(sq, m))
    out = (first @ second).toarray().astype(np.int64)
    if np.any(out < 0):
        raise NegativeDimensionError()
    return out


def i_eps_class(j: JRingTable, eps: OrdinaryAut, x: int) -> JElement:
    """sum_z psi_x(z) t_z, the class of the twisted induction of t_x."""
    return JElement(psi(j, eps, x))


def trunc_conv_class(j: JRingTable, z: int, u: int) -> dict[int, int]:
    """Multiplicities in the truncated convolution of z and u: w -> jc(z, u, w)."""
    return j.product(z, u)


@dataclass(eq=False)
class CentreReport:
    cell: int
    eps: str
    a: int
    elements: list[str]             # words, (length, ShortLex) order
    boc0: np.ndarray                # bool membership per element
    dim_hom: np.ndarray             # [z, u]
    dim_hom_via_psi: np.ndarray     # psi transposed
    psi: np.ndarray                 # [x, z]
    verdicts: dict[str, bool] = field(default_factory=dict)
    note: str = BLOCK_NOTE

    @property
    def total_dim(self) -> int:
        return int(self.dim_hom.sum())

    @property
    def boc0_words(self) -> list[str]:
        return [w for w, b in zip(self.elements, self.boc0.tolist()) if b]

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "cell": self.cell,
            "eps": self.eps,
            "a": self.a,
            "elements": self.elements,
            "boc0": self.boc0_words,
            "dim_hom": self.dim_hom.tolist(),
            "psi": self.psi.tolist(),
            "total_dim": self.total_dim,
            "verdicts": dict(sorted(self.verdicts.items())),
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for name, mat in (("dim_hom", self.dim_hom), ("psi", self.psi)):
            w.writerow([f"# {name} cell={self.cell} eps={self.eps}"] + self.elements)
            for word, row in zip(self.elements, mat.tolist()):
                w.writerow([word] + row)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"cell {self.cell}  eps={self.eps}  a={self.a}  size={len(self.elements)}",
                 f"  {self.note}",
                 f"  boc0: {', '.join(self.boc0_words) or '(empty)'}",
                 f"  total_dim: {self.total_dim}"]
        idx = np.flatnonzero(self.boc0)
        if len(idx) and len(idx) <= 12:
            lines.append("  dim_hom on boc0:")
            for i in idx:
                lines.append(f"    {self.elements[i]:>24}  "
                             + " ".join(str(v) for v in self.dim_hom[i, idx]))
        for k, v in sorted(self.verdicts.items()):
            lines.append(f"  {k}: {'pass' if v else 'FAIL'}")
        return "\n".join(lines)


def centre_report(part: CellPartition, j: JRingTable, eps: OrdinaryAut) -> CentreReport:
    """Both matrices for one (cell, eps) pair plus their consistency verdicts.

    Verdict failures are recorded, not raised; refuses unstable cells.
    """
    _require_stable(j, eps)
    g = part.group
    dh = dim_hom_matrix(j, eps)
    ps = psi_matrix(j, eps)
    support = np.isin(j.elements, boc0(eps, part, j.cell))
    _, e, _ = _local_perms(j, eps)
    off = ~support
    parity = (g.length[j.elements][:, None] + g.length[j.elements][None, :]) % 2
    verdicts = {
        "nonnegative": bool(np.all(dh >= 0) and np.all(ps >= 0)),
        "dim_hom_symmetric": bool(np.array_equal(dh, dh.T)),
        "dim_hom_supported_on_boc0": bool(not dh[off].any() and not dh[:, off].any()),
        "psi_supported_on_boc0": bool(not ps[:, off].any()),
        "psi_equals_dim_hom_transpose": bool(np.array_equal(ps, dh.T)),
        "psi_eps_invariant": bool(np.array_equal(ps[:, e], ps)),
        # the signed form (-1)^(|z|+|u|) of the tau-sum is also a dimension,
        # so nonzero entries need |z| + |u| even
        "even_length_sum_support": bool(not dh[parity == 1].any()),
    }
    return CentreReport(
        cell=j.cell, eps=eps.name, a=j.a,
        elements=[g.format_word(w) for w in j.elements.tolist()],
        boc0=support, dim_hom=dh, dim_hom_via_psi=ps.T.copy(), psi=ps,
        verdicts=verdicts)
