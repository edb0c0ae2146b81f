"""
Ordinary automorphisms of W and the twisted support of a cell.

An automorphism permuting the simple reflections is ordinary when any two
distinct generators in one orbit have a product of order at most 3.  Only
diagram symmetries are considered, so an automorphism is a permutation of
generator indices preserving the Coxeter matrix.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .cells import CellPartition
from .coxeter import GroupTable

__all__ = [
    "OrdinaryAut", "NotOrdinaryError", "CellNotStableError",
    "ordinary_automorphisms", "make_automorphism", "parse_eps",
    "eps_apply", "eps_on_cells", "boc0",
]


class NotOrdinaryError(ValueError):
    pass


class CellNotStableError(ValueError):
    def __init__(self, detail: str = ""):
        super().__init__("cell not eps-stable" + (f": {detail}" if detail else ""))


@dataclass(frozen=True, eq=False)
class OrdinaryAut:
    gens: tuple[int, ...]          # generator i -> gens[i]
    perm: np.ndarray               # element index -> element index
    name: str

    def __call__(self, w: int) -> int:
        return int(self.perm[w])

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.gens))

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.gens)):
            if i in seen:
                continue
            orb = [i]
            j = self.gens[i]
            while j != i:
                orb.append(j)
                j = self.gens[j]
            seen.update(orb)
            out.append(tuple(orb))
        return out

    def cycle_notation(self) -> str:
        return "".join("(" + " ".join(str(i + 1) for i in o) + ")" for o in self.orbits())


def _ordinary_violation(g: GroupTable, gens: tuple[int, ...]) -> str | None:
    m = g.matrix
    r = g.rank
    for i in range(r):
        for j in range(r):
            if m.m(gens[i], gens[j]) != m.m(i, j):
                return "does not preserve the Coxeter matrix"
    aut = OrdinaryAut(gens, np.zeros(0, dtype=np.int64), "")
    for orb in aut.orbits():
        for s, t in itertools.combinations(orb, 2):
            if m.m(s, t) > 3:
                return (f"s{s + 1} and s{t + 1} lie in one orbit but s{s + 1}s{t + 1} "
                        f"has order {m.m(s, t)} > 3 (an ordinary automorphism requires "
                        f"order <= 3 within an orbit)")
    return None


def _element_perm(g: GroupTable, gens: tuple[int, ...]) -> np.ndarray:
    perm = np.empty(g.n, dtype=np.int64)
    perm[0] = 0
    for w in range(1, g.n):
        word = g.words[w]
        prefix = g.lmul[word[0], w]          # w = s * prefix
        perm[w] = g.lmul[gens[word[0]], perm[prefix]]
    return perm


def make_automorphism(g: GroupTable, gens, name: str | None = None) -> OrdinaryAut:
    gens = tuple(int(i) for i in gens)
    if sorted(gens) != list(range(g.rank)):
        raise NotOrdinaryError("not a permutation of the generators")
    why = _ordinary_violation(g, gens)
    if why:
        raise NotOrdinaryError(f"automorphism is not ordinary: {why}")
    aut = OrdinaryAut(gens, _element_perm(g, gens), "")
    if name is None:
        name = "id" if aut.is_identity else aut.cycle_notation()
    return OrdinaryAut(gens, aut.perm, name)


def ordinary_automorphisms(g: GroupTable) -> list[OrdinaryAut]:
    """All ordinary diagram automorphisms, identity first."""
    out = []
    nontrivial = 0
    for gens in itertools.permutations(range(g.rank)):
        if _ordinary_violation(g, gens) is None:
            out.append(make_automorphism(g, gens))
            nontrivial += gens != tuple(range(g.rank))
    if nontrivial == 1:
        out = [a if a.is_identity else OrdinaryAut(a.gens, a.perm, "flip") for a in out]
    return out


_CYCLES_RE = re.compile(r"^\s*(\(\s*\d+(\s+\d+)*\s*\)\s*)+$")


def parse_eps(g: GroupTable, spec: str) -> OrdinaryAut:
    """``id``, ``flip`` (the unique non-trivial ordinary automorphism) or
    generator cycles such as ``"(1 2)(3)"`` with 1-based labels."""
    spec = spec.strip()
    if spec == "id":
        return make_automorphism(g, range(g.rank), "id")
    if spec == "flip":
        nontriv = [a for a in ordinary_automorphisms(g) if not a.is_identity]
        if len(nontriv) != 1:
            raise NotOrdinaryError(
                f"'flip' needs exactly one non-trivial ordinary automorphism, found {len(nontriv)}")
        return nontriv[0]
    if not _CYCLES_RE.match(spec):
        raise NotOrdinaryError(f"cannot parse automorphism {spec!r}")
    gens = list(range(g.rank))
    used = set()
    for cyc in re.findall(r"\(([^)]*)\)", spec):
        items = [int(t) - 1 for t in cyc.split()]
        for i in items:
            if not 0 <= i < g.rank or i in used:
                raise NotOrdinaryError(f"bad generator label in {spec!r}")
            used.add(i)
        for a, b in zip(items, items[1:] + items[:1]):
            gens[a] = b
    aut = make_automorphism(g, gens)
    if not aut.is_identity:
        flips = [a for a in ordinary_automorphisms(g) if not a.is_identity]
        if len(flips) == 1 and flips[0].gens == aut.gens:
            return flips[0]
    return aut


def eps_apply(eps: OrdinaryAut, w: int) -> int:
    return int(eps.perm[w])


def eps_on_cells(eps: OrdinaryAut, part: CellPartition) -> dict[str, dict[int, int]]:
    """Induced permutations of left and two-sided cell ids."""
    out = {}
    for kind, labels in (("left", part.left), ("two_sided", part.two_sided)):
        mapping: dict[int, int] = {}
        for w, c in enumerate(labels.tolist()):
            img = int(labels[eps.perm[w]])
            if mapping.setdefault(c, img) != img:
                raise RuntimeError(f"automorphism does not permute {kind} cells")
        out[kind] = mapping
    return out


def boc0(eps: OrdinaryAut, part: CellPartition, cell: int) -> np.ndarray:
    """{z in cell : z and eps(z^-1) lie in the same left cell}."""
    members = part.two_sided_cell(cell)
    if not np.array_equal(np.sort(eps.perm[members]), members):
        raise CellNotStableError(f"two-sided cell {cell}")
    inv = part.group.inverse
    twisted = eps.perm[inv[members]]
    return members[part.left[members] == part.left[twisted]]
