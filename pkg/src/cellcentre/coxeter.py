"""
Finite Coxeter groups enumerated into dense index tables.

Elements are numbered 0..n-1 in (length, ShortLex word) order, so index 0 is
the identity and index n-1 is the longest element.  Generators are numbered
0..rank-1 internally and rendered as ``s1 .. sn`` in words.

>>> g = build_group(coxeter_matrix("A", 2))
>>> g.n, g.nu, g.format_word(g.w_max)
(6, 3, 's1 s2 s1')
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CoxeterMatrix", "GroupTable", "CoxeterError", "GroupTooLargeError",
    "coxeter_matrix", "parse_coxeter", "build_group", "expected_order",
]

DEFAULT_CAP = 20000
BRUHAT_DENSE_LIMIT = 4096


class CoxeterError(ValueError):
    """Malformed Coxeter data or words."""


class GroupTooLargeError(CoxeterError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    entries: tuple[tuple[int, ...], ...]
    type_tag: str = "custom"

    def __post_init__(self):
        m = self.entries
        n = len(m)
        if n == 0:
            raise CoxeterError("invalid matrix: rank must be positive")
        for i, row in enumerate(m):
            if len(row) != n:
                raise CoxeterError("invalid matrix: not square")
            for j, mij in enumerate(row):
                if not isinstance(mij, (int, np.integer)):
                    raise CoxeterError("invalid matrix: entries must be integers")
                if i == j and mij != 1:
                    raise CoxeterError("invalid matrix: diagonal must be 1")
                if i != j and (mij < 2 or mij != m[j][i]):
                    raise CoxeterError(
                        f"invalid matrix: m({i + 1},{j + 1}) must be symmetric and >= 2")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def m(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def to_json(self) -> dict:
        return {"type": self.type_tag, "matrix": [list(r) for r in self.entries]}


def _chain(n: int, labels: dict[tuple[int, int], int] | None = None) -> list[list[int]]:
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 3
    for (i, j), val in (labels or {}).items():
        m[i][j] = m[j][i] = val
    return m


def coxeter_matrix(type_letter: str, rank: int | None = None, m: int | None = None) -> CoxeterMatrix:
    """Coxeter matrix of a finite irreducible type, Bourbaki numbering.

    ``type_letter`` is one of A..I; for ``I`` pass the dihedral parameter
    ``m`` (rank is then 2).
    """
    t = type_letter.upper()
    if t == "I":
        if m is None or m < 2:
            raise CoxeterError("invalid matrix: I2(m) needs m >= 2")
        return CoxeterMatrix(((1, m), (m, 1)), f"I2({m})")
    if rank is None or rank < 1:
        raise CoxeterError("invalid matrix: rank must be positive")
    n = rank
    if t == "A":
        mat = _chain(n)
    elif t in ("B", "C"):
        if n < 2:
            raise CoxeterError("invalid matrix: B_n needs n >= 2")
        mat = _chain(n, {(n - 2, n - 1): 4})
    elif t == "D":
        if n < 4:
            raise CoxeterError("invalid matrix: D_n needs n >= 4")
        mat = _chain(n - 1)
        mat = [row + [2] for row in mat] + [[2] * (n - 1) + [1]]
        mat[n - 3][n - 1] = mat[n - 1][n - 3] = 3
    elif t == "E":
        if n not in (6, 7, 8):
            raise CoxeterError("invalid matrix: E_n needs n in 6, 7, 8")
        mat = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]
        for i, j in edges:
            mat[i][j] = mat[j][i] = 3
    elif t == "F":
        if n != 4:
            raise CoxeterError("invalid matrix: F_n needs n = 4")
        mat = _chain(4, {(1, 2): 4})
    elif t == "G":
        if n != 2:
            raise CoxeterError("invalid matrix: G_n needs n = 2")
        mat = _chain(2, {(0, 1): 6})
    elif t == "H":
        if n not in (2, 3, 4):
            raise CoxeterError("invalid matrix: H_n needs n in 2, 3, 4")
        mat = _chain(n, {(0, 1): 5})
    else:
        raise CoxeterError(f"invalid matrix: unknown type {type_letter!r}")
    tag = t + str(n)
    return CoxeterMatrix(tuple(tuple(r) for r in mat), tag)


_TYPE_RE = re.compile(r"^\s*([A-Ha-h])\s*_?\s*(\d+)\s*$")
_DIHEDRAL_RE = re.compile(r"^\s*[Ii]\s*_?\s*2\s*\(\s*(\d+)\s*\)\s*$")


def parse_coxeter(desc) -> CoxeterMatrix:
    """Accept ``"B3"``, ``"I2(5)"``, ``{"type": "B", "rank": 3}``,
    ``{"matrix": [[1, 4], [4, 1]]}`` or a JSON string of either dict."""
    if isinstance(desc, CoxeterMatrix):
        return desc
    if isinstance(desc, str):
        s = desc.strip()
        if s.startswith("{"):
            return parse_coxeter(json.loads(s))
        md = _DIHEDRAL_RE.match(s)
        if md:
            return coxeter_matrix("I", m=int(md.group(1)))
        mt = _TYPE_RE.match(s)
        if mt:
            return coxeter_matrix(mt.group(1), int(mt.group(2)))
        raise CoxeterError(f"invalid matrix: cannot parse type {desc!r}")
    if isinstance(desc, dict):
        if "matrix" in desc:
            rows = tuple(tuple(int(x) for x in r) for r in desc["matrix"])
            return CoxeterMatrix(rows, str(desc.get("type", "custom")))
        if "type" in desc:
            t = str(desc["type"])
            if "rank" in desc:
                if t.upper() == "I":
                    return coxeter_matrix("I", m=int(desc["m"]))
                return coxeter_matrix(t, int(desc["rank"]))
            return parse_coxeter(t)
    raise CoxeterError(f"invalid matrix: unrecognised description {desc!r}")


def expected_order(cm: CoxeterMatrix) -> int | None:
    """Closed-form group order for the named irreducible types, else None."""
    tag = cm.type_tag
    md = _DIHEDRAL_RE.match(tag)
    if md:
        return 2 * int(md.group(1))
    mt = _TYPE_RE.match(tag)
    if not mt:
        return None
    t, n = mt.group(1).upper(), int(mt.group(2))
    fact = 1
    for k in range(2, n + 2):
        fact *= k
    table = {
        "A": fact,
        "B": (2 ** n) * (fact // (n + 1)),
        "C": (2 ** n) * (fact // (n + 1)),
        "D": (2 ** (n - 1)) * (fact // (n + 1)),
        "E": {6: 51840, 7: 2903040, 8: 696729600}.get(n),
        "F": 1152,
        "G": 12,
        "H": {2: 10, 3: 120, 4: 14400}.get(n),
    }
    return table[t]


@dataclass(eq=False)
class GroupTable:
    """An enumerated finite Coxeter group.

    ``lmul[s, w]`` is the index of ``s w`` and ``rmul[s, w]`` that of ``w s``.
    """
    matrix: CoxeterMatrix
    length: np.ndarray
    words: list[tuple[int, ...]]
    lmul: np.ndarray
    rmul: np.ndarray
    inverse: np.ndarray
    _bruhat: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.words)

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def identity(self) -> int:
        return 0

    @property
    def w_max(self) -> int:
        return self.n - 1

    @property
    def nu(self) -> int:
        return int(self.length[-1])

    def _check(self, x: int) -> int:
        if not 0 <= x < self.n:
            raise IndexError(f"element index {x} out of range")
        return int(x)

    def mul(self, x: int, y: int) -> int:
        x = self._check(x)
        for s in self.words[self._check(y)]:
            x = int(self.rmul[s, x])
        return x

    def inv(self, x: int) -> int:
        return int(self.inverse[self._check(x)])

    def len(self, x: int) -> int:
        return int(self.length[self._check(x)])

    def descents_left(self, x: int) -> frozenset[int]:
        x = self._check(x)
        lx = self.length[x]
        return frozenset(s for s in range(self.rank) if self.length[self.lmul[s, x]] < lx)

    def descents_right(self, x: int) -> frozenset[int]:
        x = self._check(x)
        lx = self.length[x]
        return frozenset(s for s in range(self.rank) if self.length[self.rmul[s, x]] < lx)

    def element(self, word: Iterable[int] | str) -> int:
        """Index of the product of a word (0-based ints, or ``"s1 s2"``)."""
        if isinstance(word, str):
            word = self.parse_word(word)
        x = 0
        for s in word:
            if not 0 <= s < self.rank:
                raise CoxeterError(f"generator {s + 1} out of range")
            x = int(self.rmul[s, x])
        return x

    def parse_word(self, text: str) -> tuple[int, ...]:
        text = text.strip()
        if text in ("", "e", "1"):
            return ()
        out = []
        for tok in text.replace(",", " ").split():
            m = re.fullmatch(r"s?(\d+)", tok)
            if not m:
                raise CoxeterError(f"bad generator token {tok!r}")
            out.append(int(m.group(1)) - 1)
        return tuple(out)

    def format_word(self, x: int) -> str:
        w = self.words[self._check(x)]
        return " ".join(f"s{s + 1}" for s in w) if w else "e"

    def bruhat_leq(self, x: int, w: int) -> bool:
        x, w = self._check(x), self._check(w)
        if self.length[x] > self.length[w]:
            return False
        if self.n <= BRUHAT_DENSE_LIMIT:
            return bool(self.bruhat_matrix()[w, x])
        return bool(self.bruhat_row(w)[x])

    def bruhat_row(self, w: int) -> np.ndarray:
        """Boolean mask of {x : x <= w} via the subword property."""
        w = self._check(w)
        if self._bruhat is not None:
            return self._bruhat[w]
        row = np.zeros(self.n, dtype=bool)
        row[0] = True
        for s in reversed(self.words[w]):
            row = row | row[self.lmul[s]]
        return row

    def bruhat_matrix(self) -> np.ndarray:
        """``B[w, x]`` is True iff x <= w.  Built once; only for small groups."""
        if self._bruhat is None:
            if self.n > BRUHAT_DENSE_LIMIT:
                raise MemoryError("dense Bruhat matrix disabled above 4096 elements")
            b = np.zeros((self.n, self.n), dtype=bool)
            b[0, 0] = True
            for w in range(1, self.n):
                s = self.words[w][0]
                prev = b[self.lmul[s, w]]
                b[w] = prev | prev[self.lmul[s]]
            self._bruhat = b
        return self._bruhat

    def validate(self, samples: int = 2000, seed: int = 0) -> dict[str, bool]:
        """Group-axiom checks on the tables.  Returns named verdicts."""
        n, r = self.n, self.rank
        idx = np.arange(n)
        out = {}
        out["identity_length_zero"] = bool(self.length[0] == 0 and self.words[0] == ())
        out["generators_involutive"] = all(
            np.array_equal(self.lmul[s][self.lmul[s]], idx) and
            np.array_equal(self.rmul[s][self.rmul[s]], idx) for s in range(r))
        parity = True
        for s in range(r):
            d = self.length[self.lmul[s]] - self.length
            parity &= bool(np.all(np.abs(d) == 1))
            d = self.length[self.rmul[s]] - self.length
            parity &= bool(np.all(np.abs(d) == 1))
        out["length_parity"] = parity
        braid = True
        for s in range(r):
            for t in range(s + 1, r):
                m = self.matrix.m(s, t)
                cur = idx
                for _ in range(m):
                    cur = self.lmul[t][self.lmul[s][cur]]
                braid &= bool(np.array_equal(cur, idx))
        out["braid_relations"] = braid
        inv = self.inverse
        out["inverse_involution"] = bool(
            np.array_equal(inv[inv], idx) and np.array_equal(self.length[inv], self.length))
        out["unique_longest"] = bool(
            np.count_nonzero(self.length == self.length.max()) == 1 and
            all(self.length[self.rmul[s, self.w_max]] < self.nu for s in range(r)))
        rng = np.random.default_rng(seed)
        assoc = True
        for x, y, z in rng.integers(0, n, size=(samples, 3)):
            assoc &= self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
            assoc &= self.mul(x, self.inv(x)) == 0
        out["associativity_sampled"] = bool(assoc)
        order = expected_order(self.matrix)
        out["order_matches_type"] = order is None or order == n
        return out


def _bilinear_form(cm: CoxeterMatrix) -> np.ndarray:
    r = cm.rank
    b = np.empty((r, r))
    for i in range(r):
        for j in range(r):
            b[i, j] = -np.cos(np.pi / cm.m(i, j))
    return b


def build_group(cm: CoxeterMatrix | str | dict, cap: int = DEFAULT_CAP) -> GroupTable:
    """Enumerate the group of a Coxeter matrix.

    Works on the contragredient of the geometric representation: an element w
    is identified by the values of ``w . f0`` on the simple roots, where f0 is
    positive on every simple root.  A negative value at root s means s is a
    left descent of w.  Infinite groups run into ``cap``.
    """
    cm = parse_coxeter(cm)
    r = cm.rank
    form = _bilinear_form(cm)

    def key(y):
        return tuple(np.rint(y * 1e6).astype(np.int64).tolist())

    points = [np.ones(r)]
    lengths = [0]
    index = {key(points[0]): 0}
    level = [0]
    ell = 0
    while level:
        nxt = []
        for w in level:
            y = points[w]
            for s in range(r):
                if y[s] < 0:
                    continue
                z = y - 2.0 * y[s] * form[:, s]
                k = key(z)
                if k not in index:
                    if len(points) >= cap:
                        raise GroupTooLargeError(
                            f"group exceeds cap of {cap} elements")
                    index[k] = len(points)
                    points.append(z)
                    lengths.append(ell + 1)
                    nxt.append(index[k])
        level = nxt
        ell += 1

    n = len(points)
    lmul = np.empty((r, n), dtype=np.int64)
    for w, y in enumerate(points):
        for s in range(r):
            lmul[s, w] = index[key(y - 2.0 * y[s] * form[:, s])]
    length = np.asarray(lengths, dtype=np.int64)

    # ShortLex-minimal word: smallest left descent first, then recurse
    by_len = np.argsort(length, kind="stable")
    words: list[tuple[int, ...] | None] = [None] * n
    words[0] = ()
    for w in by_len[1:]:
        y = points[w]
        s = int(np.flatnonzero(y < 0)[0])
        words[w] = (s,) + words[int(lmul[s, w])]

    order = sorted(range(n), key=lambda w: (lengths[w], words[w]))
    new_of_old = np.empty(n, dtype=np.int64)
    new_of_old[order] = np.arange(n)
    lmul = new_of_old[lmul[:, order]]
    length = length[order]
    words = [words[w] for w in order]

    inverse = np.empty(n, dtype=np.int64)
    for w, word in enumerate(words):
        x = 0
        for s in word:
            x = lmul[s, x]
        inverse[w] = x
    rmul = np.empty_like(lmul)
    for s in range(r):
        rmul[s] = inverse[lmul[s][inverse]]
    return GroupTable(cm, length, words, lmul, rmul, inverse)
