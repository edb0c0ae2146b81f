"""
Exact Laurent polynomials in one variable ``v`` with integer coefficients.

Coefficients are Python ints, so arithmetic on this type never overflows.
The numpy kernels elsewhere use checked int64 and raise
:class:`CoefficientOverflow` instead of wrapping.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

__all__ = ["LaurentPoly", "CoefficientOverflow", "V", "ONE", "ZERO", "check_int64"]

# numpy kernels refuse to continue past this magnitude
INT64_SAFE = 2 ** 40


class CoefficientOverflow(OverflowError):
    def __init__(self, msg: str = "coefficient overflow"):
        super().__init__(msg)


def check_int64(arr: np.ndarray) -> np.ndarray:
    if arr.size and int(np.abs(arr).max()) >= INT64_SAFE:
        raise CoefficientOverflow()
    return arr


class LaurentPoly:
    """Immutable sparse map exponent -> nonzero integer coefficient."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int | None = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, (int, np.integer)):
            c = {0: int(coeffs)} if coeffs else {}
        else:
            c = {int(k): int(v) for k, v in coeffs.items() if v}
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> LaurentPoly:
        return cls({k: c})

    @classmethod
    def from_array(cls, arr, offset: int) -> LaurentPoly:
        """``arr[i]`` is the coefficient of ``v^(i - offset)``."""
        nz = np.flatnonzero(arr)
        return cls({int(i) - offset: int(arr[i]) for i in nz})

    def to_array(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficients for exponents lo..hi inclusive."""
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        for k, c in self._c.items():
            if not lo <= k <= hi:
                raise ValueError(f"exponent {k} outside window [{lo}, {hi}]")
            out[k - lo] = c
        return out

    def terms(self) -> dict[int, int]:
        return dict(self._c)

    def coeff(self, k: int) -> int:
        return self._c.get(k, 0)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of zero polynomial")
        return max(self._c)

    def min_degree(self) -> int:
        if not self._c:
            raise ValueError("degree of zero polynomial")
        return min(self._c)

    def bar(self) -> LaurentPoly:
        return LaurentPoly({-k: c for k, c in self._c.items()})

    def substitute_q(self) -> dict[int, int]:
        """Read an even-exponent polynomial as a polynomial in q = v^2."""
        if any(k % 2 for k in self._c):
            raise ValueError("odd exponent present")
        return {k // 2: c for k, c in self._c.items()}

    @staticmethod
    def _coerce(other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentPoly(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self._c) == 1:
                (k, c), = self._c.items()
                if c in (1, -1):
                    return LaurentPoly({k * e: c ** e})
            raise ValueError("only monomials are invertible")
        out = ONE
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            c = self._c[k]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "v" if k == 1 else f"v^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" + first) if first_sign == "-" else first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
V = LaurentPoly.monomial(1)
