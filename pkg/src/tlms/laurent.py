"""Sparse Laurent polynomials in characters z^m, m in M, with Fraction coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import FanMismatchError, RegularityError, SizeMismatchError
from .lattice import ConeGens, add, in_dual_cone, in_perp, sub, vec


class LaurentPoly:
    """Immutable map exponent -> nonzero coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[vec(e)] = c
        self._terms = clean

    @classmethod
    def monomial(cls, exponent, coeff=1) -> "LaurentPoly":
        return cls({tuple(exponent): coeff})

    @classmethod
    def constant(cls, c, n: int = 2) -> "LaurentPoly":
        return cls({(0,) * n: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def exponents(self):
        return self._terms.keys()

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({e: c * Fraction(other) for e, c in self._terms.items()})
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = add(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            parts.append(f"{cs} * z^({','.join(str(x) for x in e)})")
        return " + ".join(parts)


def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def is_regular_on(p: LaurentPoly, c: ConeGens | None) -> bool:
    return all(in_dual_cone(e, c) for e in p.exponents())


def restrict_to_perp(p: LaurentPoly, c: ConeGens | None) -> LaurentPoly:
    """Keep the terms whose exponent vanishes on ``c``; the rest vanish along its orbit."""
    if not is_regular_on(p, c):
        raise RegularityError(f"{p} is not regular on {c.rays if c else 'the zero cone'}")
    return LaurentPoly({e: x for e, x in p.terms.items() if in_perp(e, c)})


LaurentMatrix = tuple  # tuple[tuple[LaurentPoly, ...], ...]


def lmat(rows) -> LaurentMatrix:
    out = tuple(tuple(x for x in row) for row in rows)
    if any(len(row) != len(out) for row in out):
        raise SizeMismatchError("Laurent matrix is not square")
    return out


def lmat_identity(r: int, n: int = 2) -> LaurentMatrix:
    one, zero = LaurentPoly.constant(1, n), LaurentPoly()
    return tuple(tuple(one if i == j else zero for j in range(r)) for i in range(r))


def mat_mul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    r = len(a)
    if len(b) != r:
        raise SizeMismatchError(f"cannot multiply Laurent matrices of sizes {r} and {len(b)}")
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = LaurentPoly()
            for t in range(r):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def lmat_str(a: LaurentMatrix) -> str:
    return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in a)


def monomial_matrix(ms, i: int, j: int) -> LaurentMatrix:
    """z^{m(sigma_i^a) - m(sigma_j^b)} where the difference is regular on the shared ray, else 0.

    Sheets are taken as frame labels (a sheet of weight w contributes w labels).
    """
    from .multisection import frame_labels

    fan = ms.fan
    c = fan.intersection(i, j) if i != j else fan.max_cone(i)
    if i != j and c is None:
        raise FanMismatchError(f"cones {i} and {j} are not adjacent")
    li, lj = frame_labels(ms, i), frame_labels(ms, j)
    if len(li) != len(lj):
        raise SizeMismatchError("cones carry different numbers of frame labels")
    rows = []
    for a in li:
        row = []
        for b in lj:
            d = sub(ms.sheets[i][a].slope, ms.sheets[j][b].slope)
            row.append(LaurentPoly.monomial(d) if in_dual_cone(d, c) else LaurentPoly())
        rows.append(tuple(row))
    return tuple(rows)
