"""Small dense matrices over Fraction, stored as tuples of row tuples."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SizeMismatchError

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def mat(rows: Sequence[Sequence]) -> Matrix:
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    n = len(out)
    if any(len(row) != n for row in out):
        raise SizeMismatchError("matrix is not square")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int) -> Matrix:
    return tuple((Fraction(0),) * n for _ in range(n))


def is_identity(a: Matrix) -> bool:
    return a == identity(len(a))


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    if len(b) != n:
        raise SizeMismatchError(f"cannot multiply {n}x{n} by {len(b)}x{len(b)}")
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def mul_all(mats: Sequence[Matrix], n: int) -> Matrix:
    out = identity(n)
    for m in mats:
        out = mul(out, m)
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b):
        raise SizeMismatchError("size mismatch")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b):
        raise SizeMismatchError("size mismatch")
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def power(a: Matrix, e: int) -> Matrix:
    out = identity(len(a))
    for _ in range(e):
        out = mul(out, a)
    return out


def det(a: Matrix) -> Fraction:
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return sign * d


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, p = len(a), len(b)
    z = Fraction(0)
    top = tuple(tuple(row) + (z,) * p for row in a)
    bottom = tuple((z,) * n + tuple(row) for row in b)
    return top + bottom


def permute(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    """``out[rows[i]][cols[j]] = a[i][j]``."""
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[rows[i]][cols[j]] = a[i][j]
    return tuple(tuple(r) for r in out)


def fmt_rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt(a: Matrix) -> str:
    """Inline form ``[a b; c d]``."""
    return "[" + "; ".join(" ".join(fmt_rat(x) for x in row) for row in a) + "]"
