"""Exact integer lattice arithmetic for N and its dual M.

Lattice vectors are plain tuples of ints. Cones are given by generator lists
(:class:`ConeGens`); membership tests are generator-wise, which is exact for
rays and for the simplicial cones of a complete 2-d fan.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DegenerateInputError, DimensionError

LatticeVec = tuple  # tuple[int, ...]


def vec(coords: Iterable[int]) -> LatticeVec:
    out = tuple(coords)
    for c in out:
        if not isinstance(c, int) or isinstance(c, bool):
            raise TypeError(f"lattice coordinates must be int, got {c!r}")
    return out


def pair(m: Sequence[int], v: Sequence[int]) -> int:
    """Evaluate the character ``m`` on the lattice point ``v``."""
    if len(m) != len(v):
        raise DimensionError(f"cannot pair vectors of length {len(m)} and {len(v)}")
    return sum(a * b for a, b in zip(m, v))


def add(u: Sequence[int], v: Sequence[int]) -> LatticeVec:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> LatticeVec:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Sequence[int]) -> LatticeVec:
    return tuple(-a for a in u)


def zero(n: int) -> LatticeVec:
    return (0,) * n


def primitive(v: Sequence[int]) -> LatticeVec:
    g = 0
    for c in v:
        g = gcd(g, c)
    if g == 0:
        raise DegenerateInputError("the zero vector has no primitive generator")
    return tuple(c // g for c in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g == 1


def cross(u: Sequence[int], v: Sequence[int]) -> int:
    """Determinant of the 2x2 matrix with columns ``u``, ``v``."""
    if len(u) != 2 or len(v) != 2:
        raise DimensionError("cross product is only defined in rank 2")
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class ConeGens:
    """A rational strictly convex cone given by primitive generators."""

    rays: tuple

    def __post_init__(self):
        rays = tuple(vec(r) for r in self.rays)
        if not rays:
            raise DegenerateInputError("a cone needs at least one generator")
        n = len(rays[0])
        for r in rays:
            if len(r) != n:
                raise DimensionError("cone generators have different lengths")
            if not is_primitive(r):
                raise DegenerateInputError(f"generator {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise DegenerateInputError("repeated cone generator")
        if n == 2:
            if len(rays) > 2:
                raise DegenerateInputError("a strictly convex cone in rank 2 has at most 2 generators")
            if len(rays) == 2 and cross(*rays) == 0:
                raise DegenerateInputError(f"generators {rays[0]} and {rays[1]} are antiparallel")
        object.__setattr__(self, "rays", rays)

    @property
    def ambient_rank(self) -> int:
        return len(self.rays[0])

    def __iter__(self):
        return iter(self.rays)


def cone(*rays) -> ConeGens:
    return ConeGens(tuple(rays))



def in_dual_cone(m: Sequence[int], c: ConeGens | None) -> bool:
    """True iff ``m`` is nonnegative on every generator of ``c``.

    ``c=None`` stands for the zero cone, whose dual is all of M.
    """
    if c is None:
        return True
    return all(pair(m, v) >= 0 for v in c.rays)


def in_perp(m: Sequence[int], c: ConeGens | None) -> bool:
    if c is None:
        return True
    return all(pair(m, v) == 0 for v in c.rays)
