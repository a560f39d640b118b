"""Complete fans. Algorithms are 2-dimensional; general-n fans are plain data."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

from .errors import DegenerateInputError, DimensionError, NotCompleteError
from .lattice import ConeGens, cross, primitive, vec


def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass(frozen=True)
class Fan2D:
    """Complete fan in a rank-2 lattice.

    ``rays[i]`` are primitive and anticlockwise; maximal cone ``i`` is
    ``cone(rays[i], rays[i+1 mod k])``. Cones ``i`` and ``i+1`` share ray
    ``i+1``; the last cone and cone 0 share ray 0.
    """

    rays: tuple

    def __post_init__(self):
        rays = tuple(tuple(r) for r in self.rays)
        k = len(rays)
        if k < 3:
            raise NotCompleteError(f"a complete 2-d fan needs at least 3 rays, got {k}")
        if len(set(rays)) != k:
            raise NotCompleteError("duplicate ray")
        for i in range(k):
            u, v = rays[i], rays[(i + 1) % k]
            if cross(u, v) <= 0:
                raise NotCompleteError(f"angular gap between {u} and {v} is not < pi")
        object.__setattr__(self, "rays", rays)

    @property
    def k(self) -> int:
        return len(self.rays)

    @property
    def dim(self) -> int:
        return 2

    def cone_rays(self, i: int) -> tuple[int, int]:
        """Indices of the two rays of maximal cone ``i``."""
        return i, (i + 1) % self.k

    def max_cone(self, i: int) -> ConeGens:
        a, b = self.cone_rays(i)
        return ConeGens((self.rays[a], self.rays[b]))

    def ray_cone(self, j: int) -> ConeGens:
        return ConeGens((self.rays[j],))

    def cones_of_ray(self, j: int) -> tuple[int, int]:
        """(left, right) maximal cones around ray ``j``: crossing left -> right is anticlockwise."""
        return (j - 1) % self.k, j

    def crossing_ray(self, i: int) -> int:
        """Ray passed when moving anticlockwise from cone ``i`` to cone ``i+1``."""
        return (i + 1) % self.k

    def intersection(self, i: int, j: int) -> ConeGens | None:
        """sigma_i ∩ sigma_j as a cone; ``None`` is the zero cone."""
        if i == j:
            return self.max_cone(i)
        r = shared_ray(self, i, j)
        return None if r is None else ConeGens((r,))


def build_complete_fan_2d(rays: Sequence[Sequence[int]]) -> Fan2D:
    """Primitivize ``rays`` and sort them anticlockwise starting at the first input ray."""
    prim = []
    for r in rays:
        r = vec(r)
        if len(r) != 2:
            raise DimensionError(f"ray {r} is not in a rank-2 lattice")
        prim.append(primitive(r))
    if len(set(prim)) != len(prim):
        raise NotCompleteError("duplicate ray after primitivization")
    if len(prim) < 3:
        raise NotCompleteError(f"a complete 2-d fan needs at least 3 rays, got {len(prim)}")
    start = prim[0]
    # rotate so the first input ray sorts first
    key = cmp_to_key(lambda u, v: _angle_cmp(_rel(start, u), _rel(start, v)))
    ordered = sorted(prim, key=key)
    return Fan2D(tuple(ordered))


def _rel(start, v):
    # v expressed in the frame (start, J*start); J = rotation by +pi/2. Orientation preserving.
    x = v[0] * start[0] + v[1] * start[1]
    y = cross(start, v)
    return (x, y)


def shared_ray(f: Fan2D, i: int, j: int):
    """The common ray of two distinct consecutive maximal cones, else ``None``."""
    k = f.k
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"cone index out of range for a fan with {k} cones")
    if i == j:
        return None
    if (i + 1) % k == j:
        return f.rays[j]
    if (j + 1) % k == i:
        return f.rays[i]
    return None


@dataclass(frozen=True)
class Fan:
    """A fan in any rank, held as data: cones and user-supplied face relations."""

    rank: int
    cones: tuple
    faces: tuple = ()  # pairs (i, j): cone i is a face of cone j

    def __post_init__(self):
        cones = tuple(c if isinstance(c, ConeGens) else ConeGens(tuple(c)) for c in self.cones)
        for c in cones:
            if c.ambient_rank != self.rank:
                raise DimensionError(f"cone {c.rays} does not live in rank {self.rank}")
        for i, j in self.faces:
            if not (0 <= i < len(cones) and 0 <= j < len(cones)):
                raise DegenerateInputError(f"face relation ({i}, {j}) names a missing cone")
            if not set(cones[i].rays) <= set(cones[j].rays):
                raise DegenerateInputError(f"cone {i} is not a face of cone {j}")
        object.__setattr__(self, "cones", cones)
        object.__setattr__(self, "faces", tuple(tuple(p) for p in self.faces))
