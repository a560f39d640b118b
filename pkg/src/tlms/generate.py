"""Seeded random instances: fans, rank-2 indecomposable covers, and assorted covers."""
from __future__ import annotations

import random

from .errors import InconsistentSplittingError, NotCompleteError
from .fan import Fan2D, build_complete_fan_2d
from .lattice import cross, primitive
from .multisection import (
    MultiSection,
    check_separable,
    disjoint_union,
    fiber_product,
    from_bundle_slopes,
    from_matchings,
    line_bundle,
    monodromy,
    zero_section,
)

DEFAULT_SEED = 20240611


def random_fan(rng: random.Random, k: int, bound: int = 3) -> Fan2D:
    while True:
        rays = set()
        while len(rays) < k:
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if v != (0, 0):
                rays.add(primitive(v))
        if len(rays) != k:
            continue
        try:
            return build_complete_fan_2d(sorted(rays))
        except NotCompleteError:
            continue


def random_smooth_fan(rng: random.Random, k: int, bound: int = 4) -> Fan2D:
    """Smooth complete fan with ``k`` rays: a minimal surface blown up at random torus-fixed points."""
    while True:
        a = rng.randint(0, 2)
        base = rng.choice([[(1, 0), (0, 1), (-1, -1)], [(1, 0), (0, 1), (-1, a), (0, -1)]])
        if len(base) > k:
            continue
        rays = list(base)
        while len(rays) < k:
            i = rng.randrange(len(rays))
            u, v = rays[i], rays[(i + 1) % len(rays)]
            rays.insert(i + 1, (u[0] + v[0], u[1] + v[1]))
        if max(abs(x) for r in rays for x in r) <= bound:
            return build_complete_fan_2d(rays)


def _solve_slope(u, v, x, y):
    """Integral m with pair(m, u) = x and pair(m, v) = y, or None."""
    det = cross(u, v)
    p = x * v[1] - y * u[1]
    q = y * u[0] - x * v[0]
    if p % det or q % det:
        return None
    return (p // det, q // det)


def random_rank2_cover(rng: random.Random, fan: Fan2D, bound: int = 5, tries: int = 200) -> MultiSection | None:
    """A 1-separable rank-2 cover of ``fan`` whose monodromy swaps the two sheets.

    Sheet ``a`` takes value ``x[a][j]`` on ray ``j`` (values differ between
    sheets); interior rays keep labels and the closing ray 0 swaps them.
    """
    k = fan.k
    rays = fan.rays
    for _ in range(tries):
        x = [[0] * k for _ in range(2)]
        for j in range(k):
            x[0][j] = rng.randint(-3, 3)
            x[1][j] = rng.choice([t for t in range(-3, 4) if t != x[0][j]])
        slopes = []
        for i in range(k):
            j = (i + 1) % k
            cone = []
            for a in range(2):
                far = x[a][j] if j else x[1 - a][0]
                cone.append(_solve_slope(rays[i], rays[j], x[a][i], far))
            slopes.append(cone)
        if any(m is None for cone in slopes for m in cone):
            continue
        if any(abs(c) > bound for cone in slopes for m in cone for c in m):
            continue
        ms = from_matchings(fan, slopes)
        if check_separable(ms, 1) and monodromy(ms) == (1, 0):
            return ms
    return None


def rank2_corpus(seed: int = DEFAULT_SEED, count: int = 500, min_rays: int = 3, max_rays: int = 8):
    rng = random.Random(seed)
    out = []
    sizes = list(range(min_rays, max_rays + 1))
    while len(out) < count:
        # cycle through fan sizes so large fans are not crowded out
        k = sizes[len(out) % len(sizes)]
        fan = random_smooth_fan(rng, k) if rng.random() < 0.6 else random_fan(rng, k, bound=2)
        ms = random_rank2_cover(rng, fan)
        if ms is not None:
            out.append(ms)
    return out


def random_line_bundle(rng: random.Random, fan: Fan2D, bound: int = 2) -> MultiSection | None:
    for _ in range(20):
        try:
            return line_bundle(fan, [rng.randint(-bound, bound) for _ in range(fan.k)])
        except InconsistentSplittingError:
            continue
    return None


def random_multisection(rng: random.Random, fan: Fan2D | None = None, max_rank: int = 4) -> MultiSection:
    """A valid, possibly weighted or non-separated, cover built from random pieces."""
    fan = fan or random_fan(rng, rng.randint(3, 6))
    pieces = []
    rank = 0
    while rank < max_rank:
        kind = rng.choice(["zero", "line", "line", "rank2", "weighted"])
        piece = None
        if kind == "zero":
            piece = zero_section(fan)
        elif kind == "line":
            piece = random_line_bundle(rng, fan)
        elif kind == "rank2" and rank + 2 <= max_rank:
            piece = random_rank2_cover(rng, fan, bound=3, tries=50)
        elif kind == "weighted":
            lb = random_line_bundle(rng, fan)
            if lb is not None and rank + 2 <= max_rank:
                slopes = [[lb.sheets[i][0].slope] * 2 for i in range(fan.k)]
                piece = from_bundle_slopes(fan, slopes)
        if piece is None:
            if rank:
                break
            continue
        pieces.append(piece)
        rank += piece.rank
        if rng.random() < 0.4:
            break
    ms = pieces[0]
    for p in pieces[1:]:
        ms = disjoint_union(ms, p)
    if rng.random() < 0.2 and ms.rank <= 2:
        lb = random_line_bundle(rng, fan)
        if lb is not None:
            ms = fiber_product(ms, lb)
    return ms


def random_separable_multisection(rng: random.Random, max_rank: int = 4) -> MultiSection:
    """Weight-one, 1-separable disjoint union of line bundles and rank-2 covers, rank 1 to ``max_rank``."""
    target = rng.randint(1, max_rank)
    while True:
        fan = random_fan(rng, rng.randint(3, 6))
        pieces = []
        rank = 0
        while rank < target:
            piece = None
            if target - rank >= 2 and rng.random() < 0.5:
                piece = random_rank2_cover(rng, fan, bound=3, tries=50)
            if piece is None:
                piece = random_line_bundle(rng, fan, bound=4)
            if piece is None:
                break
            pieces.append(piece)
            rank += piece.rank
        if rank != target:
            continue
        ms = pieces[0]
        for p in pieces[1:]:
            ms = disjoint_union(ms, p)
        if check_separable(ms, 1):
            return ms
