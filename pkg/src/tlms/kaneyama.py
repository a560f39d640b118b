"""Kaneyama data: coefficient matrices per ordered pair of maximal cones.

Convention (row order): ``g[(i, j)][a][b]`` is the coefficient of frame
vector ``b`` over cone ``j`` in the expansion of frame vector ``a`` over cone
``i``. The Laurent transition carries the monomial z^{m(i,a) - m(j,b)} and the
cocycle condition reads ``g[(i, j)] @ g[(j, l)] == g[(i, l)]``. A gauge family
``h`` relates two data by ``h[i] @ g[(i, j)] == g2[(i, j)] @ h[j]``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import ratmat
from .errors import FanMismatchError, InvalidMorphismError, RankMismatchError, SupportError
from .laurent import LaurentPoly, LaurentMatrix
from .lattice import in_dual_cone, sub
from .multisection import (
    CoverMorphism,
    MultiSection,
    canonical_separation,
    disjoint_union,
    frame_labels,
    verify_cover_morphism,
)


@dataclass(frozen=True)
class KaneyamaData:
    ms: MultiSection
    mats: Mapping = field(hash=False)  # (i, j) -> ratmat.Matrix

    @property
    def rank(self) -> int:
        return self.ms.rank

    def __getitem__(self, key):
        return self.mats[key]

    @classmethod
    def from_adjacent(cls, ms: MultiSection, adjacent: Sequence) -> "KaneyamaData":
        """Complete data from the k transitions ``adjacent[i]`` for cone i -> cone i+1.

        Pairs i < j get path products, reversed pairs get inverses, and the
        closing pair (k-1, 0) keeps the supplied matrix so that an open loop
        shows up as a cocycle failure.
        """
        k = ms.fan.k
        r = ms.rank
        if len(adjacent) != k:
            raise RankMismatchError(f"need {k} adjacent transitions, got {len(adjacent)}")
        adj = [ratmat.mat(a) for a in adjacent]
        mats = {}
        for i in range(k):
            mats[(i, i)] = ratmat.identity(r)
            acc = ratmat.identity(r)
            for j in range(i + 1, k):
                acc = ratmat.mul(acc, adj[j - 1])
                mats[(i, j)] = acc
                mats[(j, i)] = ratmat.inverse(acc)
        mats[(k - 1, 0)] = adj[k - 1]
        return cls(ms, mats)

    @classmethod
    def complete(cls, ms: MultiSection, given: Mapping) -> "KaneyamaData":
        """Accept either all ordered pairs or just the k adjacent ones."""
        k = ms.fan.k
        given = {key: ratmat.mat(v) for key, v in given.items()}
        if all((i, j) in given for i in range(k) for j in range(k)):
            return cls(ms, given)
        adjacent = []
        for i in range(k):
            key = (i, (i + 1) % k)
            if key not in given:
                raise RankMismatchError(f"Kaneyama data is missing pair {key}")
            adjacent.append(given[key])
        return cls.from_adjacent(ms, adjacent)


@dataclass(frozen=True)
class KDiagnostic:
    condition: str  # "G1", "G2", "G3", "shape"
    cones: tuple
    message: str

    def __str__(self):
        return f"{self.condition} {self.cones}: {self.message}"


def _slope(ms: MultiSection, i: int, a: int):
    return ms.sheets[i][frame_labels(ms, i)[a]].slope


def _vertex(ms: MultiSection, i: int, a: int):
    return ms.sheet_vertex(i, frame_labels(ms, i)[a])


def support_violations(ms: MultiSection, i: int, j: int, g) -> list[tuple[int, int]]:
    """Entries of ``g`` (for the pair (i, j)) that break the support condition."""
    c = ms.fan.intersection(i, j)
    bad = []
    for a, row in enumerate(g):
        for b, x in enumerate(row):
            if x == 0:
                continue
            d = sub(_slope(ms, i, a), _slope(ms, j, b))
            if not in_dual_cone(d, c) or _vertex(ms, i, a) != _vertex(ms, j, b):
                bad.append((a, b))
    return bad


def validate_kaneyama(ms: MultiSection, g: KaneyamaData) -> list[KDiagnostic]:
    k = ms.fan.k
    r = ms.rank
    out = []
    if g.rank != r:
        raise RankMismatchError(f"data has rank {g.rank}, multi-section has rank {r}")
    for i in range(k):
        for j in range(k):
            m = g.mats.get((i, j))
            if m is None:
                out.append(KDiagnostic("shape", (i, j), "missing matrix"))
            elif len(m) != r or any(len(row) != r for row in m):
                raise RankMismatchError(f"matrix for {(i, j)} is not {r}x{r}")
    if out:
        return out
    for i in range(k):
        if not ratmat.is_identity(g[(i, i)]):
            out.append(KDiagnostic("G1", (i, i), f"expected identity, got {ratmat.fmt(g[(i, i)])}"))
    for i in range(k):
        for j in range(k):
            for a, b in support_violations(ms, i, j, g[(i, j)]):
                out.append(KDiagnostic("G2", (i, j), f"entry ({a},{b}) = {g[(i, j)][a][b]} outside the support"))
    for i in range(k):
        for j in range(k):
            for l in range(k):
                lhs = ratmat.mul(g[(i, j)], g[(j, l)])
                if lhs != g[(i, l)]:
                    out.append(KDiagnostic(
                        "G3", (i, j, l),
                        f"{ratmat.fmt(g[(i, j)])} * {ratmat.fmt(g[(j, l)])} = {ratmat.fmt(lhs)} != {ratmat.fmt(g[(i, l)])}",
                    ))
    return out


def assemble_transition(ms: MultiSection, g: KaneyamaData, i: int, j: int) -> LaurentMatrix:
    """Laurent transition: coefficient times z^{m(i,a) - m(j,b)} entrywise."""
    m = g[(i, j)]
    bad = support_violations(ms, i, j, m)
    if bad:
        raise SupportError(f"pair {(i, j)}: entries {bad} violate the support condition")
    rows = []
    for a, row in enumerate(m):
        rows.append(tuple(
            LaurentPoly.monomial(sub(_slope(ms, i, a), _slope(ms, j, b)), x) if x else LaurentPoly()
            for b, x in enumerate(row)
        ))
    return tuple(rows)


def gauge_support_ok(ms: MultiSection, h: Sequence) -> list[tuple[int, int, int]]:
    """Entries (cone, a, b) of a gauge family that break its support condition."""
    bad = []
    for i, hi in enumerate(h):
        c = ms.fan.max_cone(i)
        for a, row in enumerate(hi):
            for b, x in enumerate(row):
                if x and not in_dual_cone(sub(_slope(ms, i, a), _slope(ms, i, b)), c):
                    bad.append((i, a, b))
    return bad


def verify_equivalence(ms: MultiSection, g: KaneyamaData, g2: KaneyamaData, h: Sequence) -> bool:
    """True iff ``h`` is supported, invertible, and intertwines ``g`` with ``g2`` on every pair."""
    k = ms.fan.k
    h = [ratmat.mat(x) for x in h]
    if len(h) != k or gauge_support_ok(ms, h):
        return False
    if any(ratmat.det(x) == 0 for x in h):
        return False
    for i in range(k):
        for j in range(k):
            if ratmat.mul(h[i], g[(i, j)]) != ratmat.mul(g2[(i, j)], h[j]):
                return False
    return True


def label_map(f: CoverMorphism, i: int) -> list[int]:
    """Where each frame label of the source over cone ``i`` lands among target labels."""
    tgt = f.target
    offsets = {}
    pos = 0
    for b, s in enumerate(tgt.sheets[i]):
        offsets[b] = pos
        pos += s.weight
    used = Counter()
    out = []
    for a in frame_labels(f.source, i):
        b = f.cell_map[("sheet", i, a)][2]
        out.append(offsets[b] + used[b])
        used[b] += 1
    return out


def push_forward(g: KaneyamaData, f: CoverMorphism) -> KaneyamaData:
    if f.source != g.ms:
        raise InvalidMorphismError("morphism source is not the multi-section of the data")
    if not verify_cover_morphism(f):
        raise InvalidMorphismError("not a valid cover morphism")
    k = f.source.fan.k
    perms = [label_map(f, i) for i in range(k)]
    mats = {(i, j): ratmat.permute(m, perms[i], perms[j]) for (i, j), m in g.mats.items()}
    return KaneyamaData(f.target, mats)


def direct_sum(g1: KaneyamaData, g2: KaneyamaData) -> KaneyamaData:
    """Block-diagonal data, pushed to the combinatorial union of the two multi-sections."""
    if g1.ms.fan != g2.ms.fan:
        raise FanMismatchError("Kaneyama data over different fans")
    du = disjoint_union(g1.ms, g2.ms)
    block = KaneyamaData(du, {key: ratmat.block_diag(g1[key], g2[key]) for key in g1.mats})
    _, q = canonical_separation(du)
    return push_forward(block, q)
