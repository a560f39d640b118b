"""Tropical Lagrangian multi-sections over a complete 2-d fan.

A multi-section is stored cell by cell: sheets (lifts of maximal cones), ray
lifts and vertex lifts, each with a weight, plus face incidence. The
piecewise-linear function is recorded as a slope per sheet and as the value at
the primitive ray generator per ray lift; the function vanishes on every vertex
lift.

Cells are addressed by tuples ``("sheet", cone, idx)``, ``("ray", ray, idx)``
and ``("vertex", idx)``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import (
    FanMismatchError,
    InconsistentSplittingError,
    InvalidMultiSectionError,
    UnsupportedError,
    UnsupportedWeightsError,
)
from .fan import Fan2D
from .lattice import LatticeVec, add, neg, pair, vec


@dataclass(frozen=True)
class Sheet:
    cone: int
    slope: LatticeVec
    weight: int = 1
    # lift indices on the two rays of the cone, in Fan2D.cone_rays order
    faces: tuple = (0, 0)


@dataclass(frozen=True)
class RayLift:
    ray: int
    value: int  # value of the PL function at the primitive ray generator
    weight: int = 1
    vertex: int = 0


@dataclass(frozen=True)
class MultiSection:
    fan: Fan2D
    sheets: tuple  # sheets[i] = tuple of Sheet over maximal cone i
    ray_lifts: tuple  # ray_lifts[j] = tuple of RayLift over ray j
    vertex_weights: tuple  # one weight per vertex lift

    @property
    def rank(self) -> int:
        return sum(s.weight for s in self.sheets[0]) if self.sheets else 0

    def sheet(self, i: int, a: int) -> Sheet:
        return self.sheets[i][a]

    def incident_sheets(self, j: int, a: int) -> tuple[list[int], list[int]]:
        """Sheets of the left and right cone of ray ``j`` having lift ``a`` as a face."""
        left, right = self.fan.cones_of_ray(j)
        lhs = [s for s, sh in enumerate(self.sheets[left]) if sh.faces[1] == a]
        rhs = [s for s, sh in enumerate(self.sheets[right]) if sh.faces[0] == a]
        return lhs, rhs

    def sheet_vertex(self, i: int, a: int) -> int:
        sh = self.sheets[i][a]
        j = self.fan.cone_rays(i)[0]
        return self.ray_lifts[j][sh.faces[0]].vertex

    def cells(self):
        for i, group in enumerate(self.sheets):
            for a in range(len(group)):
                yield ("sheet", i, a)
        for j, group in enumerate(self.ray_lifts):
            for a in range(len(group)):
                yield ("ray", j, a)
        for w in range(len(self.vertex_weights)):
            yield ("vertex", w)

    def weight(self, cell) -> int:
        if cell[0] == "sheet":
            return self.sheets[cell[1]][cell[2]].weight
        if cell[0] == "ray":
            return self.ray_lifts[cell[1]][cell[2]].weight
        return self.vertex_weights[cell[1]]

    def faces_of(self, cell) -> list:
        """Immediate faces of a cell."""
        if cell[0] == "sheet":
            i, a = cell[1], cell[2]
            sh = self.sheets[i][a]
            r0, r1 = self.fan.cone_rays(i)
            return [("ray", r0, sh.faces[0]), ("ray", r1, sh.faces[1])]
        if cell[0] == "ray":
            return [("vertex", self.ray_lifts[cell[1]][cell[2]].vertex)]
        return []

    def restriction(self, cell):
        """The PL function restricted to a cell: slope, ray value, or 0 at the vertex."""
        if cell[0] == "sheet":
            return self.sheets[cell[1]][cell[2]].slope
        if cell[0] == "ray":
            return self.ray_lifts[cell[1]][cell[2]].value
        return 0

    def all_weights_one(self) -> bool:
        return all(s.weight == 1 for g in self.sheets for s in g) and all(
            l.weight == 1 for g in self.ray_lifts for l in g
        )


@dataclass(frozen=True)
class Diagnostic:
    cell: tuple
    invariant: str
    message: str

    def __str__(self):
        return f"{_cell_name(self.cell)}: {self.invariant}: {self.message}"


def _cell_name(cell) -> str:
    if not cell:
        return "multisection"
    kind = {"sheet": "sheet", "ray": "ray-lift", "vertex": "vertex", "cone": "cone", "ray-base": "ray"}[cell[0]]
    return kind + " " + ".".join(str(c) for c in cell[1:])


def validate(ms: MultiSection) -> list[Diagnostic]:
    """Check every structural invariant; returns one diagnostic per violation."""
    out: list[Diagnostic] = []
    fan = ms.fan
    k = fan.k
    if len(ms.sheets) != k or len(ms.ray_lifts) != k:
        return [Diagnostic((), "shape", f"expected {k} cones and {k} rays")]
    nv = len(ms.vertex_weights)
    if nv == 0:
        return [Diagnostic((), "shape", "no vertex lift")]
    for w, wt in enumerate(ms.vertex_weights):
        if wt < 1:
            out.append(Diagnostic(("vertex", w), "weight", f"weight {wt} < 1"))
    # index ranges first; later checks assume them
    broken = False
    for j, group in enumerate(ms.ray_lifts):
        for a, lift in enumerate(group):
            if lift.ray != j:
                out.append(Diagnostic(("ray", j, a), "projection", f"stored over ray {lift.ray}"))
            if not 0 <= lift.vertex < nv:
                out.append(Diagnostic(("ray", j, a), "incidence", f"vertex lift {lift.vertex} missing"))
                broken = True
            if lift.weight < 1:
                out.append(Diagnostic(("ray", j, a), "weight", f"weight {lift.weight} < 1"))
    for i, group in enumerate(ms.sheets):
        r0, r1 = fan.cone_rays(i)
        for a, sh in enumerate(group):
            if sh.cone != i:
                out.append(Diagnostic(("sheet", i, a), "projection", f"stored over cone {sh.cone}"))
            if sh.weight < 1:
                out.append(Diagnostic(("sheet", i, a), "weight", f"weight {sh.weight} < 1"))
            if len(sh.slope) != 2:
                out.append(Diagnostic(("sheet", i, a), "dimension", f"slope {sh.slope} is not in rank 2"))
                broken = True
            for side, r in ((0, r0), (1, r1)):
                if not 0 <= sh.faces[side] < len(ms.ray_lifts[r]):
                    out.append(Diagnostic(("sheet", i, a), "incidence", f"face on ray {r} missing"))
                    broken = True
    if broken:
        return out

    r = ms.rank
    for i, group in enumerate(ms.sheets):
        tr = sum(s.weight for s in group)
        if tr != r:
            out.append(Diagnostic(("cone", i), "trace", f"total weight {tr} != rank {r}"))
    for j, group in enumerate(ms.ray_lifts):
        tr = sum(l.weight for l in group)
        if tr != r:
            out.append(Diagnostic(("ray-base", j), "trace", f"total weight {tr} != rank {r}"))
    if sum(ms.vertex_weights) != r:
        out.append(Diagnostic(("vertex", 0), "trace", f"total vertex weight {sum(ms.vertex_weights)} != rank {r}"))

    # continuity of the PL function along every face
    for i, group in enumerate(ms.sheets):
        r0, r1 = fan.cone_rays(i)
        for a, sh in enumerate(group):
            for side, rj in ((0, r0), (1, r1)):
                lift = ms.ray_lifts[rj][sh.faces[side]]
                val = pair(sh.slope, fan.rays[rj])
                if val != lift.value:
                    out.append(Diagnostic(
                        ("sheet", i, a), "continuity",
                        f"slope {sh.slope} gives {val} on ray {fan.rays[rj]} but lift {rj}.{sh.faces[side]} has value {lift.value}",
                    ))
            v0 = ms.ray_lifts[r0][sh.faces[0]].vertex
            v1 = ms.ray_lifts[r1][sh.faces[1]].vertex
            if v0 != v1:
                out.append(Diagnostic(("sheet", i, a), "incidence", f"faces meet different vertex lifts {v0}, {v1}"))

    # local constancy of the trace around ray lifts and vertex lifts
    for j, group in enumerate(ms.ray_lifts):
        left, right = fan.cones_of_ray(j)
        for a, lift in enumerate(group):
            lhs, rhs = ms.incident_sheets(j, a)
            wl = sum(ms.sheets[left][s].weight for s in lhs)
            wr = sum(ms.sheets[right][s].weight for s in rhs)
            if wl != lift.weight or wr != lift.weight:
                out.append(Diagnostic(
                    ("ray", j, a), "local-trace",
                    f"weight {lift.weight} but incident sheet weights {wl} (cone {left}) and {wr} (cone {right})",
                ))
    for w, wt in enumerate(ms.vertex_weights):
        for j, group in enumerate(ms.ray_lifts):
            tr = sum(l.weight for l in group if l.vertex == w)
            if tr != wt:
                out.append(Diagnostic(("vertex", w), "local-trace", f"weight {wt} but lifts over ray {j} weigh {tr}"))
    return out


def require_valid(ms: MultiSection) -> None:
    diags = validate(ms)
    if diags:
        raise InvalidMultiSectionError(diags)


# ---------------------------------------------------------------- constructors


def _vertex_components(fan: Fan2D, sheets, ray_lifts_faces):
    """Union-find over sheets glued along ray lifts; returns component id per (cone, sheet)."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for i, group in enumerate(sheets):
        for a in range(len(group)):
            parent[("sheet", i, a)] = ("sheet", i, a)
    for j, lifts in enumerate(ray_lifts_faces):
        for a in range(lifts):
            parent[("ray", j, a)] = ("ray", j, a)
    for i, group in enumerate(sheets):
        r0, r1 = fan.cone_rays(i)
        for a, sh in enumerate(group):
            union(("sheet", i, a), ("ray", r0, sh.faces[0]))
            union(("sheet", i, a), ("ray", r1, sh.faces[1]))
    return find


def from_matchings(
    fan: Fan2D,
    slopes: Sequence[Sequence[Sequence[int]]],
    matchings: Sequence[Sequence[int]] | None = None,
) -> MultiSection:
    """Weight-one cover from per-cone slopes and per-ray sheet matchings.

    ``matchings[j][a]`` is the sheet of the right cone of ray ``j`` glued to
    sheet ``a`` of its left cone. With ``matchings=None`` the gluing is read off
    from equal ray values, which needs distinct values on every ray. Vertex
    lifts are the connected components of the resulting cover.
    """
    k = fan.k
    if len(slopes) != k:
        raise InconsistentSplittingError(f"expected slopes for {k} cones, got {len(slopes)}")
    sl = [[vec(m) for m in group] for group in slopes]
    r = len(sl[0])
    if any(len(g) != r for g in sl):
        raise InconsistentSplittingError("every cone needs the same number of sheets")
    if matchings is None:
        matchings = []
        for j in range(k):
            left, right = fan.cones_of_ray(j)
            v = fan.rays[j]
            lv = [pair(m, v) for m in sl[left]]
            rv = [pair(m, v) for m in sl[right]]
            if len(set(lv)) != r or sorted(lv) != sorted(rv):
                raise InconsistentSplittingError(
                    f"ray {j}: values {lv} / {rv} do not determine a matching; give it explicitly"
                )
            matchings.append([rv.index(x) for x in lv])
    if len(matchings) != k:
        raise InconsistentSplittingError(f"expected {k} matchings, got {len(matchings)}")
    faces = [[[None, None] for _ in range(r)] for _ in range(k)]
    values = []
    for j in range(k):
        perm = list(matchings[j])
        if sorted(perm) != list(range(r)):
            raise InconsistentSplittingError(f"matching on ray {j} is not a permutation: {perm}")
        left, right = fan.cones_of_ray(j)
        vals = []
        for a in range(r):
            faces[left][a][1] = a
            faces[right][perm[a]][0] = a
            vals.append(pair(sl[left][a], fan.rays[j]))
        values.append(vals)
    sheets = [
        [Sheet(i, sl[i][a], 1, tuple(faces[i][a])) for a in range(r)] for i in range(k)
    ]
    find = _vertex_components(fan, sheets, [r] * k)
    roots = sorted({find(("ray", j, a)) for j in range(k) for a in range(r)})
    vid = {root: n for n, root in enumerate(roots)}
    ray_lifts = tuple(
        tuple(RayLift(j, values[j][a], 1, vid[find(("ray", j, a))]) for a in range(r)) for j in range(k)
    )
    vweights = [0] * len(roots)
    for a in range(r):
        vweights[vid[find(("ray", 0, a))]] += 1
    return MultiSection(fan, tuple(tuple(g) for g in sheets), ray_lifts, tuple(vweights))


def from_bundle_slopes(fan: Fan2D, slopes: Sequence[Sequence[Sequence[int]]]) -> MultiSection:
    """The multi-section of an equivariantly split bundle.

    One sheet per distinct slope of each cone, weighted by multiplicity; one
    ray lift per distinct restriction value; a single vertex lift of weight r.
    """
    k = fan.k
    if len(slopes) != k:
        raise InconsistentSplittingError(f"expected slopes for {k} cones, got {len(slopes)}")
    counts = [Counter(vec(m) for m in group) for group in slopes]
    distinct = [list(dict.fromkeys(vec(m) for m in group)) for group in slopes]
    r = sum(counts[0].values())
    for i, c in enumerate(counts):
        if sum(c.values()) != r:
            raise InconsistentSplittingError(f"cone {i} has {sum(c.values())} slopes, expected {r}")
    ray_lifts = []
    lift_index = []
    for j in range(k):
        left, right = fan.cones_of_ray(j)
        v = fan.rays[j]
        lv = Counter()
        for m, n in counts[left].items():
            lv[pair(m, v)] += n
        rv = Counter()
        for m, n in counts[right].items():
            rv[pair(m, v)] += n
        if lv != rv:
            raise InconsistentSplittingError(
                f"ray {j} {v}: restrictions {dict(lv)} from cone {left} and {dict(rv)} from cone {right} disagree"
            )
        order = list(dict.fromkeys(pair(m, v) for m in distinct[left]))
        ray_lifts.append(tuple(RayLift(j, x, lv[x], 0) for x in order))
        lift_index.append({x: a for a, x in enumerate(order)})
    sheets = []
    for i in range(k):
        r0, r1 = fan.cone_rays(i)
        sheets.append(tuple(
            Sheet(i, m, counts[i][m], (lift_index[r0][pair(m, fan.rays[r0])], lift_index[r1][pair(m, fan.rays[r1])]))
            for m in distinct[i]
        ))
    return MultiSection(fan, tuple(sheets), tuple(ray_lifts), (r,))


def line_bundle_slopes(fan: Fan2D, coefficients: Sequence[int]) -> list[list[LatticeVec]]:
    """Slopes of the PL function of O(sum a_j D_j): pair(m(sigma), v_j) = -a_j on rays of sigma.

    Raises if some cone is not unimodular enough for an integral slope.
    """
    if len(coefficients) != fan.k:
        raise InconsistentSplittingError(f"need {fan.k} divisor coefficients")
    out = []
    for i in range(fan.k):
        r0, r1 = fan.cone_rays(i)
        (a, b), (c, d) = fan.rays[r0], fan.rays[r1]
        det = a * d - b * c
        p, q = -coefficients[r0], -coefficients[r1]
        # solve [a b; c d] m = (p, q)
        x_num, y_num = p * d - b * q, a * q - c * p
        if x_num % det or y_num % det:
            raise InconsistentSplittingError(f"divisor is not Cartier on cone {i}")
        out.append([(x_num // det, y_num // det)])
    return out


def line_bundle(fan: Fan2D, coefficients: Sequence[int]) -> MultiSection:
    return from_bundle_slopes(fan, line_bundle_slopes(fan, coefficients))


def zero_section(fan: Fan2D) -> MultiSection:
    return from_bundle_slopes(fan, [[(0, 0)]] * fan.k)


def disjoint_union(ms1: MultiSection, ms2: MultiSection) -> MultiSection:
    if ms1.fan != ms2.fan:
        raise FanMismatchError("multi-sections live over different fans")
    k = ms1.fan.k
    nv = len(ms1.vertex_weights)
    sheets = []
    for i in range(k):
        r0, r1 = ms1.fan.cone_rays(i)
        off0, off1 = len(ms1.ray_lifts[r0]), len(ms1.ray_lifts[r1])
        sheets.append(ms1.sheets[i] + tuple(
            replace(s, faces=(s.faces[0] + off0, s.faces[1] + off1)) for s in ms2.sheets[i]
        ))
    lifts = tuple(
        ms1.ray_lifts[j] + tuple(replace(l, vertex=l.vertex + nv) for l in ms2.ray_lifts[j]) for j in range(k)
    )
    return MultiSection(ms1.fan, tuple(sheets), lifts, ms1.vertex_weights + ms2.vertex_weights)


# ---------------------------------------------------------------- predicates


def _sheet_maps(ms: MultiSection, i: int) -> list[int]:
    """Weight-one gluing from cone i to cone i+1 across their common ray."""
    nxt = (i + 1) % ms.fan.k
    by_face = {sh.faces[0]: b for b, sh in enumerate(ms.sheets[nxt])}
    return [by_face[sh.faces[1]] for sh in ms.sheets[i]]


def crossing_matching(ms: MultiSection, i: int) -> list[int]:
    """``out[a]`` is the sheet of cone i+1 glued to sheet ``a`` of cone i (weights all 1)."""
    if not ms.all_weights_one():
        raise UnsupportedWeightsError("matchings are defined for weight-one covers only")
    return _sheet_maps(ms, i)


def monodromy(ms: MultiSection) -> tuple[int, ...]:
    """Permutation of the sheets of cone 0 after one anticlockwise loop around the origin."""
    if not ms.all_weights_one():
        raise UnsupportedWeightsError("monodromy needs all sheet and ray-lift weights equal to 1")
    perm = list(range(len(ms.sheets[0])))
    for i in range(ms.fan.k):
        step = _sheet_maps(ms, i)
        perm = [step[p] for p in perm]
    return tuple(perm)


def perm_orbits(perm: Sequence[int]) -> list[list[int]]:
    seen = set()
    orbits = []
    for a in range(len(perm)):
        if a in seen:
            continue
        orbit = []
        b = a
        while b not in seen:
            seen.add(b)
            orbit.append(b)
            b = perm[b]
        orbits.append(orbit)
    return orbits


def is_connected(ms: MultiSection) -> bool:
    parent = {c: c for c in ms.cells()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in list(parent):
        for f in ms.faces_of(c):
            a, b = find(c), find(f)
            if a != b:
                parent[a] = b
    return len({find(c) for c in parent}) == 1


def check_separable(ms: MultiSection, k: int) -> bool:
    """Distinct lifts of every k-dimensional cone carry distinct restrictions (k in {1, 2})."""
    if k == 1:
        return all(len({l.value for l in g}) == len(g) for g in ms.ray_lifts)
    if k == 2:
        return all(len({s.slope for s in g}) == len(g) for g in ms.sheets)
    raise UnsupportedError(f"separability is implemented for k in {{1, 2}}, got {k}")


def ramification_in_codim2(ms: MultiSection) -> bool:
    return ms.all_weights_one()


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True)
class CoverMorphism:
    """Surjective map of cover cells ``source -> target`` over the identity of the fan."""

    source: MultiSection
    target: MultiSection
    cell_map: dict = field(hash=False)


def identity_morphism(ms: MultiSection) -> CoverMorphism:
    return CoverMorphism(ms, ms, {c: c for c in ms.cells()})


def verify_cover_morphism(f: CoverMorphism) -> bool:
    src, tgt = f.source, f.target
    if src.fan != tgt.fan or validate(src) or validate(tgt):
        return False
    if src.rank != tgt.rank:
        return False
    src_cells = list(src.cells())
    tgt_cells = set(tgt.cells())
    if set(f.cell_map) != set(src_cells):
        return False
    trace = Counter()
    for c in src_cells:
        d = f.cell_map[c]
        if d not in tgt_cells:
            return False
        if c[0] != d[0] or (c[0] != "vertex" and c[1] != d[1]):
            return False
        if src.restriction(c) != tgt.restriction(d):
            return False
        if [f.cell_map[x] for x in src.faces_of(c)] != tgt.faces_of(d):
            return False
        trace[d] += src.weight(c)
    return all(trace[d] == tgt.weight(d) for d in tgt_cells)


def canonical_separation(ms: MultiSection) -> tuple[MultiSection, CoverMorphism]:
    """Identify lifts of each cone with equal restrictions; weights become traces."""
    fan = ms.fan
    cell_map = {}
    vertex_w = sum(ms.vertex_weights)
    for w in range(len(ms.vertex_weights)):
        cell_map[("vertex", w)] = ("vertex", 0)
    new_lifts = []
    for j, group in enumerate(ms.ray_lifts):
        order = list(dict.fromkeys(l.value for l in group))
        idx = {x: a for a, x in enumerate(order)}
        weights = Counter()
        for a, l in enumerate(group):
            cell_map[("ray", j, a)] = ("ray", j, idx[l.value])
            weights[l.value] += l.weight
        new_lifts.append(tuple(RayLift(j, x, weights[x], 0) for x in order))
    new_sheets = []
    for i, group in enumerate(ms.sheets):
        r0, r1 = fan.cone_rays(i)
        order = list(dict.fromkeys(s.slope for s in group))
        idx = {m: a for a, m in enumerate(order)}
        weights = Counter()
        faces = {}
        for a, s in enumerate(group):
            cell_map[("sheet", i, a)] = ("sheet", i, idx[s.slope])
            weights[s.slope] += s.weight
            faces[s.slope] = (cell_map[("ray", r0, s.faces[0])][2], cell_map[("ray", r1, s.faces[1])][2])
        new_sheets.append(tuple(Sheet(i, m, weights[m], faces[m]) for m in order))
    sep = MultiSection(fan, tuple(new_sheets), tuple(new_lifts), (vertex_w,))
    if sep == ms:
        sep = ms
    return sep, CoverMorphism(ms, sep, cell_map)


# ---------------------------------------------------------------- operations


def dual(ms: MultiSection) -> MultiSection:
    sheets = tuple(tuple(replace(s, slope=neg(s.slope)) for s in g) for g in ms.sheets)
    lifts = tuple(tuple(replace(l, value=-l.value) for l in g) for g in ms.ray_lifts)
    return MultiSection(ms.fan, sheets, lifts, ms.vertex_weights)


def union_c(ms1: MultiSection, ms2: MultiSection) -> MultiSection:
    """Combinatorial union: disjoint union, then equal-restriction lifts identified."""
    return canonical_separation(disjoint_union(ms1, ms2))[0]


def fiber_product(ms1: MultiSection, ms2: MultiSection) -> MultiSection:
    """Fiber product over the fan before separation: slopes add, weights multiply."""
    if ms1.fan != ms2.fan:
        raise FanMismatchError("multi-sections live over different fans")
    fan = ms1.fan
    n2v = len(ms2.vertex_weights)
    vweights = tuple(w1 * w2 for w1 in ms1.vertex_weights for w2 in ms2.vertex_weights)
    lifts = []
    for j in range(fan.k):
        g1, g2 = ms1.ray_lifts[j], ms2.ray_lifts[j]
        lifts.append(tuple(
            RayLift(j, l1.value + l2.value, l1.weight * l2.weight, l1.vertex * n2v + l2.vertex)
            for l1 in g1 for l2 in g2
        ))
    sheets = []
    for i in range(fan.k):
        r0, r1 = fan.cone_rays(i)
        n0, n1 = len(ms2.ray_lifts[r0]), len(ms2.ray_lifts[r1])
        sheets.append(tuple(
            Sheet(i, add(s1.slope, s2.slope), s1.weight * s2.weight,
                  (s1.faces[0] * n0 + s2.faces[0], s1.faces[1] * n1 + s2.faces[1]))
            for s1 in ms1.sheets[i] for s2 in ms2.sheets[i]
        ))
    return MultiSection(fan, tuple(sheets), tuple(lifts), vweights)


def product_c(ms1: MultiSection, ms2: MultiSection) -> MultiSection:
    """Combinatorial fiber product: the canonical separation of :func:`fiber_product`."""
    return canonical_separation(fiber_product(ms1, ms2))[0]


def cell_signature(ms: MultiSection):
    """Relabeling-invariant description of a separated cover (2-separable, one vertex lift).

    Two separated covers over the same fan are equal cell-for-cell iff their
    signatures agree, because their cells are determined by restrictions.
    """
    if len(ms.vertex_weights) != 1 or not check_separable(ms, 1) or not check_separable(ms, 2):
        raise UnsupportedError("cell signatures are defined for separated covers only")
    fan = ms.fan
    sheets = []
    for i, g in enumerate(ms.sheets):
        r0, r1 = fan.cone_rays(i)
        sheets.append(frozenset(
            (s.slope, s.weight, ms.ray_lifts[r0][s.faces[0]].value, ms.ray_lifts[r1][s.faces[1]].value) for s in g
        ))
    lifts = tuple(frozenset((l.value, l.weight) for l in g) for g in ms.ray_lifts)
    return (fan, tuple(sheets), lifts, ms.vertex_weights)


# ---------------------------------------------------------------- indecomposability


def sub_cover(ms: MultiSection, keep: set) -> MultiSection:
    """Sub-cover spanned by the sheets in ``keep`` (pairs (cone, idx)) and their faces.

    Weights of kept ray lifts and of the vertex are recomputed from the kept
    sheets. Only meaningful when ``keep`` is closed under ray gluing.
    """
    fan = ms.fan
    lift_w = Counter()
    for (i, a) in keep:
        sh = ms.sheets[i][a]
        j = fan.cone_rays(i)[1]
        lift_w[(j, sh.faces[1])] += sh.weight
    lifts = []
    lift_idx = {}
    for j, g in enumerate(ms.ray_lifts):
        out = []
        for a, l in enumerate(g):
            if (j, a) in lift_w:
                lift_idx[(j, a)] = len(out)
                out.append(RayLift(j, l.value, lift_w[(j, a)], 0))
        lifts.append(tuple(out))
    sheets = []
    for i, g in enumerate(ms.sheets):
        r0, r1 = fan.cone_rays(i)
        sheets.append(tuple(
            Sheet(i, s.slope, s.weight, (lift_idx[(r0, s.faces[0])], lift_idx[(r1, s.faces[1])]))
            for a, s in enumerate(g) if (i, a) in keep
        ))
    rank = sum(s.weight for s in sheets[0])
    return MultiSection(fan, tuple(sheets), tuple(lifts), (rank,))


def _gluing_closure(ms: MultiSection, start: Iterable[tuple[int, int]]) -> set:
    fan = ms.fan
    todo = list(start)
    seen = set(todo)
    while todo:
        i, a = todo.pop()
        sh = ms.sheets[i][a]
        r0, r1 = fan.cone_rays(i)
        for side, rj in ((0, r0), (1, r1)):
            lhs, rhs = ms.incident_sheets(rj, sh.faces[side])
            left, right = fan.cones_of_ray(rj)
            for c, b in [(left, x) for x in lhs] + [(right, x) for x in rhs]:
                if (c, b) not in seen:
                    seen.add((c, b))
                    todo.append((c, b))
    return seen


def find_decomposition(ms: MultiSection):
    """Search for two proper sub-covers whose combinatorial union is ``ms``.

    Only separated covers are searched (others return ``None``). Exponential in the number of sheets over cone 0. Returns the pair or ``None``.
    """
    n0 = len(ms.sheets[0])
    all_sheets = {(i, a) for i, g in enumerate(ms.sheets) for a in range(len(g))}
    try:
        target = cell_signature(ms)
    except UnsupportedError:
        return None
    for size in range(1, n0):
        for chosen in itertools.combinations(range(n0), size):
            part = _gluing_closure(ms, [(0, a) for a in chosen])
            if {a for (i, a) in part if i == 0} != set(chosen):
                continue
            rest = all_sheets - part
            if not rest:
                continue
            a_cov, b_cov = sub_cover(ms, part), sub_cover(ms, rest)
            if validate(a_cov) or validate(b_cov):
                continue
            u = union_c(a_cov, b_cov)
            if cell_signature(u) == target:
                return a_cov, b_cov
    return None


def is_indecomposable_dim2(ms: MultiSection) -> bool:
    """Combinatorial indecomposability test for weight-one covers of a 2-d fan.

    Necessary conditions: connected, 1-separable, ramified only over the
    origin. Maximality is replaced by the proxy "canonical separation is the
    identity", and a direct search rules out decompositions by two sub-covers.
    """
    if not ms.all_weights_one():
        raise UnsupportedWeightsError("indecomposability test needs all sheet and ray-lift weights equal to 1")
    require_valid(ms)
    if not is_connected(ms):
        return False
    if not check_separable(ms, 1) or not ramification_in_codim2(ms):
        return False
    if canonical_separation(ms)[0] != ms:
        return False
    return find_decomposition(ms) is None


def frame_labels(ms: MultiSection, i: int) -> list[int]:
    """Frame labels over cone ``i``: sheet indices, repeated according to weight."""
    return [a for a, s in enumerate(ms.sheets[i]) for _ in range(s.weight)]
