"""Semi-flat cocycles, wall-crossing factors and the consistency loop (dimension 2).

A crossing is the anticlockwise passage from cone i to cone i+1 over ray
i+1. The semi-flat transition of a crossing is the sheet matching scaled by a
rank-1 local system; a wall factor Theta for the ray is written in the frame
of the source cone, so the corrected transition is ``Theta @ semi-flat``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from . import ratmat
from .errors import NilpotencyError, NotIndecomposableError, ObstructionError, SupportError, UnsupportedWeightsError
from .kaneyama import KaneyamaData, assemble_transition, validate_kaneyama
from .laurent import restrict_to_perp
from .lattice import in_dual_cone, sub
from .multisection import MultiSection, crossing_matching, monodromy, perm_orbits


@dataclass(frozen=True)
class LocalSystem:
    """Scalars ``scalars[(i, a)]`` for sheet ``a`` crossing from cone i to cone i+1."""

    scalars: Mapping = field(hash=False)

    @property
    def monodromy(self) -> Fraction:
        out = Fraction(1)
        for x in self.scalars.values():
            out *= x
        return out


def build_semiflat_cocycle(ms: MultiSection, r: int | None = None):
    """Normalized local system and the k semi-flat coefficient matrices.

    All scalars are 1 except on the closing crossing (cone k-1 to cone 0) that
    lands on sheet 0, which carries (-1)^(r+1).
    """
    if not ms.all_weights_one():
        raise UnsupportedWeightsError("semi-flat cocycle needs weight-one sheets and ray lifts")
    r = ms.rank if r is None else r
    if r != ms.rank:
        raise NotIndecomposableError(f"rank {r} does not match the multi-section rank {ms.rank}")
    if len(perm_orbits(monodromy(ms))) != 1:
        raise NotIndecomposableError("sheet monodromy is not transitive")
    k = ms.fan.k
    scalars = {}
    for i in range(k):
        step = crossing_matching(ms, i)
        for a in range(r):
            closing = i == k - 1 and step[a] == 0
            scalars[(i, a)] = Fraction((-1) ** (r + 1)) if closing else Fraction(1)
    ls = LocalSystem(scalars)
    return ls, semiflat_matrices(ms, ls)


def semiflat_matrices(ms: MultiSection, ls: LocalSystem) -> list:
    r = ms.rank
    out = []
    for i in range(ms.fan.k):
        step = crossing_matching(ms, i)
        m = [[Fraction(0)] * r for _ in range(r)]
        for a in range(r):
            m[a][step[a]] = Fraction(ls.scalars[(i, a)])
        out.append(tuple(tuple(row) for row in m))
    return out


def semiflat_sign(ms: MultiSection) -> int:
    """Product of the signs of the k crossing permutations (the sign of the monodromy)."""
    perm = monodromy(ms)
    sign = 1
    for orbit in perm_orbits(perm):
        if len(orbit) % 2 == 0:
            sign = -sign
    return sign


def monodromy_from_loop(ms: MultiSection, loop) -> Fraction:
    """Local-system monodromy forced by det(loop): det(Theta) = 1, so det(loop) = sign * monodromy."""
    return ratmat.det(loop) / semiflat_sign(ms)


@dataclass(frozen=True)
class WallFactor:
    tau_index: int
    vertex_lift: int
    N: tuple

    def __post_init__(self):
        object.__setattr__(self, "N", ratmat.mat(self.N))


@dataclass(frozen=True)
class WallFactorSet:
    factors: tuple = ()

    def for_ray(self, j: int) -> list[WallFactor]:
        return sorted((w for w in self.factors if w.tau_index == j), key=lambda w: w.vertex_lift)


def source_cone(ms: MultiSection, tau_index: int) -> int:
    return ms.fan.cones_of_ray(tau_index)[0]


def support_errors(ms: MultiSection, w: WallFactor) -> list[str]:
    r = ms.rank
    if len(w.N) != r:
        return [f"N is {len(w.N)}x{len(w.N)}, rank is {r}"]
    if not ms.all_weights_one():
        return ["wall factors need weight-one sheets"]
    i = source_cone(ms, w.tau_index)
    tau = ms.fan.ray_cone(w.tau_index)
    errs = []
    for a in range(r):
        if w.N[a][a] != 0:
            errs.append(f"N1: diagonal entry ({a},{a}) is {w.N[a][a]}")
        for b in range(r):
            if a == b or w.N[a][b] == 0:
                continue
            if ms.sheet_vertex(i, a) != w.vertex_lift or ms.sheet_vertex(i, b) != w.vertex_lift:
                errs.append(f"entry ({a},{b}): sheets do not both contain vertex lift {w.vertex_lift}")
            d = sub(ms.sheets[i][a].slope, ms.sheets[i][b].slope)
            if not in_dual_cone(d, tau):
                errs.append(f"N2: entry ({a},{b}) needs {d} nonnegative on ray {ms.fan.rays[w.tau_index]}")
    return errs


def check_wall_support(ms: MultiSection, w: WallFactor) -> bool:
    return not support_errors(ms, w)


def exponentiate(w: WallFactor):
    n = w.N
    r = len(n)
    if not ratmat.is_zero(ratmat.power(n, r)):
        raise NilpotencyError(f"N^{r} != 0 for {ratmat.fmt(n)}")
    out = ratmat.identity(r)
    p = ratmat.identity(r)
    for e in range(1, r):
        p = ratmat.mul(p, n)
        out = ratmat.add(out, ratmat.scale(Fraction(1, factorial(e)), p))
    if ratmat.det(out) != 1:
        raise NilpotencyError(f"det exp(N) = {ratmat.det(out)} != 1")
    return out


def theta(ms: MultiSection, ws: WallFactorSet, j: int):
    """Product of exponentials of the factors on ray ``j``, in vertex-lift order."""
    exps = [exponentiate(w) for w in ws.for_ray(j)]
    for x in range(len(exps)):
        for y in range(x + 1, len(exps)):
            if ratmat.mul(exps[x], exps[y]) != ratmat.mul(exps[y], exps[x]):
                raise SupportError(f"wall factors on ray {j} do not commute")
    return ratmat.mul_all(exps, ms.rank)


def _require_supports(ms: MultiSection, ws: WallFactorSet):
    for w in ws.factors:
        errs = support_errors(ms, w)
        if errs:
            raise SupportError(f"ray {w.tau_index}, vertex {w.vertex_lift}: " + "; ".join(errs))


def adjacent_transitions(ms: MultiSection, ls: LocalSystem, ws: WallFactorSet) -> list:
    _require_supports(ms, ws)
    sf = semiflat_matrices(ms, ls)
    return [ratmat.mul(theta(ms, ws, ms.fan.crossing_ray(i)), sf[i]) for i in range(ms.fan.k)]


def compose_loop(ms: MultiSection, ls: LocalSystem, ws: WallFactorSet):
    """Ordered product of the corrected transitions once around the origin."""
    return ratmat.mul_all(adjacent_transitions(ms, ls, ws), ms.rank)


def assemble_bundle(ms: MultiSection, ls: LocalSystem, ws: WallFactorSet) -> KaneyamaData:
    r = ms.rank
    adj = adjacent_transitions(ms, ls, ws)
    loop = ratmat.mul_all(adj, r)
    defect = ratmat.sub(loop, ratmat.identity(r))
    expected = (-1) ** (r + 1)
    if ms.all_weights_one() and ls.monodromy * semiflat_sign(ms) != 1:
        # det(loop) = sign * monodromy, so this loop can never close
        raise ObstructionError(f"local-system monodromy {ls.monodromy} != {expected}", defect)
    if not ratmat.is_zero(defect):
        raise ObstructionError("wall-crossing factors are not consistent around the origin", defect)
    g = KaneyamaData.from_adjacent(ms, adj)
    diags = validate_kaneyama(ms, g)
    if diags:
        raise SupportError("assembled data fails validation: " + "; ".join(map(str, diags)))
    return g


def check_restriction_semiflat(ms: MultiSection, g: KaneyamaData) -> bool:
    """Along each ray the transition restricts to the matching with nonzero scalars."""
    k = ms.fan.k
    for i in range(k):
        j = (i + 1) % k
        ray = ms.fan.ray_cone(ms.fan.crossing_ray(i))
        step = crossing_matching(ms, i)
        for src, tgt, match in ((i, j, step), (j, i, _inverse_perm(step))):
            big = assemble_transition(ms, g, src, tgt)
            for a, row in enumerate(big):
                for b, p in enumerate(row):
                    q = restrict_to_perp(p, ray)
                    if b == match[a]:
                        if len(q.terms) != 1:
                            return False
                    elif not q.is_zero():
                        return False
    return True


def _inverse_perm(p: Sequence[int]) -> list[int]:
    out = [0] * len(p)
    for a, b in enumerate(p):
        out[b] = a
    return out
