"""Rank-2 multi-sections over a complete 2-d fan: slope condition and solvers.

After :func:`normalize_arrangement`, sheet labels 0 and 1 are carried
unchanged across every interior ray, swap across the closing ray 0, and the
closing wall factor sits in the lower slot (1, 0).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import ratmat
from .errors import ArrangementError, NotIndecomposableError, ObstructionError, SeparabilityError
from .kaneyama import KaneyamaData
from .lattice import in_dual_cone, pair, sub
from .multisection import MultiSection, _sheet_maps, monodromy
from .wallcross import (
    WallFactor,
    WallFactorSet,
    assemble_bundle,
    build_semiflat_cocycle,
)


class TriangularType(enum.Enum):
    UPPER = "U"
    LOWER = "L"

    def __str__(self):
        return self.value


U, L = TriangularType.UPPER, TriangularType.LOWER


@dataclass(frozen=True)
class SlopeMatrix:
    """Entries are lattice vectors or ``None`` for infinity."""

    entries: tuple

    @property
    def triangular_type(self) -> TriangularType:
        upper = self.entries[0][1] is not None
        lower = self.entries[1][0] is not None
        if upper == lower:
            raise SeparabilityError("slope matrix has both or neither off-diagonal entries finite")
        return U if upper else L

    def __str__(self):
        cell = lambda e: "inf" if e is None else "(" + ",".join(map(str, e)) + ")"
        return "[" + "; ".join(" ".join(cell(e) for e in row) for row in self.entries) + "]"


def _require_rank2_transposition(ms: MultiSection):
    if ms.rank != 2 or len(ms.sheets[0]) != 2:
        raise NotIndecomposableError(f"expected a rank-2 cover with two sheets, got rank {ms.rank}")
    if not ms.all_weights_one():
        raise NotIndecomposableError("weighted cover is not indecomposable in rank 2")
    if monodromy(ms) != (1, 0):
        raise NotIndecomposableError("monodromy is not a transposition")


def _propagate(ms: MultiSection, start):
    labels = [list(start)]
    for i in range(ms.fan.k - 1):
        step = _sheet_maps(ms, i)
        labels.append([step[a] for a in labels[-1]])
    return labels


def normalize_arrangement(ms: MultiSection) -> MultiSection:
    """Relabel sheets so interior crossings keep labels and the closing slot is lower."""
    _require_rank2_transposition(ms)
    fan = ms.fan
    labels = _propagate(ms, (0, 1))
    last = fan.k - 1
    m0 = ms.sheets[last][labels[last][0]].slope
    m1 = ms.sheets[last][labels[last][1]].slope
    val = pair(sub(m1, m0), fan.rays[0])
    if val == 0:
        raise SeparabilityError("the two sheets agree on the closing ray")
    if val < 0:
        labels = _propagate(ms, (1, 0))
    if all(lab == [0, 1] for lab in labels):
        return ms
    sheets = tuple(tuple(ms.sheets[i][a] for a in labels[i]) for i in range(fan.k))
    return MultiSection(fan, sheets, ms.ray_lifts, ms.vertex_weights)


def is_normalized(ms: MultiSection) -> bool:
    try:
        return normalize_arrangement(ms) is ms
    except (NotIndecomposableError, SeparabilityError):
        return False


def _slope_matrix(ms: MultiSection, i: int, j: int, match) -> SlopeMatrix:
    tau = ms.fan.intersection(i, j)
    rows = []
    for a in range(2):
        row = []
        for b in range(2):
            d = sub(ms.sheets[i][a].slope, ms.sheets[j][match[b]].slope)
            row.append(d if in_dual_cone(d, tau) else None)
        rows.append(tuple(row))
    return SlopeMatrix(tuple(rows))


def slope_matrices(ms: MultiSection) -> list[tuple[SlopeMatrix, TriangularType]]:
    """Slope matrix and triangularity of each interior pair (cone i, cone i+1), i < k-1."""
    if not is_normalized(ms):
        raise ArrangementError("slope matrices need a normalized arrangement")
    out = []
    for i in range(ms.fan.k - 1):
        sm = _slope_matrix(ms, i, i + 1, (0, 1))
        out.append((sm, sm.triangular_type))
    return out


def closing_slope_matrix(ms: MultiSection) -> SlopeMatrix:
    """Slope matrix of (cone k-1, cone 0) with the columns in cone-0 label order."""
    if not is_normalized(ms):
        raise ArrangementError("slope matrices need a normalized arrangement")
    return _slope_matrix(ms, ms.fan.k - 1, 0, (0, 1))


def triangularity_sequence(ms: MultiSection) -> list[TriangularType]:
    return [t for _, t in slope_matrices(normalize_arrangement(ms))]


def check_slope_condition(ms: MultiSection) -> bool:
    return slope_condition_holds(triangularity_sequence(ms))


def slope_condition_holds(t) -> bool:
    """The two cases on a triangularity sequence (interior pairs, closing excluded).

    Last entry upper: some earlier entry is lower. Last entry lower: some
    lower entry precedes some upper entry, both before the last.
    """
    t = [TriangularType(x) if isinstance(x, str) else x for x in t]
    last = len(t) - 1
    if t[last] is U:
        return any(x is L for x in t[:last])
    return any(t[i] is L and t[j] is U for i in range(last) for j in range(i + 1, last))


def _wall_data(ms: MultiSection, values, closing=Fraction(1)):
    """Wall factors for a normalized arrangement: values[i] in the allowed slot of crossing i."""
    types = [t for _, t in slope_matrices(ms)]
    ls, _ = build_semiflat_cocycle(ms, 2)
    factors = []
    fan = ms.fan
    for i, (t, x) in enumerate(zip(types, values)):
        n = [[0, 0], [0, 0]]
        if t is U:
            n[0][1] = x
        else:
            n[1][0] = x
        factors.append(WallFactor(fan.crossing_ray(i), ms.sheet_vertex(i, 0), n))
    factors.append(WallFactor(0, ms.sheet_vertex(fan.k - 1, 0), [[0, 0], [closing, 0]]))
    return ls, WallFactorSet(tuple(factors))


def kaneyama_coefficients(ms: MultiSection) -> list[int]:
    """Values for the interior slots following the constructive proof; ``ms`` normalized."""
    t = [x for _, x in slope_matrices(ms)]
    last = len(t) - 1
    vals = [0] * len(t)
    if t[last] is U:
        i = next(x for x in range(last) if t[x] is L)
        vals[i], vals[last] = 1, -1
    else:
        i, j = next((i, j) for i in range(last) for j in range(i + 1, last) if t[i] is L and t[j] is U)
        vals[i], vals[j] = 1, -1
    return vals


def construct_kaneyama_rank2(ms: MultiSection) -> KaneyamaData:
    """Kaneyama data on the normalized arrangement of ``ms`` (``result.ms``)."""
    norm = normalize_arrangement(ms)
    if not check_slope_condition(norm):
        seq = ", ".join(map(str, triangularity_sequence(norm)))
        raise ObstructionError(f"slope condition fails for sequence [{seq}]")
    ls, ws = _wall_data(norm, kaneyama_coefficients(norm))
    return assemble_bundle(norm, ls, ws)


def construct_wall_data(ms: MultiSection):
    """(normalized ms, local system, wall factors) behind :func:`construct_kaneyama_rank2`."""
    norm = normalize_arrangement(ms)
    if not check_slope_condition(norm):
        raise ObstructionError("slope condition fails")
    ls, ws = _wall_data(norm, kaneyama_coefficients(norm))
    return norm, ls, ws


# ---------------------------------------------------------------- brute force


@dataclass(frozen=True)
class SolverReport:
    solvable: bool
    solution: tuple | None  # one value per crossing (closing last), from the grid
    free_parameter_count: int  # dimension of the solution set; -1 when empty
    defect: tuple | None  # loop at the zero assignment minus identity, when unsolvable
    slots: tuple  # (row, col) of the free entry of each crossing
    grid_hit: bool


def _allowed_slots(ms: MultiSection, i: int) -> list[tuple[int, int]]:
    j = ms.fan.crossing_ray(i)
    tau = ms.fan.ray_cone(j)
    out = []
    for a, b in ((0, 1), (1, 0)):
        d = sub(ms.sheets[i][a].slope, ms.sheets[i][b].slope)
        if in_dual_cone(d, tau):
            out.append((a, b))
    return out


def _krull_dim(basis, gens) -> int:
    lead = []
    for p in basis:
        mono = sympy.Poly(p, *gens).monoms(order="grevlex")[0]
        lead.append({v for v, e in zip(range(len(gens)), mono) if e})
    best = 0
    for size in range(len(gens), 0, -1):
        for subset in itertools.combinations(range(len(gens)), size):
            s = set(subset)
            if not any(l <= s for l in lead):
                return size
    return best


def loop_equations(ms: MultiSection, closing="free"):
    """Unknowns, slots, and the nonzero entries of (loop - I).

    Every crossing gets one unknown in its unique supported off-diagonal
    slot; the closing crossing's unknown is ``c`` unless ``closing`` pins it
    to a number. Works in the labeling of ``ms``; nothing is normalized.
    """
    k = ms.fan.k
    _, sf = build_semiflat_cocycle(ms, 2)
    syms = list(sympy.symbols(f"t0:{k - 1}"))
    slots = []
    total = sympy.eye(2)
    for i in range(k):
        allowed = _allowed_slots(ms, i)
        if len(allowed) != 1:
            raise SeparabilityError(f"crossing {i}: expected exactly one free slot, found {allowed}")
        a, b = allowed[0]
        slots.append(allowed[0])
        n = sympy.zeros(2, 2)
        if i < k - 1:
            n[a, b] = syms[i]
        elif closing == "free":
            syms.append(sympy.Symbol("c"))
            n[a, b] = syms[-1]
        else:
            n[a, b] = sympy.Rational(closing)
        step = sympy.Matrix(2, 2, lambda r, s: sympy.Rational(sf[i][r][s].numerator, sf[i][r][s].denominator))
        total = total * (sympy.eye(2) + n) * step
    eqs = [sympy.expand(e) for e in (total - sympy.eye(2))]
    return syms, tuple(slots), [e for e in eqs if e != 0]


def groebner_verdict(ms: MultiSection, closing="free") -> tuple[bool, int]:
    """(solvable, dimension of the solution set) from a grevlex Groebner basis over QQ."""
    gens, _, eqs = loop_equations(ms, closing)
    if not eqs:
        return True, len(gens)
    gb = sympy.groebner(eqs, *gens, order="grevlex", domain="QQ")
    if list(gb.exprs) == [1]:
        return False, -1
    return True, _krull_dim(gb.exprs, gens)


def _imul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _half_products(factors, choices):
    """Products of consecutive crossing matrices for every assignment of the unknowns."""
    out = []
    for vals in itertools.product(choices, repeat=len(factors)):
        acc = ((1, 0), (0, 1))
        for (slot, step), t in zip(factors, vals):
            n = [[1, 0], [0, 1]]
            n[slot[0]][slot[1]] = t
            acc = _imul(_imul(acc, n), step)
        out.append((vals, acc))
    return out


def _grid_search(ms: MultiSection, slots, span=2):
    """Smallest integer solution in {-span..span}^k by total absolute value, then lexicographically.

    Meet in the middle: the loop is I iff the left half product equals the
    inverse of the right half product (every factor is unimodular).
    """
    k = ms.fan.k
    _, sf = build_semiflat_cocycle(ms, 2)
    steps = [tuple(tuple(int(x) for x in row) for row in m) for m in sf]
    factors = list(zip(slots, steps))
    h = k // 2
    choices = range(-span, span + 1)
    right = {}
    for vals, m in _half_products(factors[h:], choices):
        d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        inv = ((d * m[1][1], -d * m[0][1]), (-d * m[1][0], d * m[0][0]))
        right.setdefault(inv, []).append(vals)
    best = None
    for lvals, m in _half_products(factors[:h], choices):
        for rvals in right.get(m, ()):
            cand = lvals + rvals
            key = (sum(abs(x) for x in cand), cand)
            if best is None or key < best:
                best = key
    return None if best is None else best[1]


def brute_force_solver(ms: MultiSection) -> SolverReport:
    """Decide the loop equation by a Groebner basis, with an integer grid as a backstop.

    Each crossing, the closing one included, gets one unknown in its unique
    supported off-diagonal slot; the local system is the normalized one.
    """
    gens, slots, _ = loop_equations(ms)
    solvable, dim = groebner_verdict(ms)
    hit = _grid_search(ms, slots)
    if hit is not None and not solvable:
        raise AssertionError("grid found a solution the Groebner basis rules out")
    defect = None if solvable else zero_assignment_defect(ms)
    sol = tuple(Fraction(x) for x in hit) if hit is not None else None
    return SolverReport(solvable, sol, dim, defect, slots, hit is not None)


def zero_assignment_defect(ms: MultiSection):
    """Loop product minus identity with every unknown set to 0 (the bare semi-flat loop)."""
    _, sf = build_semiflat_cocycle(ms, 2)
    return ratmat.sub(ratmat.mul_all(sf, 2), ratmat.identity(2))


def moduli_dim_bound(ms: MultiSection) -> tuple[int, int | None]:
    r = ms.rank
    k = ms.fan.k
    return r * (r - 1) // 2 * k, (k - 1 if r == 2 else None)
