import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tlms import ratmat
from tlms.generate import random_rank2_cover
from tlms.errors import ArrangementError, NotIndecomposableError, ObstructionError
from tlms.kaneyama import validate_kaneyama
from tlms.multisection import disjoint_union, line_bundle, zero_section
from tlms.rank2 import (
    L,
    U,
    TriangularType,
    brute_force_solver,
    check_slope_condition,
    closing_slope_matrix,
    construct_kaneyama_rank2,
    groebner_verdict,
    is_normalized,
    kaneyama_coefficients,
    loop_equations,
    moduli_dim_bound,
    normalize_arrangement,
    slope_condition_holds,
    slope_matrices,
    triangularity_sequence,
)

idx = st.integers(0, 499)


def slope_multisets(ms):
    return [sorted(s.slope for s in g) for g in ms.sheets]


# ---------------------------------------------------------------- normalization


def test_normalize_tangent(tp2, tp2_norm):
    norm = normalize_arrangement(tp2)
    assert norm == tp2_norm
    assert [[s.slope for s in g] for g in norm.sheets][0] == [(1, 0), (0, 1)]
    assert normalize_arrangement(norm) is norm
    assert is_normalized(norm)


def test_normalize_rejects_split(p2):
    with pytest.raises(NotIndecomposableError):
        normalize_arrangement(disjoint_union(zero_section(p2), line_bundle(p2, [0, 0, 1])))


def test_slope_matrices_need_normalization(corpus):
    raw = next(ms for ms in corpus if not is_normalized(ms))
    with pytest.raises(ArrangementError):
        slope_matrices(raw)
    # the sequence itself normalizes first
    assert len(triangularity_sequence(raw)) == raw.fan.k - 1


# ---------------------------------------------------------------- slope matrices


def test_tangent_slope_matrices(tp2_norm):
    mats = slope_matrices(tp2_norm)
    assert [t for _, t in mats] == [L, U]
    first = mats[0][0].entries
    assert first == (((2, 0), None), ((1, 1), (1, 0)))
    assert str(L) == "L" and str(U) == "U"


def test_closing_slope_matrix_shape(tp2_norm):
    c = closing_slope_matrix(tp2_norm).entries
    # sheets swap on the closing ray: the finite diagonal sits on the anti-diagonal
    assert c[0][1] is not None and c[1][0] is not None
    assert [c[0][0] is None, c[1][1] is None].count(True) == 1


def test_interior_exactly_one_type(corpus):
    for ms in corpus[:150]:
        for sm, t in slope_matrices(normalize_arrangement(ms)):
            e = sm.entries
            assert e[0][0] is not None and e[1][1] is not None
            assert (e[0][1] is None) != (e[1][0] is None)
            assert t is (U if e[0][1] is not None else L)


# ---------------------------------------------------------------- slope condition


def test_slope_condition_examples(tp2_norm, obstructed):
    assert check_slope_condition(tp2_norm)
    assert triangularity_sequence(obstructed) == [U, U]
    assert not check_slope_condition(obstructed)
    assert slope_condition_holds(["L", "U", "L"])
    assert not slope_condition_holds(["U", "L", "L"])
    assert not slope_condition_holds([L, L, L])
    assert slope_condition_holds([U, L, U])


def literal_condition(t):
    """The two cases, indices counted as in the definition (pairs 1..k-1, last is k-1)."""
    n = len(t)
    if t[n - 1] == "U":
        return any(t[i - 1] == "L" for i in range(1, n))
    return any(t[i - 1] == "L" and t[j - 1] == "U" for i in range(1, n) for j in range(i + 1, n))


@given(st.lists(st.sampled_from(["U", "L"]), min_size=2, max_size=9))
def test_slope_condition_literal(t):
    assert slope_condition_holds(t) == literal_condition(t)
    assert slope_condition_holds([TriangularType(x) for x in t]) == literal_condition(t)


# ---------------------------------------------------------------- constructive solver


def test_construct_tangent(tp2_norm):
    vals = kaneyama_coefficients(tp2_norm)
    assert vals == [1, -1]
    n12 = sympy.Matrix([[0, 0], [vals[0], 0]])
    n23 = sympy.Matrix([[0, vals[1]], [0, 0]])
    assert (sympy.eye(2) + n23) * (sympy.eye(2) + n12) == sympy.Matrix([[0, -1], [1, 1]])
    g = construct_kaneyama_rank2(tp2_norm)
    assert validate_kaneyama(g.ms, g) == []


def test_construct_obstructed(obstructed):
    with pytest.raises(ObstructionError):
        construct_kaneyama_rank2(obstructed)


@given(idx)
@settings(max_examples=60, deadline=None)
def test_construct_satisfies_loop_equation(corpus, i):
    ms = corpus[i]
    if not check_slope_condition(ms):
        return
    norm = normalize_arrangement(ms)
    gens, _, eqs = loop_equations(norm)
    values = kaneyama_coefficients(norm) + [1]
    sub = dict(zip(gens, values))
    assert all(sympy.expand(e.subs(sub)) == 0 for e in eqs)


# ---------------------------------------------------------------- brute force


def test_brute_force_tangent(tp2_norm):
    rep = brute_force_solver(tp2_norm)
    assert rep.solvable and rep.grid_hit
    assert rep.solution[:2] == (1, -1)
    assert 0 <= rep.free_parameter_count <= 2
    assert rep.defect is None


def test_brute_force_obstructed(obstructed):
    rep = brute_force_solver(obstructed)
    assert not rep.solvable and rep.solution is None
    assert rep.free_parameter_count == -1
    assert rep.defect == ratmat.mat([[-1, 1], [-1, -1]])


def test_upper_upper_entry_argument(obstructed):
    """Two upper-unitriangular factors keep entry (1,0) at 0; the target needs it nonzero."""
    norm = normalize_arrangement(obstructed)
    a, b = sympy.symbols("a b")
    prod = sympy.Matrix([[1, a], [0, 1]]) * sympy.Matrix([[1, b], [0, 1]])
    assert prod[1, 0] == 0
    assert [t for _, t in slope_matrices(norm)] == [U, U]


def test_solver_is_labeling_free(corpus):
    for ms in corpus[:60]:
        assert brute_force_solver(ms).solvable == brute_force_solver(normalize_arrangement(ms)).solvable


def test_pinned_closing_coefficient(corpus):
    """Pinning the closing unknown to 1 is harmless after normalization, not before."""
    sample = corpus[:120]
    for ms in sample:
        assert groebner_verdict(normalize_arrangement(ms), closing=1)[0] == check_slope_condition(ms)
    raw = [groebner_verdict(ms, closing=1)[0] == check_slope_condition(ms) for ms in sample]
    assert not all(raw)


@given(idx)
@settings(max_examples=80, deadline=None)
def test_solution_checks_out(corpus, i):
    ms = corpus[i]
    rep = brute_force_solver(ms)
    if rep.grid_hit:
        gens, _, eqs = loop_equations(ms)
        sub = dict(zip(gens, rep.solution))
        assert all(e.subs(sub) == 0 for e in eqs)
        assert all(abs(x) <= 2 for x in rep.solution)
    if rep.solvable:
        assert rep.free_parameter_count <= ms.fan.k - 1


# ---------------------------------------------------------------- bounds


def test_bounds(tp2, p1p1, p2):
    assert moduli_dim_bound(tp2) == (3, 2)
    assert moduli_dim_bound(zero_section(p2)) == (0, None)
    ms = random_rank2_cover(random.Random(5), p1p1)
    assert moduli_dim_bound(ms) == (4, 3)


@given(idx)
@settings(max_examples=60, deadline=None)
def test_normalize_idempotent_and_preserving(corpus, i):
    ms = corpus[i]
    norm = normalize_arrangement(ms)
    assert normalize_arrangement(norm) is norm
    assert slope_multisets(norm) == slope_multisets(ms)
