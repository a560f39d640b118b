"""Acceptance criteria; each test prints one PASS/FAIL line (visible even under capture)."""
import contextlib
import random
import time
from fractions import Fraction

import pytest
import sympy

from tlms import corpus as shipped
from tlms import ratmat
from tlms.generate import DEFAULT_SEED, random_multisection, random_separable_multisection
from tlms.kaneyama import validate_kaneyama
from tlms.multisection import (
    canonical_separation,
    cell_signature,
    dual,
    from_bundle_slopes,
    union_c,
    verify_cover_morphism,
    zero_section,
)
from tlms.rank2 import (
    brute_force_solver,
    check_slope_condition,
    construct_kaneyama_rank2,
    construct_wall_data,
    moduli_dim_bound,
    triangularity_sequence,
)
from tlms.wallcross import (
    WallFactor,
    adjacent_transitions,
    check_restriction_semiflat,
    compose_loop,
    exponentiate,
    monodromy_from_loop,
)
from tlms.rank2 import U

from conftest import TP2_SLOPES


@pytest.fixture
def verdict(capsys, request):
    """Print one line per criterion, PASS only when the test body finishes cleanly."""

    @contextlib.contextmanager
    def run(number, label):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {label}")

    return run


@pytest.fixture(scope="module")
def solved(corpus):
    """Checker verdict, solver report and wall time over the whole corpus."""
    t0 = time.perf_counter()
    rows = [(ms, check_slope_condition(ms), brute_force_solver(ms)) for ms in corpus]
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def assembled(solved):
    out = []
    for ms, ok, _ in solved[0]:
        if ok:
            norm, ls, ws = construct_wall_data(ms)
            out.append((norm, ls, ws, construct_kaneyama_rank2(ms)))
    return out


def test_1_slope_condition_equivalence(verdict, solved):
    rows, elapsed = solved
    with verdict(1, f"checker == brute force on {len(rows)} instances in {elapsed:.1f}s"):
        assert len(rows) >= 500
        assert {ms.fan.k for ms, _, _ in rows} == set(range(3, 9))
        mismatches = [i for i, (_, ok, rep) in enumerate(rows) if ok != rep.solvable]
        assert mismatches == []
        # both verdicts occur, so agreement is not vacuous
        assert 0 < sum(ok for _, ok, _ in rows) < len(rows)
        assert elapsed < 60


def test_2_constructive_soundness(verdict, assembled):
    with verdict(2, f"{len(assembled)} constructions validate and close the loop"):
        assert assembled
        for norm, ls, ws, g in assembled:
            assert validate_kaneyama(g.ms, g) == []
            assert ratmat.is_identity(compose_loop(norm, ls, ws))


def test_3_obstructed_witness(verdict):
    with verdict(3, "shipped [U, U] instance is obstructed with nonzero defect"):
        ms = shipped.load("obstructed_p2").ms
        assert [tuple(c) for c in ms.fan.rays] == [(1, 0), (0, 1), (-1, -1)]
        assert triangularity_sequence(ms) == [U, U]
        assert check_slope_condition(ms) is False
        rep = brute_force_solver(ms)
        assert rep.solvable is False and rep.grid_hit is False
        assert rep.defect is not None and not ratmat.is_zero(rep.defect)


def test_4_monodromy_law(verdict, assembled):
    with verdict(4, "det of the closed loop forces local-system monodromy -1"):
        for norm, ls, ws, _ in assembled:
            adj = adjacent_transitions(norm, ls, ws)
            loop = ratmat.mul_all(adj, 2)
            prod = sympy.eye(2)
            for a in adj:
                prod = prod * sympy.Matrix(a)
            assert prod.det() == ratmat.det(loop) == 1
            assert monodromy_from_loop(norm, loop) == -1
            assert ls.monodromy == -1


def _random_supported_n(rng, ms):
    """One wall factor with random entries in every allowed slot of a random (ray, vertex)."""
    j = rng.randrange(ms.fan.k)
    i = ms.fan.cones_of_ray(j)[0]
    v = ms.fan.rays[j]
    r = ms.rank
    verts = sorted({ms.sheet_vertex(i, a) for a in range(r)})
    out = []
    for w in verts:
        n = [[Fraction(0)] * r for _ in range(r)]
        for a in range(r):
            for b in range(r):
                if a == b or ms.sheet_vertex(i, a) != w or ms.sheet_vertex(i, b) != w:
                    continue
                ma, mb = ms.sheets[i][a].slope, ms.sheets[i][b].slope
                if (ma[0] - mb[0]) * v[0] + (ma[1] - mb[1]) * v[1] >= 0:
                    n[a][b] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        out.append(WallFactor(j, w, n))
    return out


def test_5_wall_factor_algebra(verdict):
    rng = random.Random(DEFAULT_SEED)
    cases = nonzero = split = 0
    with verdict(5, "1000 random supported N: nilpotent, det exp = 1, distinct lifts annihilate"):
        while cases < 1000:
            ms = random_separable_multisection(rng)
            factors = _random_supported_n(rng, ms)
            r = ms.rank
            assert r <= 4
            for w in factors:
                assert ratmat.is_zero(ratmat.power(w.N, r))
                assert sympy.Matrix(exponentiate(w)).det() == 1
            nonzero += any(not ratmat.is_zero(w.N) for w in factors)
            split += len(factors) > 1
            for x in factors:
                for y in factors:
                    if x.vertex_lift != y.vertex_lift:
                        assert ratmat.is_zero(ratmat.mul(x.N, y.N))
            cases += 1
        assert nonzero > 200 and split > 200


def test_6_skeleton_restriction(verdict, assembled):
    with verdict(6, f"restriction to the 1-skeleton is semi-flat on {len(assembled)} bundles"):
        for *_, g in assembled:
            assert check_restriction_semiflat(g.ms, g)


def test_7_dimension_bounds(verdict, solved, tp2):
    rows, _ = solved
    with verdict(7, "free parameters <= #rays - 1; general bound r(r-1)/2 * #rays; P^2 gives (3, 2)"):
        for ms, _, rep in rows:
            k = ms.fan.k
            general, rank2 = moduli_dim_bound(ms)
            assert general == 2 * 1 // 2 * k
            assert rank2 == k - 1
            if rep.solvable:
                assert 0 <= rep.free_parameter_count <= k - 1
        assert moduli_dim_bound(tp2) == (3, 2)


def test_8_operation_identities(verdict, p2, divisors):
    with verdict(8, "O(D0) u O(D1) u O(D2) matches the direct sum and dual(T) + O"):
        lhs = union_c(union_c(divisors[0], divisors[1]), divisors[2])
        multisets = [[d.sheets[i][0].slope for d in divisors] for i in range(3)]
        assert cell_signature(lhs) == cell_signature(from_bundle_slopes(p2, multisets))
        # the tangent bundle listing uses the opposite sign for the support function
        t = dual(from_bundle_slopes(p2, TP2_SLOPES))
        rhs = union_c(t, zero_section(p2))
        assert cell_signature(lhs) == cell_signature(rhs)


def test_9_separation(verdict):
    rng = random.Random(DEFAULT_SEED + 9)
    with verdict(9, "canonical separation idempotent, quotient a valid morphism, 1000 cases"):
        for _ in range(1000):
            ms = random_multisection(rng)
            sep, q = canonical_separation(ms)
            assert verify_cover_morphism(q)
            again, q2 = canonical_separation(sep)
            assert again == sep
            assert verify_cover_morphism(q2)
