import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlms.errors import NotCompleteError
from tlms.fan import build_complete_fan_2d, shared_ray
from tlms.lattice import cone


def test_p2_cones(p2):
    assert p2.rays == ((1, 0), (0, 1), (-1, -1))
    assert p2.max_cone(0) == cone((1, 0), (0, 1))
    assert p2.max_cone(1) == cone((0, 1), (-1, -1))
    assert p2.max_cone(2) == cone((-1, -1), (1, 0))


def test_p1p1(p1p1):
    assert p1p1.k == 4


def test_incomplete_inputs():
    with pytest.raises(NotCompleteError):
        build_complete_fan_2d([(1, 0), (0, 1)])
    # a half-turn gap between (-1,0) and (1,0)
    with pytest.raises(NotCompleteError):
        build_complete_fan_2d([(1, 0), (0, 1), (-1, 0)])
    with pytest.raises(NotCompleteError):
        build_complete_fan_2d([(1, 0), (2, 0), (0, 1), (-1, -1)])


def test_primitivizes_and_sorts():
    f = build_complete_fan_2d([(0, 3), (-2, -2), (5, 0)])
    assert f.rays == ((0, 1), (-1, -1), (1, 0))


def test_shared_ray_examples(p2, p1p1):
    assert shared_ray(p2, 0, 1) == (0, 1)
    assert shared_ray(p2, 0, 0) is None
    assert shared_ray(p1p1, 0, 2) is None
    assert shared_ray(p2, 2, 0) == (1, 0)


fans = st.sampled_from([
    [(1, 0), (0, 1), (-1, -1)],
    [(1, 0), (0, 1), (-1, 0), (0, -1)],
    [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
    [(2, 1), (-1, 3), (-1, -2), (1, -3)],
    [(1, 0), (0, 1), (-1, 2), (0, -1)],
])


@given(fans, st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_permutation_invariance(rays, rnd):
    base = build_complete_fan_2d(rays)
    shuffled = list(rays)
    rnd.shuffle(shuffled)
    other = build_complete_fan_2d(shuffled)
    k = base.k
    shift = other.rays.index(base.rays[0])
    assert all(other.rays[(i + shift) % k] == base.rays[i] for i in range(k))


@given(fans)
def test_each_ray_shared_once(rays):
    f = build_complete_fan_2d(rays)
    k = f.k
    for r in f.rays:
        pairs = [(i, j) for i in range(k) for j in range(i + 1, k) if shared_ray(f, i, j) == r]
        assert len(pairs) == 1
