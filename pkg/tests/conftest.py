import pytest

from tlms.fan import build_complete_fan_2d
from tlms.generate import DEFAULT_SEED, rank2_corpus
from tlms.multisection import from_bundle_slopes, from_matchings, line_bundle

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]
P1P1_RAYS = [(1, 0), (0, 1), (-1, 0), (0, -1)]

# tangent bundle slopes of P^2 as listed cone by cone (sign convention of the
# shipped corpus file, i.e. pair(m, v) = a_v)
TP2_SLOPES = [[(1, 0), (0, 1)], [(-1, 0), (-1, 1)], [(0, -1), (1, -1)]]


@pytest.fixture(scope="session")
def p2():
    return build_complete_fan_2d(P2_RAYS)


@pytest.fixture(scope="session")
def p1p1():
    return build_complete_fan_2d(P1P1_RAYS)


@pytest.fixture(scope="session")
def tp2(p2):
    return from_bundle_slopes(p2, TP2_SLOPES)


@pytest.fixture(scope="session")
def tp2_norm(p2):
    # labels chosen so interior crossings keep them and ray 0 swaps them
    return from_matchings(p2, TP2_SLOPES)


@pytest.fixture(scope="session")
def obstructed(p2):
    slopes = [[(0, 0), (-1, -1)], [(-1, 0), (1, -1)], [(-1, 0), (0, 0)]]
    return from_matchings(p2, slopes)


@pytest.fixture(scope="session")
def divisors(p2):
    return [line_bundle(p2, [1 if j == i else 0 for j in range(3)]) for i in range(3)]


@pytest.fixture(scope="session")
def corpus():
    return rank2_corpus(DEFAULT_SEED, 500)
