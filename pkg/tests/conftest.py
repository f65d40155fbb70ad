import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curvedist.surface import (
    MappingClass,
    Surface,
    edge_link_curves,
    punctured_sphere,
    punctured_torus,
)
from curvedist.twists import twist_word


@pytest.fixture(scope="session")
def torus():
    return punctured_torus()


@pytest.fixture(scope="session")
def torus_surface():
    return Surface(1, 1)


@pytest.fixture(scope="session")
def torus_words(torus):
    """(T_a, T_b, f) with f = T_a T_b^{-1} the standard Anosov-type word."""
    links = {c.coords: c for c in edge_link_curves(torus)}
    a, b, c1 = links[(0, 1, 1)], links[(1, 0, 1)], links[(1, 1, 0)]
    ta = twist_word(torus, a, verify_curves=[b, c1])
    tb = twist_word(torus, b, verify_curves=[a, c1])
    return ta, tb, ta * tb.inverse()


@pytest.fixture(scope="session")
def sphere4():
    return punctured_sphere(4)


@pytest.fixture(scope="session")
def sphere4_surface():
    return Surface(0, 4)


@pytest.fixture(scope="session")
def sphere4_words(sphere4):
    """(T_x, T_y, g) with g pseudo-Anosov, selected by growth rate."""
    links = edge_link_curves(sphere4)
    x, y = links[0], links[1]
    others = [c for c in links if c.coords not in (x.coords, y.coords)]
    tx = twist_word(sphere4, x, verify_curves=[y] + others)
    ty = twist_word(sphere4, y, verify_curves=[x] + others)
    g = _exponential_candidate([tx * ty.inverse(), tx * ty], y)
    return tx, ty, g


def _exponential_candidate(candidates, probe):
    for g in candidates:
        z = probe.coords
        for _ in range(4):
            z = g.apply_coords(z)
        w4 = sum(z)
        for _ in range(2):
            z = g.apply_coords(z)
        if sum(z) > 4 * w4:
            return g
    raise AssertionError("no exponentially growing candidate")


@pytest.fixture(scope="session")
def sphere5():
    return punctured_sphere(5)


@pytest.fixture(scope="session")
def sphere5_surface():
    return Surface(0, 5)


# Machine-found words on the bipyramid triangulation of S_{0,5}; both are
# re-verified by the tests that use them.
S5_TWIST_MOVES = [
    ("flip", 1), ("flip", 2), ("flip", 8), ("flip", 7), ("flip", 2),
    ("flip", 5), ("relabel", (0, 8, 1, 3, 4, 2, 6, 5, 7)),
]
S5_ORDER5_MOVES = [
    ("flip", 0), ("flip", 6), ("relabel", (3, 7, 4, 0, 8, 6, 5, 2, 1)),
]


@pytest.fixture(scope="session")
def sphere5_twist(sphere5):
    return MappingClass(sphere5, S5_TWIST_MOVES)


@pytest.fixture(scope="session")
def sphere5_order5(sphere5):
    return MappingClass(sphere5, S5_ORDER5_MOVES)
