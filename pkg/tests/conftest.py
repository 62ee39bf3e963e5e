import random
from fractions import Fraction

import pytest

from confsect import catalog
from confsect.geometry import Point


@pytest.fixture
def theta():
    return catalog.theta()


@pytest.fixture
def star3():
    return catalog.star_3()


@pytest.fixture
def all_graphs():
    return catalog.catalog()


def random_point(g, rng, vertex_prob=0.2):
    if g.vertex_ids and rng.random() < vertex_prob:
        return Point.at_vertex(rng.choice(g.vertex_ids))
    e = rng.choice(g.edge_ids)
    return Point.on_edge(e, Fraction(rng.randrange(1, 4096), 4096))


def random_config(g, n, rng, vertex_prob=0.2):
    while True:
        pts = tuple(random_point(g, rng, vertex_prob) for _ in range(n))
        if len(set(pts)) == n:
            return pts


@pytest.fixture
def rng():
    return random.Random(20240817)
