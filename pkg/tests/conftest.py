import random

import pytest

from graphgrav import GeodesicTable, GraphGravError, build_graph


def random_connected_graph(rng, n, p=0.45, lo=0.5, hi=2.0):
    """Random connected graph with uniform lengths in [lo, hi]."""
    verts = [str(k) for k in range(n)]
    while True:
        edges = []
        for a in range(n):
            for b in range(a + 1, n):
                if rng.random() < p:
                    edges.append((verts[a], verts[b], rng.uniform(lo, hi)))
        try:
            return build_graph(verts, edges)
        except GraphGravError:
            continue


@pytest.fixture
def line3():
    """Path a-b-c with unit lengths."""
    return build_graph(["a", "b", "c"], [("a", "b", 1.0), ("b", "c", 1.0)])


@pytest.fixture
def line3_geo(line3):
    return GeodesicTable(line3)


@pytest.fixture
def triangle_112():
    """Triangle with lengths 1, 1, 2; the long edge ties with the path."""
    return build_graph(
        ["a", "b", "c"], [("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 2.0)]
    )


@pytest.fixture
def rng():
    return random.Random(20240811)
