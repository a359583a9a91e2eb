import random
from itertools import combinations, product

import pytest

from trekmoments import DirectedGraph, GraphClass, classify

STAR5 = DirectedGraph(5, ((1, 2), (1, 3), (1, 4), (1, 5)))
CHAIN3 = DirectedGraph(3, ((1, 2), (2, 3)))
CHAIN4 = DirectedGraph(4, ((1, 2), (2, 3), (3, 4)))
TWO_NODE = DirectedGraph(2, ((1, 2),))
COLLIDER = DirectedGraph(3, ((1, 3), (2, 3)))
FORK = DirectedGraph(3, ((1, 2), (1, 3)))
TRIANGLE = DirectedGraph(3, ((1, 2), (1, 3), (2, 3)))
CATERPILLAR6 = DirectedGraph(6, ((1, 2), (2, 3), (2, 4), (4, 5), (4, 6)))


@pytest.fixture
def star5():
    return STAR5


@pytest.fixture
def chain3():
    return CHAIN3


@pytest.fixture
def two_node():
    return TWO_NODE


def _prufer_trees(n: int):
    """All labeled trees on vertices 1..n as undirected edge sets."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(1, 2)]
        return
    for seq in product(range(1, n + 1), repeat=n - 2):
        yield _decode_prufer(list(seq), n)


def _decode_prufer(seq, n):
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    ptr = 1
    leaf = 0
    # standard linear-time decoding
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for v in seq:
        edges.append(tuple(sorted((leaf, v))))
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append(tuple(sorted((leaf, n))))
    return edges


def all_polytrees(n: int):
    """Every orientation of every labeled tree on 1..n."""
    out = []
    for tree in _prufer_trees(n):
        for bits in product((0, 1), repeat=len(tree)):
            edges = tuple(
                (u, v) if b == 0 else (v, u) for (u, v), b in zip(tree, bits)
            )
            g = DirectedGraph(n, edges)
            assert classify(g) is GraphClass.POLYTREE
            out.append(g)
    return out


def random_polytree(n: int, rng: random.Random) -> DirectedGraph:
    if n == 1:
        return DirectedGraph(1, ())
    seq = [rng.randint(1, n) for _ in range(n - 2)]
    tree = _decode_prufer(seq, n) if n > 2 else [(1, 2)]
    edges = tuple((u, v) if rng.random() < 0.5 else (v, u) for u, v in tree)
    return DirectedGraph(n, edges)


def all_dags(n: int):
    """Every DAG on 1..n (exhaustive; keep n tiny)."""
    pairs = [(i, j) for i, j in combinations(range(1, n + 1), 2)]
    out = []
    for subset_bits in product((0, 1, 2), repeat=len(pairs)):
        # 0: no edge, 1: i->j, 2: j->i; orientations of a DAG over any order
        edges = []
        for (i, j), b in zip(pairs, subset_bits):
            if b == 1:
                edges.append((i, j))
            elif b == 2:
                edges.append((j, i))
        g = DirectedGraph(n, tuple(edges))
        if classify(g) is not GraphClass.CYCLIC:
            out.append(g)
    return out


def random_dag(n: int, rng: random.Random, p: float = 0.4) -> DirectedGraph:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = []
    for a, b in combinations(range(n), 2):
        if rng.random() < p:
            edges.append((order[a], order[b]))
    return DirectedGraph(n, tuple(edges))
