"""Directed graphs, classification, and simple-trek combinatorics.

Vertices are labeled 1..n throughout. Graphs are immutable and hashable so
that trek enumeration can be memoized per graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from heapq import heappop, heappush
from itertools import product

from .errors import CyclicGraph, InputError, InvalidGraph, NotPolytree


class GraphClass(Enum):
    CYCLIC = "cyclic"
    DAG = "dag"
    POLYTREE = "polytree"
    POLYFOREST = "polyforest"


@dataclass(frozen=True)
class DirectedGraph:
    """A directed graph on vertices 1..n with an ordered edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraph(f"vertex count must be positive, got {self.n}")
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        seen = set()
        for tail, head in self.edges:
            if not (1 <= tail <= self.n and 1 <= head <= self.n):
                raise InvalidGraph(f"edge {tail}->{head} out of range 1..{self.n}")
            if tail == head:
                raise InvalidGraph(f"self-loop at vertex {tail}")
            if (tail, head) in seen:
                raise InvalidGraph(f"duplicate edge {tail}->{head}")
            seen.add((tail, head))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def parents(self, v: int) -> list[int]:
        return [a for a, b in self.edges if b == v]

    def children(self, v: int) -> list[int]:
        return [b for a, b in self.edges if a == v]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "DirectedGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"graph file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise InputError('graph JSON must be an object with keys "n" and "edges"')
        try:
            return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))
        except (TypeError, ValueError, InvalidGraph) as exc:
            raise InputError(f"invalid graph: {exc}") from exc


@dataclass(frozen=True)
class Trek:
    """A k-trek: k directed paths (edge sequences) from a common top.

    Paths may be empty; ``paths[r]`` ends at ``sinks[r]``.
    """

    top: int
    paths: tuple[tuple[tuple[int, int], ...], ...]
    sinks: tuple[int, ...]

    def node_sequences(self) -> tuple[tuple[int, ...], ...]:
        seqs = []
        for path in self.paths:
            seq = [self.top]
            for _, head in path:
                seq.append(head)
            seqs.append(tuple(seq))
        return tuple(seqs)

    def edge_multiplicities(self) -> dict[tuple[int, int], int]:
        mult: dict[tuple[int, int], int] = {}
        for path in self.paths:
            for e in path:
                mult[e] = mult.get(e, 0) + 1
        return mult


def _has_directed_cycle(g: DirectedGraph) -> bool:
    indeg = {v: 0 for v in g.vertices}
    for _, b in g.edges:
        indeg[b] += 1
    queue = [v for v in g.vertices if indeg[v] == 0]
    visited = 0
    while queue:
        v = queue.pop()
        visited += 1
        for w in g.children(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return visited != g.n


def classify(g: DirectedGraph) -> GraphClass:
    """Classify as cyclic, general DAG, polytree, or polyforest."""
    if _has_directed_cycle(g):
        return GraphClass.CYCLIC
    # Underlying undirected graph: tree iff connected and |E| = n - 1,
    # forest iff it has no undirected cycle.
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for a, b in g.edges:
        if b in adj[a]:
            # 2-cycles were caught above; antiparallel edges cannot occur here.
            return GraphClass.DAG
        adj[a].add(b)
        adj[b].add(a)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    n_undirected_edges = len(g.edges)
    if n_undirected_edges > g.n - len(_components(adj, g.n)):
        return GraphClass.DAG  # undirected cycle present
    if len(seen) == g.n:
        return GraphClass.POLYTREE
    return GraphClass.POLYFOREST


def _components(adj: dict[int, set[int]], n: int) -> list[set[int]]:
    comps = []
    unseen = set(range(1, n + 1))
    while unseen:
        root = min(unseen)
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
        unseen -= comp
    return comps


def topological_order(g: DirectedGraph) -> list[int]:
    """Kahn's algorithm, smallest-label first; identity when labels already sorted."""
    indeg = {v: 0 for v in g.vertices}
    for _, b in g.edges:
        indeg[b] += 1
    heap = [v for v in g.vertices if indeg[v] == 0]
    heap.sort()
    order = []
    while heap:
        v = heappop(heap)
        order.append(v)
        for w in g.children(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heappush(heap, w)
    if len(order) != g.n:
        raise CyclicGraph("graph contains a directed cycle")
    return order


@lru_cache(maxsize=None)
def _all_paths(g: DirectedGraph, source: int, sink: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All directed paths source -> sink in an acyclic graph, as edge tuples."""
    if source == sink:
        return ((),)
    paths = []
    for child in g.children(source):
        for rest in _all_paths(g, child, sink):
            paths.append((((source, child),) + rest))
    return tuple(paths)


@lru_cache(maxsize=None)
def _simple_treks_cached(g: DirectedGraph, sinks: tuple[int, ...]) -> tuple[Trek, ...]:
    treks = []
    for v in g.vertices:
        choices = [_all_paths(g, v, s) for s in sinks]
        if any(not c for c in choices):
            continue
        for combo in product(*choices):
            common = None
            for path in combo:
                nodes = {v}
                for _, head in path:
                    nodes.add(head)
                common = nodes if common is None else common & nodes
            if common == {v}:
                treks.append(Trek(v, combo, sinks))
    return tuple(treks)


def enumerate_simple_treks(g: DirectedGraph, sinks) -> list[Trek]:
    """All simple k-treks between the given sinks, k in {2, 3}."""
    sinks = tuple(sinks)
    if len(sinks) not in (2, 3):
        raise ValueError(f"expected 2 or 3 sinks, got {len(sinks)}")
    if any(not (1 <= s <= g.n) for s in sinks):
        raise InvalidGraph(f"sink out of range: {sinks}")
    if _has_directed_cycle(g):
        raise CyclicGraph("trek enumeration requires an acyclic graph")
    return list(_simple_treks_cached(g, sinks))


def require_polytree(g: DirectedGraph) -> None:
    if classify(g) is not GraphClass.POLYTREE:
        raise NotPolytree("operation requires a polytree")


def require_polytree_or_forest(g: DirectedGraph) -> None:
    if classify(g) not in (GraphClass.POLYTREE, GraphClass.POLYFOREST):
        raise NotPolytree("operation requires a polytree or polyforest")


def simple_trek(g: DirectedGraph, sinks) -> Trek | None:
    """The unique simple trek between the sinks of a polytree, or None."""
    require_polytree_or_forest(g)
    treks = enumerate_simple_treks(g, tuple(sinks))
    if not treks:
        return None
    if len(treks) > 1:
        raise AssertionError(f"polytree has {len(treks)} simple treks for {sinks}")
    return treks[0]


def top(g: DirectedGraph, sinks) -> int | None:
    """Top of the unique simple trek between the sinks, or None when absent."""
    trek = simple_trek(g, sinks)
    return None if trek is None else trek.top
