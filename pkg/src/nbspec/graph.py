"""Undirected simple graphs, directed-edge indexing and combinatorial ground truth."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed graph input (self-loops, bad ids, parse errors)."""


@dataclass(frozen=True)
class DirectedEdgeIndex:
    """Bijection between the 2m ordered pairs (u, v) and 0..2m-1.

    Pairs are sorted lexicographically, so the index is a pure function of the
    edge set.
    """

    pairs: tuple[tuple[int, int], ...]
    position: dict[tuple[int, int], int] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> DirectedEdgeIndex:
        pairs = sorted({p for u, v in edges for p in ((u, v), (v, u))})
        return cls(tuple(pairs), {p: i for i, p in enumerate(pairs)})

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, i: int) -> tuple[int, int]:
        return self.pairs[i]

    def index(self, u: int, v: int) -> int:
        return self.position[(u, v)]

    def reverse(self, i: int) -> int:
        u, v = self.pairs[i]
        return self.position[(v, u)]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``edges`` is stored as a frozenset of pairs ``(u, v)`` with ``u < v``.
    Instances are immutable; derived data (adjacency, edge index) is cached.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(normalized))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={sorted(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @property
    def d_min(self) -> int:
        return min(self.degrees, default=0)

    @property
    def d_max(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def edge_index(self) -> DirectedEdgeIndex:
        return DirectedEdgeIndex.from_edges(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def components(self) -> list[list[int]]:
        """Vertex sets of the connected components, each sorted, ordered by minimum vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    def induced_subgraph(self, vertices: Iterable[int]) -> Graph:
        """Subgraph induced on ``vertices``, relabelled to 0..k-1 in increasing order."""
        keep = sorted(set(vertices))
        relabel = {v: i for i, v in enumerate(keep)}
        return Graph(
            len(keep),
            [(relabel[u], relabel[v]) for u, v in self.edges if u in relabel and v in relabel],
        )


def from_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    One ``u v`` pair per line; ``#`` starts a comment; an optional first
    data line ``n <count>`` pins the vertex count so isolated vertices survive.
    Without it, n is one more than the largest id seen.
    """
    edges = []
    n_header = None
    max_id = -1
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not seen_data and parts[0] == "n":
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: header must be 'n <count>'")
            try:
                n_header = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n_header < 0:
                raise GraphError(f"line {lineno}: negative vertex count")
            seen_data = True
            continue
        seen_data = True
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        max_id = max(max_id, u, v)
        edges.append((u, v))
    n = max_id + 1 if n_header is None else n_header
    if max_id >= n:
        raise GraphError(f"vertex id {max_id} exceeds header count n={n}")
    return Graph(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def two_core(g: Graph) -> tuple[Graph, list[int]]:
    """Strip degree <= 1 vertices until none remain.

    Returns the surviving induced subgraph (relabelled in increasing vertex
    order) and the removed vertices in deletion order.
    """
    deg = list(g.degrees)
    alive = [True] * g.n
    queue = deque(v for v in range(g.n) if deg[v] <= 1)
    removed = []
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        removed.append(v)
        for w in g.adjacency[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    queue.append(w)
    return g.induced_subgraph(v for v in range(g.n) if alive[v]), removed


def bipartition(g: Graph) -> list[int] | None:
    """A proper 2-colouring by BFS, or None if the graph has an odd cycle."""
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def is_tree(g: Graph) -> bool:
    return g.is_connected() and g.m == g.n - 1


def is_cycle(g: Graph) -> bool:
    return g.n >= 3 and g.is_connected() and all(d == 2 for d in g.degrees)


@dataclass(frozen=True)
class StructureTruth:
    components: int
    degree1_count: int
    bipartite: bool
    is_tree: bool
    is_cycle: bool
    d_min: int
    d_max: int


def structure_truth(g: Graph) -> StructureTruth:
    """Combinatorial ground truth used to score the spectral detectors."""
    return StructureTruth(
        components=len(g.components()),
        degree1_count=sum(1 for d in g.degrees if d == 1),
        bipartite=bipartition(g) is not None,
        is_tree=is_tree(g),
        is_cycle=is_cycle(g),
        d_min=g.d_min,
        d_max=g.d_max,
    )


def nb_successors(g: Graph) -> list[list[int]]:
    """Successor lists of the non-backtracking digraph on directed edges.

    Edge (u, v) points to every (v, w) with w != u.
    """
    idx = g.edge_index
    return [
        [idx.index(v, w) for w in g.adjacency[v] if w != u]
        for u, v in idx.pairs
    ]


def strongly_connected_components(succ: list[list[int]]) -> list[list[int]]:
    """Kosaraju's algorithm, iterative. Components are returned sorted."""
    n = len(succ)
    pred: list[list[int]] = [[] for _ in range(n)]
    for v, outs in enumerate(succ):
        for w in outs:
            pred[w].append(v)

    order = []
    visited = [False] * n
    for s in range(n):
        if visited[s]:
            continue
        visited[s] = True
        stack = [(s, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(succ[v]):
                stack[-1] = (v, i + 1)
                w = succ[v][i]
                if not visited[w]:
                    visited[w] = True
                    stack.append((w, 0))
            else:
                stack.pop()
                order.append(v)

    comp = [-1] * n
    comps = []
    for s in reversed(order):
        if comp[s] >= 0:
            continue
        label = len(comps)
        comp[s] = label
        members = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in pred[v]:
                if comp[w] < 0:
                    comp[w] = label
                    members.append(w)
                    stack.append(w)
        comps.append(sorted(members))
    return comps


def directed_edge_graph_strongly_connected(g: Graph) -> bool:
    """Whether the non-backtracking digraph on the 2m directed edges is strongly connected.

    A graph without edges has an empty digraph, reported as not strongly
    connected.
    """
    if g.m == 0:
        return False
    return len(strongly_connected_components(nb_successors(g))) == 1
