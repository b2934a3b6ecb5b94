"""Graph families used throughout: paths, cycles, pinwheels, joins, random trees.

Also parses the generator mini-grammar used by the command line, e.g.
``cycle:4``, ``pinwheel:2,3``, ``tree:7,8`` or ``join:cycle:4@0+path:3@0``.
"""

from __future__ import annotations

import itertools

import numpy as np

from nbspec.graph import Graph, GraphError


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    """P_n on n vertices."""
    if n < 1:
        raise GraphError(f"path needs n >= 1, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}; the hub is vertex 0."""
    if leaves < 1:
        raise GraphError(f"star needs at least one leaf, got {leaves}")
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete bipartite graph needs both sides non-empty")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def join_at_vertex(g1: Graph, v1: int, g2: Graph, v2: int) -> Graph:
    """Disjoint union of g1 and g2 with v1 and v2 identified.

    g1 keeps its labels; the vertices of g2 other than v2 follow in
    increasing order, and v2 becomes v1.
    """
    if not 0 <= v1 < g1.n:
        raise GraphError(f"vertex {v1} not in first graph (n={g1.n})")
    if not 0 <= v2 < g2.n:
        raise GraphError(f"vertex {v2} not in second graph (n={g2.n})")
    relabel = {}
    nxt = g1.n
    for w in range(g2.n):
        if w == v2:
            relabel[w] = v1
        else:
            relabel[w] = nxt
            nxt += 1
    edges = list(g1.edges) + [(relabel[u], relabel[v]) for u, v in g2.edges]
    return Graph(g1.n + g2.n - 1, edges)


def pinwheel_graph(p: int, k: int) -> Graph:
    """p cycles of length k sharing hub vertex 0."""
    if p < 1 or k < 3:
        raise GraphError(f"pinwheel needs p >= 1 and k >= 3, got p={p}, k={k}")
    g = cycle_graph(k)
    for _ in range(p - 1):
        g = join_at_vertex(g, 0, cycle_graph(k), 0)
    return g


def tree_from_pruefer(seq: list[int]) -> Graph:
    n = len(seq) + 2
    degree = [1] * n
    for x in seq:
        if not 0 <= x < n:
            raise GraphError(f"Pruefer entry {x} out of range for n={n}")
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (i for i in range(n) if degree[i] == 1)
    edges.append((u, v))
    return Graph(n, edges)


def random_tree(n: int, rng: np.random.Generator | int | None = None) -> Graph:
    """Uniform random labelled tree on n vertices from a random Pruefer sequence."""
    if n < 1:
        raise GraphError(f"tree needs n >= 1, got {n}")
    rng = np.random.default_rng(rng)
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, [(0, 1)])
    return tree_from_pruefer([int(x) for x in rng.integers(0, n, size=n - 2)])


def random_connected_graph(
    n: int, rng: np.random.Generator | int | None = None, p: float | None = None
) -> Graph:
    """Random spanning tree plus each remaining pair independently with probability p.

    When p is None it is itself drawn uniformly from [0, 0.6].
    """
    rng = np.random.default_rng(rng)
    tree = random_tree(n, rng)
    if p is None:
        p = float(rng.uniform(0.0, 0.6))
    extra = [
        e for e in itertools.combinations(range(n), 2)
        if e not in tree.edges and rng.random() < p
    ]
    return Graph(n, list(tree.edges) + extra)


def random_graph(n: int, rng: np.random.Generator | int | None = None, p: float = 0.3) -> Graph:
    """Erdos-Renyi G(n, p); may be disconnected."""
    rng = np.random.default_rng(rng)
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def _ints(args: str, count: int, name: str) -> list[int]:
    try:
        vals = [int(a) for a in args.split(",")]
    except ValueError:
        raise GraphError(f"{name}: expected {count} integer argument(s), got {args!r}") from None
    if len(vals) != count:
        raise GraphError(f"{name}: expected {count} integer argument(s), got {args!r}")
    return vals


def parse_generator(spec: str) -> Graph:
    """Build a graph from a generator spec string.

    Grammar: ``cycle:n``, ``path:n``, ``complete:n``, ``star:n`` (n leaves),
    ``pinwheel:p,k``, ``tree:seed,n``, ``bipartite:a,b``, ``petersen``,
    ``empty:n`` and ``join:<spec>@v+<spec>@w``.
    """
    spec = spec.strip()
    name, _, args = spec.partition(":")
    if name == "join":
        left, sep, right = args.rpartition("+")
        if not sep:
            raise GraphError(f"join: expected '<spec>@v+<spec>@w', got {args!r}")
        parts = []
        for side in (left, right):
            sub, at, vertex = side.rpartition("@")
            if not at:
                raise GraphError(f"join: missing '@vertex' in {side!r}")
            parts.append((parse_generator(sub), _ints(vertex, 1, "join")[0]))
        (g1, v1), (g2, v2) = parts
        return join_at_vertex(g1, v1, g2, v2)
    if name == "petersen":
        return petersen_graph()
    builders = {
        "cycle": (1, lambda a: cycle_graph(a[0])),
        "path": (1, lambda a: path_graph(a[0])),
        "complete": (1, lambda a: complete_graph(a[0])),
        "star": (1, lambda a: star_graph(a[0])),
        "empty": (1, lambda a: empty_graph(a[0])),
        "pinwheel": (2, lambda a: pinwheel_graph(a[0], a[1])),
        "bipartite": (2, lambda a: complete_bipartite_graph(a[0], a[1])),
        "tree": (2, lambda a: random_tree(a[1], np.random.default_rng(a[0]))),
    }
    if name not in builders:
        raise GraphError(f"unknown generator {name!r}")
    count, build = builders[name]
    return build(_ints(args, count, name))
