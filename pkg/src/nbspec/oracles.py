"""Brute-force ground truth: walk enumeration, exhaustive small graphs, determinant spot checks.

Nothing here may reuse the spectral machinery it is meant to validate; walk
counts come from plain DFS and matrix powers are taken over Python ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from nbspec import linalg
from nbspec.generators import random_connected_graph, random_graph
from nbspec.graph import Graph, is_tree, nb_successors
from nbspec.operators import build_operators
from nbspec.report import VerificationReport, status_of

MAX_WALK_LENGTH = 8
MAX_WALK_EDGES = 20
MAX_SWEEP_N = 7


class BudgetError(ValueError):
    """The requested brute-force enumeration is outside the supported size."""


@dataclass(frozen=True)
class WalkCountTable:
    k: int
    counts: tuple[tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=object).reshape(len(self.counts), len(self.counts))


def count_nb_walks_bruteforce(g: Graph, k: int) -> WalkCountTable:
    """Count non-backtracking walks of exactly k steps between directed edges by DFS."""
    if k < 1:
        raise BudgetError(f"walk length must be >= 1, got {k}")
    if k > MAX_WALK_LENGTH or g.m > MAX_WALK_EDGES:
        raise BudgetError(
            f"brute-force budget exceeded (k={k} > {MAX_WALK_LENGTH} or m={g.m} > {MAX_WALK_EDGES})"
        )
    succ = nb_successors(g)
    E = len(succ)
    counts = [[0] * E for _ in range(E)]
    for start in range(E):
        row = counts[start]
        stack = [(start, 0)]
        while stack:
            e, depth = stack.pop()
            if depth == k:
                row[e] += 1
                continue
            for f in succ[e]:
                stack.append((f, depth + 1))
    return WalkCountTable(k, tuple(tuple(r) for r in counts))


def integer_matrix_power(M, k: int) -> list[list[int]]:
    """M^k over Python ints (no overflow, no rounding)."""
    rows = [[int(x) for x in r] for r in np.asarray(M)]
    n = len(rows)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        result = [
            [sum(result[i][t] * rows[t][j] for t in range(n) if result[i][t]) for j in range(n)]
            for i in range(n)
        ]
    return result


def verify_Bk_equals_walkcounts(g: Graph, k: int) -> VerificationReport:
    table = count_nb_walks_bruteforce(g, k)
    power = integer_matrix_power(build_operators(g).B, k)
    diff = [
        (i, j, power[i][j], table.counts[i][j])
        for i in range(len(power)) for j in range(len(power))
        if power[i][j] != table.counts[i][j]
    ]
    meta = {"k": k, "m": g.m}
    if diff:
        i, j, p, c = diff[0]
        meta["counterexample"] = {"entry": [i, j], "matrix_power": p, "walk_count": c}
    return VerificationReport("Bk_equals_walkcounts", status_of(not diff), float(len(diff)), metadata=meta)


def rooted_tree_edge_matrix(t: Graph, root: int = 0) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Edge adjacency matrix of a tree with every edge oriented toward ``root``.

    Rows and columns follow the n - 1 directed edges (child, parent) in sorted order.
    """
    if not is_tree(t):
        raise ValueError("rooted_tree_edge_matrix needs a tree")
    parent = {root: None}
    order = [root]
    for v in order:
        for w in t.neighbors(v):
            if w not in parent:
                parent[w] = v
                order.append(w)
    edges = sorted((c, p) for c, p in parent.items() if p is not None)
    pos = {e: i for i, e in enumerate(edges)}
    C = np.zeros((len(edges), len(edges)))
    for (u, v), i in pos.items():
        for (x, y), j in pos.items():
            if v == x:
                C[i, j] = 1.0
    return C, edges


def charpoly_spotcheck(M, samples: Sequence[float], exponent: int | None = None,
                       tol: float = 1e-9) -> VerificationReport:
    """Compare det(lam I - M) by LU with the monomial lam^exponent (default: dim M)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise ValueError("charpoly_spotcheck needs a square matrix")
    if n > 20:
        raise BudgetError(f"charpoly spot check limited to dimension 20, got {n}")
    e = n if exponent is None else exponent
    residuals = []
    values = []
    for lam in samples:
        got = linalg.charpoly_at(M, lam)
        want = lam ** e
        values.append(got)
        residuals.append(abs(got - want) / max(1.0, abs(want)))
    worst = max(residuals, default=0.0)
    return VerificationReport("charpoly_spotcheck", status_of(worst <= tol), worst,
                              metadata={"samples": list(samples), "exponent": e, "determinants": values})


# ---------------------------------------------------------------------------
# Exhaustive enumeration


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def labeled_graphs(n: int) -> Iterator[Graph]:
    """All 2^(n choose 2) labelled graphs on n vertices, by edge bitmask."""
    pairs = _pairs(n)
    for mask in range(1 << len(pairs)):
        yield Graph(n, [p for b, p in enumerate(pairs) if mask >> b & 1])


def _refine(adj: list[int], colors: list[int]) -> list[int]:
    """Colour refinement with colours renumbered by sorted signature (isomorphism invariant)."""
    n = len(adj)
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in range(n) if adj[v] >> w & 1)))
            for v in range(n)
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _code(adj: list[int], order: list[int]) -> int:
    n = len(order)
    code = 0
    for i in range(n):
        for j in range(i + 1, n):
            code = (code << 1) | (adj[order[i]] >> order[j] & 1)
    return code


def canonical_code(g: Graph) -> tuple[int, int]:
    """Isomorphism-invariant (n, bitmask): the largest adjacency code over an
    individualisation-refinement search tree."""
    n = g.n
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = -1

    def search(colors: list[int]) -> None:
        nonlocal best
        colors = _refine(adj, colors)
        if len(set(colors)) == n:
            order = sorted(range(n), key=lambda v: colors[v])
            best = max(best, _code(adj, order))
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if colors[v] == target:
                # split v off in front of its cell
                nxt = [2 * c + (0 if c < target else 1) for c in colors]
                nxt[v] = 2 * target
                search(nxt)

    search([0] * n)
    return n, max(best, 0)


def graph_from_code(code: tuple[int, int]) -> Graph:
    n, bits = code
    pairs = _pairs(n)
    L = len(pairs)
    return Graph(n, [p for b, p in enumerate(pairs) if bits >> (L - 1 - b) & 1])


_CLASS_CACHE: dict[int, list[tuple[int, int]]] = {0: [(0, 0)]}


def isomorphism_classes(n: int) -> list[Graph]:
    """One representative per isomorphism class on n vertices, built by vertex augmentation."""
    if n > MAX_SWEEP_N:
        raise BudgetError(f"isomorphism-class enumeration limited to n <= {MAX_SWEEP_N}")
    for k in range(1, n + 1):
        if k in _CLASS_CACHE:
            continue
        found = set()
        for code in _CLASS_CACHE[k - 1]:
            base = graph_from_code(code)
            for mask in range(1 << (k - 1)):
                edges = list(base.edges) + [(v, k - 1) for v in range(k - 1) if mask >> v & 1]
                found.add(canonical_code(Graph(k, edges)))
        _CLASS_CACHE[k] = sorted(found)
    return [graph_from_code(c) for c in _CLASS_CACHE[n]]


def exhaustive_graph_sweep(n_max: int, *, n_min: int | None = None, connected: bool = False,
                           up_to_isomorphism: bool = False) -> Iterator[Graph]:
    """Stream every simple graph with n_min..n_max vertices (n_min defaults to n_max).

    Labelled graphs come in edge-bitmask order; isomorphism classes in
    canonical-code order. Both orders are deterministic.
    """
    if n_max > MAX_SWEEP_N:
        raise BudgetError(f"exhaustive sweep limited to n <= {MAX_SWEEP_N}")
    lo = n_max if n_min is None else n_min
    for n in range(lo, n_max + 1):
        source = isomorphism_classes(n) if up_to_isomorphism else labeled_graphs(n)
        for g in source:
            if not connected or g.is_connected():
                yield g


def random_corpus(count: int, n_min: int, n_max: int, seed: int = 0, connected: bool = True,
                  p: float | None = None) -> list[Graph]:
    """Reproducible random graphs with n drawn uniformly from [n_min, n_max]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        if connected:
            out.append(random_connected_graph(n, rng, p))
        else:
            out.append(random_graph(n, rng, float(rng.uniform(0.0, 0.6)) if p is None else p))
    return out
