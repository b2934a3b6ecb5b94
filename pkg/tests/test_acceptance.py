"""Acceptance gate: one test per criterion, each run at its stated tolerance.

A one-line PASS/FAIL verdict per criterion is printed in the terminal summary.
"""

import math
import time

import networkx as nx
import numpy as np
import pytest

from nbspec import detect, linalg, oracles, theory
from nbspec.generators import (
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    join_at_vertex,
    path_graph,
    petersen_graph,
    pinwheel_graph,
    random_connected_graph,
    random_tree,
    star_graph,
)
from nbspec.graph import Graph, directed_edge_graph_strongly_connected, is_cycle, structure_truth
from nbspec.operators import build_decomposition, build_operators, verify_decomposition


def connected_upto7():
    return list(oracles.exhaustive_graph_sweep(7, n_min=1, connected=True, up_to_isomorphism=True))


@pytest.fixture(scope="module")
def connected_corpus():
    return connected_upto7()


def test_criterion_1_ihara(acceptance_record):
    graphs = oracles.random_corpus(200, 2, 10, seed=1)
    start = time.perf_counter()
    worst = max(theory.ihara_check(g, tol=1e-8).residual for g in graphs)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 30
    acceptance_record("1", ok, f"Ihara on 200 random connected graphs: worst residual {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_decomposition(acceptance_record):
    graphs = oracles.random_corpus(100, 2, 8, seed=2)
    worst_res = worst_match = 0.0
    failures = 0
    for g in graphs:
        ops = build_operators(g)
        dec = build_decomposition(ops, tol=1e-9)
        rep = verify_decomposition(ops, tol=1e-9, spectral_tol=1e-6)
        worst_res = max(worst_res, dec.residual)
        worst_match = max(worst_match, rep.metadata["spectral_match_distance"])
        failures += rep.failed
    k4 = build_decomposition(build_operators(complete_graph(4))).components[0]
    dims = (k4["dim_E_minus_cap_null"], k4["dim_E_plus_cap_null"])
    ok = failures == 0 and worst_res <= 1e-9 and worst_match <= 1e-6 and dims == (3, 2)
    acceptance_record(
        "2", ok,
        f"decomposition on 100 graphs: residual {worst_res:.1e}, spectral match {worst_match:.1e}; K_4 dims {dims}",
    )
    assert ok


def _qr_B(g):
    return linalg.eigenvalues(build_operators(g).B)


def test_criterion_3_closed_forms(acceptance_record):
    worst = 0.0
    checks = 0
    rng = np.random.default_rng(3)
    for n in range(2, 10):
        for _ in range(3):
            t = random_tree(n, rng)
            worst = max(worst, theory.tree_spectrum(t).matches(_qr_B(t)).max_distance)
            checks += 1
    for n in range(3, 11):
        worst = max(worst, theory.cycle_spectrum(n).matches(_qr_B(cycle_graph(n))).max_distance)
        checks += 1
    rho_err = 0.0
    for p in (2, 3):
        for k in (3, 4, 5):
            s = _qr_B(pinwheel_graph(p, k))
            worst = max(worst, theory.pinwheel_spectrum(p, k).matches(s).max_distance)
            checks += 1
            if (p, k) in {(2, 3), (2, 4), (3, 3), (3, 5)}:
                rho_err = max(rho_err, abs(s.radius - (2 * p - 1) ** (1 / k)))
    for g in [complete_graph(4), complete_graph(5), petersen_graph()] + [cycle_graph(n) for n in range(3, 9)]:
        worst = max(worst, theory.regular_spectrum(g).matches(_qr_B(g)).max_distance)
        checks += 1
    ok = worst <= 1e-6 and rho_err <= 1e-9
    acceptance_record("3", ok, f"{checks} closed-form spectra: worst pair {worst:.1e}; pinwheel radius error {rho_err:.1e}")
    assert ok


PENDANT_CASES = [
    (cycle_graph(3), 0, 4),
    (Graph(1), 0, 5),
    (complete_graph(4), 0, 3),
    (petersen_graph(), 3, 5),
    (path_graph(4), 1, 6),
    (star_graph(3), 0, 4),
    (complete_bipartite_graph(2, 3), 4, 3),
    (pinwheel_graph(2, 3), 0, 7),
    (cycle_graph(5), 2, 8),
    (complete_graph(5), 1, 4),
]


def test_criterion_4_pendant_cycle(acceptance_record):
    worst = 0.0
    contained = True
    for base, v, k in PENDANT_CASES:
        G, pairs = theory.pendant_cycle_eigenpairs(base, v, k, tol=1e-9)
        worst = max(worst, max(p.residual for p in pairs))
        s = _qr_B(G)
        contained &= all(s.contains(p.value) for p in pairs)
    ok = worst <= 1e-9 and contained
    acceptance_record("4", ok, f"10 pendant-cycle joins: worst residual {worst:.1e}, eigenvalues in QR spectrum: {contained}")
    assert ok


def test_criterion_5_lower_bound(acceptance_record, connected_corpus):
    start = time.perf_counter()
    reports = [theory.check_lower_bound_modulus(g) for g in connected_corpus if g.d_min >= 2]
    elapsed = time.perf_counter() - start
    worst = min(r.observed for r in reports)
    ok = all(r.status == "pass" for r in reports) and elapsed < 300
    acceptance_record("5", ok, f"min|mu| >= 1 on {len(reports)} graphs: smallest {worst:.12f}, {elapsed:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def bound_reports(connected_corpus):
    return [(g, theory.spectral_radius_bounds(g)) for g in connected_corpus]


def _named(reports, name):
    return next(r for r in reports if r.name == name)


def test_criterion_6a_theorem_bound(acceptance_record, bound_reports):
    applied = [_named(rs, "upper_bound_theorem") for _, rs in bound_reports]
    held = [r for r in applied if r.hypothesis]
    bad = [r for r in held if r.status != "pass"]
    ok = not bad
    acceptance_record("6a", ok, f"theorem upper bound: {len(held)} graphs under hypothesis, {len(bad)} violations")
    assert ok


def test_criterion_6b_printed_corollary(acceptance_record, bound_reports):
    """The corollary bound exactly as printed. Known to be false (see the decisions ledger)."""
    bad = []
    held = 0
    for g, rs in bound_reports:
        r = _named(rs, "upper_bound_corollary_printed")
        if r.hypothesis:
            held += 1
            if r.status != "pass":
                bad.append((g.n, g.m, r.bound, r.observed))
    ok = not bad
    detail = f"printed corollary bound: {held} graphs under hypothesis, {len(bad)} violations"
    if bad:
        detail += " e.g. " + ", ".join(
            f"(n={n}, m={m}, bound={'non-real' if math.isnan(b) else f'{b:.4f}'}, rho(B)={o:.4f})"
            for n, m, b, o in bad[-3:]
        )
    acceptance_record("6b", ok, detail)
    assert ok, detail


def test_criterion_6c_gershgorin(acceptance_record, bound_reports):
    bad = []
    applicable = 0
    for g, rs in bound_reports:
        r = _named(rs, "gershgorin")
        if not r.hypothesis:
            continue
        applicable += 1
        equal = abs(r.observed - r.bound) <= 1e-8
        if r.observed > r.bound + 1e-8 or equal != g.is_regular():
            bad.append(g)
    ok = not bad
    acceptance_record("6c", ok, f"Gershgorin bound with equality iff regular: {applicable} graphs, {len(bad)} violations")
    assert ok


def _detection_disagreements(graphs):
    bad = []
    for g in graphs:
        res = detect.detect_all(g)
        if not res.all_agree:
            bad.append(g)
    return bad


def test_criterion_7_detection(acceptance_record):
    exhaustive = list(oracles.exhaustive_graph_sweep(6, n_min=1, up_to_isomorphism=True))
    labeled = list(oracles.exhaustive_graph_sweep(5, n_min=1))
    randoms = oracles.random_corpus(100, 1, 10, seed=7, connected=False)
    bad = _detection_disagreements(exhaustive + labeled + randoms)
    # independent ground truth for the random part
    for g in randoms:
        h = nx.Graph(list(g.edges))
        h.add_nodes_from(range(g.n))
        truth = structure_truth(g)
        assert truth.components == nx.number_connected_components(h)
        if g.n and truth.components == 1:
            assert truth.bipartite == nx.is_bipartite(h)
    ok = not bad
    acceptance_record(
        "7", ok,
        f"detection on {len(exhaustive)} iso classes (n<=6), {len(labeled)} labelled graphs (n<=5) "
        f"and 100 random graphs: {len(bad)} disagreements",
    )
    assert ok


def test_criterion_8_walk_oracle(acceptance_record):
    rng = np.random.default_rng(8)
    fixtures = [
        cycle_graph(3), cycle_graph(4), path_graph(3), star_graph(4), complete_graph(4), complete_graph(5),
        complete_graph(6), complete_bipartite_graph(3, 3), pinwheel_graph(2, 3), pinwheel_graph(3, 4),
        petersen_graph(), random_tree(6, rng), join_at_vertex(cycle_graph(4), 0, path_graph(3), 0),
        random_connected_graph(8, rng, 0.3),
    ]
    fixtures = [g for g in fixtures if g.m <= 20]
    failures = [
        (g, k) for g in fixtures for k in range(1, 7)
        if oracles.verify_Bk_equals_walkcounts(g, k).failed
    ]
    ok = not failures
    acceptance_record("8", ok, f"B^k = brute-force walk counts on {len(fixtures)} fixtures, k<=6: {len(failures)} mismatches")
    assert ok


def _line_digraph_strong(g):
    d = nx.DiGraph()
    arcs = [(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges]
    d.add_nodes_from(arcs)
    for u, v in arcs:
        for w in g.neighbors(v):
            if w != u:
                d.add_edge((u, v), (v, w))
    return d.number_of_nodes() > 0 and nx.is_strongly_connected(d)


def test_criterion_9_irreducibility(acceptance_record):
    graphs = list(oracles.exhaustive_graph_sweep(7, n_min=1, up_to_isomorphism=True))
    violations = oracle_mismatch = covered = 0
    for g in graphs:
        strong = directed_edge_graph_strongly_connected(g)
        if strong != _line_digraph_strong(g):
            oracle_mismatch += 1
        if g.is_connected() and not is_cycle(g) and g.d_min >= 2:
            covered += 1
            violations += not strong
    ok = violations == 0 and oracle_mismatch == 0
    acceptance_record(
        "9", ok,
        f"irreducibility over {len(graphs)} graphs ({covered} under hypothesis): {violations} violations, "
        f"{oracle_mismatch} disagreements with networkx SCC",
    )
    assert ok


def test_criterion_10_adding_trees(acceptance_record):
    rng = np.random.default_rng(10)
    bad = 0
    worst = 0.0
    for _ in range(50):
        base = random_connected_graph(int(rng.integers(3, 8)), rng)
        t = random_tree(int(rng.integers(1, 7)), rng)
        rep = theory.adding_tree_invariance(base, t, int(rng.integers(base.n)), int(rng.integers(t.n)), tol=1e-6)
        bad += rep.failed
        worst = max(worst, rep.residual)
    ok = bad == 0
    acceptance_record("10", ok, f"50 random tree joins: {bad} mismatches, worst pair distance {worst:.1e}")
    assert ok
