import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nbspec import detect, linalg, theory
from nbspec.graph import Graph
from nbspec.operators import build_operators, verify_decomposition, verify_product_identities


@st.composite
def graphs(draw, n_max=8):
    n = draw(st.integers(1, n_max))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph(n, chosen)


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_identities_exact(g):
    assert verify_product_identities(build_operators(g)).residual == 0


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_ihara(g):
    assert theory.ihara_check(g).passed


@settings(max_examples=50, deadline=None)
@given(graphs(7))
def test_decomposition(g):
    assert verify_decomposition(build_operators(g)).passed


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_detection_agrees_with_structure(g):
    assert detect.detect_all(g).all_agree


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_trace_of_B_powers_counts_closed_walks(g):
    # tr B = 0 and tr B^2 = 0: no backtracking closed walks of length 1 or 2
    B = build_operators(g).B
    assert np.trace(B) == 0 and np.trace(B @ B) == 0
    s = linalg.eigenvalues(B)
    assert abs(s.values.sum()) <= 1e-8 * max(1, len(s))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_corrected_bound_never_violated(g):
    for r in theory.spectral_radius_bounds(g):
        if r.name in ("upper_bound_theorem", "upper_bound_corollary_corrected", "gershgorin"):
            assert r.status != "fail", r.to_dict()
