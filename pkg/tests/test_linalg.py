import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbspec import linalg
from nbspec.generators import complete_graph, cycle_graph, path_graph, pinwheel_graph
from nbspec.operators import build_operators


def _directed_cycle(n):
    P = np.zeros((n, n))
    for i in range(n):
        P[i, (i + 1) % n] = 1
    return P


class TestDeterminant:
    def test_identity(self):
        assert linalg.determinant(np.eye(3)) == 1.0

    def test_diag(self):
        assert linalg.determinant(np.diag([2.0, 3.0])) == pytest.approx(6.0)

    def test_tree_B_nilpotent(self):
        B = build_operators(path_graph(3)).B
        assert linalg.determinant(np.eye(4) - B) == pytest.approx(1.0)

    def test_empty(self):
        assert linalg.determinant(np.zeros((0, 0))) == 1.0

    def test_non_square(self):
        with pytest.raises(linalg.LinalgError):
            linalg.determinant(np.zeros((2, 3)))

    def test_matches_numpy(self):
        rng = np.random.default_rng(0)
        for n in range(1, 9):
            M = rng.normal(size=(n, n))
            assert linalg.determinant(M) == pytest.approx(np.linalg.det(M), rel=1e-10)


class TestEigenvalues:
    def test_c4_adjacency(self):
        s = linalg.eigenvalues(build_operators(cycle_graph(4)).A)
        assert s.matches([2, 0, 0, -2]).ok

    def test_zero_matrix(self):
        assert linalg.eigenvalues(np.zeros((4, 4))).matches([0, 0, 0, 0]).ok

    def test_directed_triangle(self):
        roots = [np.exp(2j * np.pi * j / 3) for j in range(3)]
        assert linalg.eigenvalues(_directed_cycle(3)).matches(roots, 1e-12).ok

    def test_against_numpy_random(self):
        rng = np.random.default_rng(1)
        for n in (1, 2, 5, 12, 30):
            M = rng.normal(size=(n, n))
            assert linalg.eigenvalues(M).matches(np.linalg.eigvals(M), 1e-9).ok

    def test_against_numpy_nb_matrices(self):
        for g in (complete_graph(5), pinwheel_graph(3, 4), cycle_graph(7)):
            B = build_operators(g).B
            assert linalg.eigenvalues(B).matches(np.linalg.eigvals(B), 1e-6).ok

    def test_dimension_cap(self):
        with pytest.raises(linalg.LinalgError):
            linalg.eigenvalues(np.zeros((5, 5)), max_dim=4)

    def test_rejects_complex(self):
        with pytest.raises(linalg.LinalgError):
            linalg.eigenvalues(np.eye(2) * 1j)

    def test_defective_integer_eigenvalue_exact(self):
        J = np.diag(np.ones(5), 1)
        s = linalg.eigenvalues(J)
        assert np.all(s.values == 0)

    def test_empty(self):
        assert len(linalg.eigenvalues(np.zeros((0, 0)))) == 0

    def test_convergence_error_carries_partial(self):
        err = linalg.ConvergenceError("x", np.array([1.0]))
        assert err.partial.shape == (1,)

    def test_sorted_and_readonly(self):
        s = linalg.eigenvalues(build_operators(complete_graph(4)).B)
        mods = np.abs(s.values)
        assert np.all(np.diff(mods) <= 1e-12)
        with pytest.raises(ValueError):
            s.values[0] = 0


class TestSpectrum:
    def test_clusters_and_multiplicity(self):
        s = linalg.Spectrum.from_values([1, 1 + 1e-9, -1, 0.5])
        assert dict((round(z.real, 6), k) for z, k in s.clusters()) == {1.0: 2, -1.0: 1, 0.5: 1}
        assert s.multiplicity(1.0) == 2

    def test_symmetric(self):
        assert linalg.Spectrum.from_values([1j, -1j, 2, -2]).is_symmetric()
        assert not linalg.Spectrum.from_values([1, 2, -2]).is_symmetric()

    def test_dominant_real(self):
        assert linalg.Spectrum.from_values([2, -2, 1j]).dominant_real() == 2
        assert linalg.Spectrum.from_values([2j, -2j]).dominant_real() is None

    def test_match_sizes(self):
        assert not linalg.match_multisets([1, 2], [1]).ok


class TestNullspace:
    def test_identity(self):
        assert linalg.nullspace(np.eye(3)).shape == (3, 0)

    def test_zero(self):
        N = linalg.nullspace(np.zeros((2, 3)))
        assert N.shape == (3, 3)
        assert np.allclose(N.T @ N, np.eye(3))

    def test_K_of_P3(self):
        assert linalg.nullspace(build_operators(path_graph(3)).K).shape[1] == 2

    def test_rank_nullity(self):
        rng = np.random.default_rng(4)
        M = rng.normal(size=(6, 3)) @ rng.normal(size=(3, 8))
        assert linalg.numerical_rank(M) + linalg.nullspace(M).shape[1] == 8


class TestEigenvector:
    def test_identity(self):
        v = linalg.eigenvector_for(np.eye(2), 1.0)
        assert np.linalg.norm(v) == pytest.approx(1)

    def test_k4_uniform(self):
        v = linalg.eigenvector_for(build_operators(complete_graph(4)).A, 3.0)
        assert np.allclose(v, np.full(4, 0.5))

    def test_b_of_c3(self):
        B = build_operators(cycle_graph(3)).B
        lam = np.exp(2j * np.pi / 3)
        v = linalg.eigenvector_for(B, lam)
        assert np.linalg.norm(B @ v - lam * v) <= 1e-10

    def test_not_an_eigenvalue(self):
        with pytest.raises(linalg.LinalgError):
            linalg.eigenvector_for(np.eye(3), 2.0)


class TestPerron:
    def test_k4(self):
        r = linalg.power_iteration_perron(build_operators(complete_graph(4)).B)
        assert r.rho == pytest.approx(2.0, abs=1e-9)
        assert np.all(r.vector >= -1e-12)

    def test_identity(self):
        assert linalg.power_iteration_perron(np.eye(3)).rho == pytest.approx(1.0)

    def test_pinwheel(self):
        r = linalg.power_iteration_perron(build_operators(pinwheel_graph(2, 3)).B)
        assert r.rho == pytest.approx(3 ** (1 / 3), abs=1e-6)
        assert abs(r.rho - 1.442250) <= 1e-6

    def test_zero_is_degenerate(self):
        r = linalg.power_iteration_perron(np.zeros((3, 3)))
        assert r.degenerate and r.rho == 0 and np.linalg.norm(r.vector) == pytest.approx(1)

    def test_periodic_cycle(self):
        r = linalg.power_iteration_perron(build_operators(cycle_graph(5)).B)
        assert r.rho == pytest.approx(1.0)

    def test_negative_rejected(self):
        with pytest.raises(linalg.LinalgError):
            linalg.power_iteration_perron(-np.eye(2))


matrices = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.floats(-5, 5, allow_nan=False), min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs).reshape(n, n)
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_trace_and_det_invariants(M):
    s = linalg.eigenvalues(M)
    n = M.shape[0]
    norm = max(1.0, np.linalg.norm(M))
    assert abs(s.values.sum() - np.trace(M)) <= 1e-8 * n * norm
    det = np.prod(s.values)
    ref = linalg.determinant(M)
    assert abs(det - ref) <= 1e-6 * max(1.0, abs(ref))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_conjugate_closed_and_transpose(M):
    s = linalg.eigenvalues(M)
    assert s.matches(np.conj(s.values), 1e-9 * max(1, s.radius)).ok
    tol = 1e-6 * max(1.0, np.linalg.norm(M))
    # transposes agree unless the spectrum is ill-conditioned; compare with numpy on the same footing
    ref = np.linalg.eigvals(M.T)
    if linalg.match_multisets(np.linalg.eigvals(M), ref, tol).ok:
        assert linalg.eigenvalues(M.T).matches(s, math.sqrt(tol)).ok
