"""The non-backtracking matrix B and its companions on a shared directed-edge index.

Matrices (all dense float64 with integer entries, read-only):

* ``B``   2m x 2m, B[(u,v),(x,y)] = 1 iff v == x and u != y
* ``C``   2m x 2m edge adjacency, C[(u,v),(x,y)] = 1 iff v == x
* ``S``   2m x n, S[(u,v), x] = 1 iff v == x (head of the edge)
* ``T``   n x 2m, T[x, (u,v)] = 1 iff x == u (tail of the edge)
* ``tau`` 2m x 2m edge reversal
* ``A``, ``D`` adjacency and degree matrices
* ``K``   2n x 2n block matrix [[A, D - I], [-I, 0]]

They satisfy C = ST, B = ST - tau, D = T tau S, A = TS and
B [S T^T] = [S T^T] K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from nbspec import linalg
from nbspec.graph import DirectedEdgeIndex, Graph
from nbspec.report import FAIL, PASS, VerificationReport, status_of


class DecompositionError(linalg.LinalgError):
    """The +-1 eigenspace intersections are too small to build R."""


class SingularKError(linalg.LinalgError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NBOperators:
    graph: Graph
    index: DirectedEdgeIndex
    B: np.ndarray
    C: np.ndarray
    S: np.ndarray
    T: np.ndarray
    tau: np.ndarray
    A: np.ndarray
    D: np.ndarray
    K: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m


def adjacency_matrix(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for u, v in g.edges:
        A[u, v] = A[v, u] = 1.0
    return A


def k_matrix(A: np.ndarray, degrees) -> np.ndarray:
    n = A.shape[0]
    I = np.eye(n)
    D = np.diag(np.asarray(degrees, dtype=float))
    return np.block([[A, D - I], [-I, np.zeros((n, n))]])


def build_operators(g: Graph) -> NBOperators:
    idx = g.edge_index
    E = len(idx)
    n = g.n
    B = np.zeros((E, E))
    C = np.zeros((E, E))
    S = np.zeros((E, n))
    T = np.zeros((n, E))
    tau = np.zeros((E, E))
    for i, (u, v) in enumerate(idx.pairs):
        S[i, v] = 1.0
        T[u, i] = 1.0
        tau[i, idx.index(v, u)] = 1.0
        for w in g.neighbors(v):
            j = idx.index(v, w)
            C[i, j] = 1.0
            if w != u:
                B[i, j] = 1.0
    A = adjacency_matrix(g)
    D = np.diag(np.array(g.degrees, dtype=float))
    K = k_matrix(A, g.degrees)
    return NBOperators(
        g, idx, *(_frozen(M) for M in (B, C, S, T, tau, A, D, K))
    )


def nb_matrix(g: Graph) -> np.ndarray:
    return build_operators(g).B


def _norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M)) if M.size else 0.0


def verify_product_identities(ops: NBOperators, tol: float = 1e-12) -> VerificationReport:
    S, T, tau = ops.S, ops.T, ops.tau
    residuals = {
        "C=ST": _norm(ops.C - S @ T),
        "B=ST-tau": _norm(ops.B - (S @ T - tau)),
        "D=T.tau.S": _norm(ops.D - T @ tau @ S),
        "A=TS": _norm(ops.A - T @ S),
    }
    worst = max(residuals.values())
    return VerificationReport(
        "product_identities", status_of(worst <= tol), worst, metadata={"residuals": residuals, "tol": tol}
    )


def verify_intertwining(ops: NBOperators, tol: float = 1e-12) -> VerificationReport:
    """Residual of B [S T^T] = [S T^T] K."""
    Y = np.hstack([ops.S, ops.T.T])
    r = _norm(ops.B @ Y - Y @ ops.K)
    return VerificationReport("intertwining", status_of(r <= tol), r, metadata={"tol": tol})


def verify_K_charpoly(ops: NBOperators, samples=None, tol: float = 1e-8) -> VerificationReport:
    """det(mu^2 I - mu A + (D - I)) against det(mu I - K) at real sample points."""
    if samples is None:
        samples = np.random.default_rng(0).uniform(-3.0, 3.0, size=10)
    n = ops.n
    I = np.eye(n)
    worst = 0.0
    for mu in samples:
        lhs = linalg.determinant(mu * mu * I - mu * ops.A + (ops.D - I))
        rhs = linalg.charpoly_at(ops.K, mu)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return VerificationReport(
        "K_charpoly", status_of(worst <= tol), worst, metadata={"samples": list(samples), "tol": tol}
    )


@dataclass(frozen=True)
class Decomposition:
    """B X = X block with X = [S | T^T | R] (per connected component).

    For a disconnected graph the columns are grouped by component (each
    group ordered S, T^T, R) and ``block`` is block diagonal accordingly.
    """

    X: np.ndarray
    block: np.ndarray
    R: np.ndarray
    residual: float
    components: list[dict] = field(default_factory=list)


def _component_decomposition(g: Graph, tol: float):
    ops = build_operators(g)
    n, m = g.n, g.m
    E = 2 * m
    excess = m - n
    info = {"n": n, "m": m}
    R = np.zeros((E, 0))
    if m > 0:
        ST = ops.S @ ops.T
        I = np.eye(E)
        e_minus = linalg.nullspace(np.vstack([ops.tau + I, ST]))
        e_plus = linalg.nullspace(np.vstack([ops.tau - I, ST]))
        info["dim_E_minus_cap_null"] = e_minus.shape[1]
        info["dim_E_plus_cap_null"] = e_plus.shape[1]
        if excess > 0:
            if e_minus.shape[1] < excess or e_plus.shape[1] < excess:
                raise DecompositionError(
                    f"eigenspace intersections have dimensions {e_minus.shape[1]}, "
                    f"{e_plus.shape[1]}; need {excess} each"
                )
            R = np.hstack([e_minus[:, :excess], e_plus[:, :excess]])
            info["surplus_E_plus"] = e_plus.shape[1] - excess
            info["surplus_E_minus"] = e_minus.shape[1] - excess
    k = max(excess, 0)
    block = np.zeros((2 * n + 2 * k, 2 * n + 2 * k))
    block[:2 * n, :2 * n] = ops.K
    block[2 * n:2 * n + k, 2 * n:2 * n + k] = np.eye(k)
    block[2 * n + k:, 2 * n + k:] = -np.eye(k)
    X = np.hstack([ops.S, ops.T.T, R])
    return X, block, R, info


def build_decomposition(ops: NBOperators, tol: float = 1e-9) -> Decomposition:
    """Assemble X = [S | T^T | R] and check B X = X diag(K, I, -I).

    R takes m - n columns from E_{-1} cap Null(ST) (eigenvalue +1 of B) and
    m - n from E_{+1} cap Null(ST) (eigenvalue -1), each intersection being a
    single nullspace of a stacked matrix. Trees (m < n) get no R block.
    Raises DecompositionError when the identity fails or R cannot be filled.
    """
    g = ops.graph
    comps = g.components() if g.n else []
    if len(comps) <= 1:
        X, block, R, info = _component_decomposition(g, tol)
        infos = [info]
    else:
        idx = g.edge_index
        Xs, blocks, Rs, infos = [], [], [], []
        for comp in comps:
            sub = g.induced_subgraph(comp)
            Xc, bc, Rc, info = _component_decomposition(sub, tol)
            rows = [idx.index(comp[a], comp[b]) for a, b in sub.edge_index.pairs]
            for M, acc in ((Xc, Xs), (Rc, Rs)):
                full = np.zeros((len(idx), M.shape[1]))
                full[rows] = M
                acc.append(full)
            blocks.append(bc)
            info["vertices"] = comp
            infos.append(info)
        X = np.hstack(Xs)
        R = np.hstack(Rs)
        size = sum(b.shape[0] for b in blocks)
        block = np.zeros((size, size))
        at = 0
        for b in blocks:
            block[at:at + b.shape[0], at:at + b.shape[0]] = b
            at += b.shape[0]
    residual = _norm(ops.B @ X - X @ block)
    if residual > tol:
        raise DecompositionError(f"||BX - X block|| = {residual:.3g} exceeds {tol:.3g}")
    return Decomposition(X, block, R, residual, infos)


def verify_decomposition(ops: NBOperators, tol: float = 1e-9, spectral_tol: float = linalg.DEFAULT_TOL,
                         spectrum_B: linalg.Spectrum | None = None) -> VerificationReport:
    """Block identity plus multiset equality of sigma(B) and sigma(block).

    Each tree component contributes K eigenvalues +1 and -1 that B lacks
    (its B is 2 smaller than its K), so those are added to sigma(B) before
    matching.
    """
    try:
        dec = build_decomposition(ops, tol)
    except DecompositionError as exc:
        return VerificationReport("decomposition", FAIL, None, metadata={"counterexample": str(exc)})
    sB = spectrum_B if spectrum_B is not None else linalg.eigenvalues(ops.B)
    sBlock = linalg.eigenvalues(dec.block)
    deficit = sum(max(0, c["n"] - c["m"]) for c in dec.components)
    target = np.concatenate([sB.values, np.ones(deficit), -np.ones(deficit)])
    match = linalg.match_multisets(target, sBlock.values, spectral_tol)
    meta = {"components": dec.components, "spectral_match_distance": match.max_distance, "tol": tol}
    ok = match.ok
    return VerificationReport("decomposition", status_of(ok), max(dec.residual, match.max_distance), metadata=meta)


@dataclass(frozen=True)
class LiftResult:
    vector: np.ndarray
    residual: float
    annihilated: bool


def lift_K_eigenvector(ops: NBOperators, mu: complex, x_K, tol: float = 1e-9) -> LiftResult:
    """Map an eigenpair (mu, x_K) of K to B via v = S x_top + T^T x_bottom.

    The lift can vanish (e.g. the constant eigenvector of K for mu = 1); that
    is reported through ``annihilated`` rather than passed off as a success.
    """
    x = np.asarray(x_K, dtype=complex)
    n = ops.n
    if x.shape != (2 * n,):
        raise ValueError(f"K eigenvector must have length {2 * n}")
    scale = max(1.0, linalg.spectral_norm(ops.K)) * max(np.linalg.norm(x), 1e-300)
    if np.linalg.norm(ops.K @ x - mu * x) > tol * scale:
        raise ValueError("(mu, x_K) is not an eigenpair of K within tolerance")
    v = ops.S @ x[:n] + ops.T.T @ x[n:]
    size = float(np.linalg.norm(v))
    if size <= tol * float(np.linalg.norm(x)):
        return LiftResult(v, float(np.linalg.norm(ops.B @ v - mu * v)), annihilated=True)
    v = v / size
    residual = float(np.linalg.norm(ops.B @ v - mu * v))
    if residual > 10 * tol * max(1.0, linalg.spectral_norm(ops.B)):
        raise linalg.LinalgError(f"lifted vector residual {residual:.3g} too large")
    return LiftResult(v, residual, annihilated=False)


def build_K_inverse(ops: NBOperators, tol: float = 1e-12) -> np.ndarray:
    """[[0, -I], [(D-I)^-1, (D-I)^-1 A]]; K is singular exactly when a degree-1 vertex exists."""
    leaves = [v for v, d in enumerate(ops.graph.degrees) if d == 1]
    if leaves:
        raise SingularKError(
            f"K is singular: its nullity equals the number of degree-1 vertices ({len(leaves)})"
        )
    n = ops.n
    I = np.eye(n)
    W = np.diag(1.0 / (np.diag(ops.D) - 1.0))
    Kinv = np.block([[np.zeros((n, n)), -I], [W, W @ ops.A]])
    I2 = np.eye(2 * n)
    r = max(_norm(ops.K @ Kinv - I2), _norm(Kinv @ ops.K - I2))
    if r > tol:
        raise linalg.LinalgError(f"K inverse check failed, residual {r:.3g}")
    return Kinv


def to_matrix_market(M, comment: str | None = None) -> str:
    """Dense MatrixMarket ``array real general`` text (column-major values)."""
    M = np.asarray(M, dtype=float)
    lines = ["%%MatrixMarket matrix array real general"]
    if comment:
        lines += [f"% {c}" for c in comment.splitlines()]
    lines.append(f"{M.shape[0]} {M.shape[1]}")
    lines += [repr(float(x)) for x in M.T.ravel()]
    return "\n".join(lines) + "\n"


def from_matrix_market(text: str) -> np.ndarray:
    rows = [ln.strip() for ln in text.splitlines()]
    if not rows or not rows[0].startswith("%%MatrixMarket matrix array"):
        raise ValueError("not a dense MatrixMarket array")
    body = [r for r in rows[1:] if r and not r.startswith("%")]
    r, c = (int(x) for x in body[0].split())
    vals = np.array([float(x) for x in body[1:]])
    if vals.size != r * c:
        raise ValueError(f"expected {r * c} values, found {vals.size}")
    return vals.reshape(c, r).T.copy()
