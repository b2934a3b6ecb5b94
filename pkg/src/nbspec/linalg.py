"""Dense numerics for small nonsymmetric matrices.

Eigenvalues come from a self-contained pipeline: permutation + diagonal
balancing, Householder reduction to Hessenberg form and Francis double-shift
QR iteration. Matrices with integer entries additionally get their integer
eigenvalues snapped to exact values using exact rank computations, which
repairs the eps**(1/k) scatter of eigenvalues belonging to large Jordan
blocks (trees hanging off a graph give K exactly such blocks at 0).

Singular value decompositions (rank, nullspace, eigenvectors) use numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

DEFAULT_TOL = 1e-6
RANK_RTOL = 1e-10
MAX_DIM = 400

_EPS = np.finfo(float).eps
_SNAP_RADIUS = 0.25


class LinalgError(ArithmeticError):
    pass


class ConvergenceError(LinalgError):
    """QR iteration hit its cap. ``partial`` holds the eigenvalues already deflated."""

    def __init__(self, message: str, partial: np.ndarray):
        super().__init__(message)
        self.partial = partial


def _square(M) -> np.ndarray:
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {A.shape}")
    return A


# ---------------------------------------------------------------------------
# Determinants


def determinant(M) -> float | complex:
    """Determinant via LU with partial pivoting."""
    A = _square(M)
    A = np.array(A, dtype=np.result_type(A.dtype, float))
    n = A.shape[0]
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if A[p, k] == 0:
            return A.dtype.type(0)
        if p != k:
            A[[k, p]] = A[[p, k]]
            sign = -sign
        A[k + 1:, k] /= A[k, k]
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    det = np.prod(np.diag(A)) if n else A.dtype.type(1)
    return sign * det


def charpoly_at(M, lam) -> float | complex:
    """det(lam * I - M)."""
    A = _square(M)
    return determinant(lam * np.eye(A.shape[0]) - A)


# ---------------------------------------------------------------------------
# Eigenvalues


def balance(M) -> tuple[np.ndarray, int, int]:
    """Permute and scale M so eigenvalues are better conditioned.

    Returns (A, ilo, ihi). Rows and columns outside ilo..ihi (inclusive) hold
    isolated eigenvalues on the diagonal of a triangular part; only the block
    A[ilo:ihi+1, ilo:ihi+1] needs iterating.
    """
    A = np.array(_square(M), dtype=float)
    n = A.shape[0]
    ilo, ihi = 0, n - 1

    def swap(i: int, j: int) -> None:
        if i != j:
            A[[i, j]] = A[[j, i]]
            A[:, [i, j]] = A[:, [j, i]]

    # rows with no off-diagonal entries in the active block go to the bottom
    while ihi > ilo:
        act = A[ilo:ihi + 1, ilo:ihi + 1] != 0
        off = act.sum(axis=1) - np.diag(act)
        hits = np.flatnonzero(off == 0)
        if hits.size == 0:
            break
        swap(ilo + int(hits[-1]), ihi)
        ihi -= 1
    # columns likewise go to the top
    while ihi > ilo:
        act = A[ilo:ihi + 1, ilo:ihi + 1] != 0
        off = act.sum(axis=0) - np.diag(act)
        hits = np.flatnonzero(off == 0)
        if hits.size == 0:
            break
        swap(ilo + int(hits[0]), ilo)
        ilo += 1

    radix = 2.0
    converged = ihi <= ilo
    while not converged:
        converged = True
        for i in range(ilo, ihi + 1):
            others = np.r_[ilo:i, i + 1:ihi + 1]
            c = float(np.abs(A[others, i]).sum())
            r = float(np.abs(A[i, others]).sum())
            if c == 0.0 or r == 0.0:
                continue
            s = c + r
            f = 1.0
            g = r / radix
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                A[i, :] /= f
                A[:, i] *= f
    return A, ilo, ihi


def hessenberg(M) -> np.ndarray:
    """Upper Hessenberg matrix orthogonally similar to M (Householder reflections)."""
    H = np.array(_square(M), dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        if not np.any(x[1:]):
            continue
        v = x.copy()
        v[0] += math.copysign(np.linalg.norm(x), x[0])
        beta = 2.0 / (v @ v)
        H[k + 1:, k:] -= beta * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= beta * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def _house(x: np.ndarray) -> tuple[np.ndarray, float]:
    """Householder vector v (v[0] = 1) and beta with (I - beta v v^T) x = ||x|| e1."""
    sigma = float(x[1:] @ x[1:])
    v = x.astype(float).copy()
    v[0] = 1.0
    if sigma == 0.0:
        return v, 0.0
    x0 = float(x[0])
    mu = math.sqrt(x0 * x0 + sigma)
    v0 = x0 - mu if x0 <= 0 else -sigma / (x0 + mu)
    beta = 2.0 * v0 * v0 / (sigma + v0 * v0)
    v[1:] = x[1:] / v0
    return v, beta


def _eig2(a: float, b: float, c: float, d: float) -> tuple[complex, complex]:
    mid = 0.5 * (a + d)
    p = 0.5 * (a - d)
    disc = p * p + b * c
    if disc >= 0:
        sq = math.sqrt(disc)
        r1 = mid + math.copysign(sq, mid) if mid != 0 else sq
        r2 = (a * d - b * c) / r1 if r1 != 0 else mid - sq
        return complex(r1), complex(r2)
    im = math.sqrt(-disc)
    return complex(mid, im), complex(mid, -im)


def _francis_qr(H: np.ndarray, max_iter: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix (destroys H)."""
    n = H.shape[0]
    eigs = np.zeros(n, dtype=complex)
    anorm = float(np.abs(H).sum()) or 1.0
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        l = hi
        while l > 0:
            s = abs(H[l - 1, l - 1]) + abs(H[l, l])
            if s == 0.0:
                s = anorm
            if abs(H[l, l - 1]) <= _EPS * s:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if l == hi - 1:
            eigs[hi - 1], eigs[hi] = _eig2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
            hi -= 2
            its = 0
            continue
        if total >= max_iter:
            raise ConvergenceError(
                f"QR iteration did not converge after {total} iterations",
                partial=eigs[hi + 1:].copy(),
            )
        its += 1
        total += 1
        if its % 10 == 0:
            # stagnation: restart from a randomised exceptional shift
            w = (abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])) * rng.uniform(0.5, 1.5)
            s, t = 1.5 * w, w * w
        else:
            s = H[hi - 1, hi - 1] + H[hi, hi]
            t = H[hi - 1, hi - 1] * H[hi, hi] - H[hi - 1, hi] * H[hi, hi - 1]
        h00, h01, h10, h11, h21 = H[l, l], H[l, l + 1], H[l + 1, l], H[l + 1, l + 1], H[l + 2, l + 1]
        x = h00 * h00 + h01 * h10 - s * h00 + t
        y = h10 * (h00 + h11 - s)
        z = h10 * h21
        for k in range(l, hi - 1):
            v, beta = _house(np.array([x, y, z]))
            if beta != 0.0:
                r = max(l, k - 1)
                blk = H[k:k + 3, r:hi + 1]
                blk -= beta * np.outer(v, v @ blk)
                top = min(k + 3, hi)
                blk = H[l:top + 1, k:k + 3]
                blk -= beta * np.outer(blk @ v, v)
                if k > l:
                    H[k + 1:k + 3, k - 1] = 0.0
            x = H[k + 1, k]
            y = H[k + 2, k]
            if k < hi - 2:
                z = H[k + 3, k]
        v, beta = _house(np.array([x, y]))
        if beta != 0.0:
            blk = H[hi - 1:hi + 1, hi - 2:hi + 1]
            blk -= beta * np.outer(v, v @ blk)
            blk = H[l:hi + 1, hi - 1:hi + 1]
            blk -= beta * np.outer(blk @ v, v)
            H[hi, hi - 2] = 0.0
    return eigs


def _is_integral(A: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(A)) and np.all(A == np.round(A)))


def _integer_rank(rows: list[list[int]]) -> int:
    """Exact rank over the rationals by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        prow = A[rank]
        for i in range(rank + 1, m):
            row = A[i]
            a = row[col]
            for j in range(col + 1, n):
                q, rem = divmod(row[j] * p - a * prow[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row[j] = q
            row[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def integer_algebraic_multiplicity(M, value: int) -> int:
    """Exact algebraic multiplicity of the integer ``value`` as an eigenvalue of integer M.

    Uses the stabilised rank of (M - value I)^j, computed in exact arithmetic.
    """
    A = _square(M)
    if not _is_integral(A):
        raise LinalgError("exact multiplicity needs an integer-valued matrix")
    n = A.shape[0]
    N = np.array([[int(round(x)) for x in row] for row in A], dtype=object)
    for i in range(n):
        N[i, i] -= int(value)
    P = N
    rank = _integer_rank(P.tolist())
    while True:
        if rank == n:
            return 0
        P = P.dot(N)
        nxt = _integer_rank(P.tolist())
        if nxt == rank:
            return n - rank
        rank = nxt


def _snap_integer_eigenvalues(A: np.ndarray, eigs: np.ndarray) -> np.ndarray:
    near = np.round(eigs.real)
    dist = np.abs(eigs - near)
    scattered = (dist > 1e-10 * np.maximum(1.0, np.abs(near))) & (dist < _SNAP_RADIUS)
    if not scattered.any():
        return eigs
    out = eigs.copy()
    for value in sorted({int(v) for v in near[scattered]}):
        k = integer_algebraic_multiplicity(A, value)
        if k:
            nearest = np.argsort(np.abs(out - value), kind="stable")[:k]
            out[nearest] = value
    return out


def _sort_key(z: complex) -> tuple:
    return (-round(abs(z), 10), -round(z.real, 10), -round(z.imag, 10))


def eigenvalues(
    M, tol: float = DEFAULT_TOL, *, max_dim: int = MAX_DIM, snap_integers: bool = True
) -> Spectrum:
    """All complex eigenvalues of a real square matrix, with algebraic multiplicity.

    Raises ConvergenceError (carrying the deflated eigenvalues) when the QR
    iteration exceeds 100 * dim iterations.
    """
    A = _square(M)
    if np.iscomplexobj(A):
        raise LinalgError("eigenvalues() expects a real matrix")
    n = A.shape[0]
    if n > max_dim:
        raise LinalgError(f"matrix dimension {n} exceeds cap {max_dim}")
    Ab, ilo, ihi = balance(A)
    eigs = np.zeros(n, dtype=complex)
    isolated = [k for k in range(n) if k < ilo or k > ihi]
    eigs[isolated] = np.diag(Ab)[isolated]
    if ihi >= ilo:
        H = hessenberg(Ab[ilo:ihi + 1, ilo:ihi + 1])
        rng = np.random.default_rng(n)
        eigs[ilo:ihi + 1] = _francis_qr(H, 100 * max(n, 1), rng)
    if snap_integers and n and _is_integral(A):
        eigs = _snap_integer_eigenvalues(A, eigs)
    return Spectrum.from_values(eigs, tol)


# ---------------------------------------------------------------------------
# Spectra as multisets


@dataclass(frozen=True)
class MatchResult:
    ok: bool
    max_distance: float
    pairs: list[tuple[int, int]] = field(repr=False)


def match_multisets(a: Sequence[complex], b: Sequence[complex], tol: float = DEFAULT_TOL) -> MatchResult:
    """Greedy minimum-distance pairing of two complex multisets.

    ``ok`` means equal sizes and every matched pair within ``tol``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        return MatchResult(False, math.inf, [])
    if a.size == 0:
        return MatchResult(True, 0.0, [])
    d = np.abs(a[:, None] - b[None, :])
    order = np.argsort(d, axis=None, kind="stable")
    used_a = np.zeros(a.size, bool)
    used_b = np.zeros(b.size, bool)
    pairs = []
    worst = 0.0
    for flat in order:
        i, j = divmod(int(flat), b.size)
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        pairs.append((i, j))
        worst = max(worst, float(d[i, j]))
        if len(pairs) == a.size:
            break
    return MatchResult(worst <= tol, worst, pairs)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset (algebraic multiplicity expanded).

    Values are sorted by decreasing modulus, then real part, then imaginary
    part. Clustering and membership use ``cluster_tol * max(1, radius)``.
    """

    values: np.ndarray
    cluster_tol: float = DEFAULT_TOL

    @classmethod
    def from_values(cls, values, cluster_tol: float = DEFAULT_TOL) -> Spectrum:
        vals = sorted((complex(z) for z in np.asarray(values).ravel()), key=_sort_key)
        arr = np.array(vals, dtype=complex)
        arr.setflags(write=False)
        return cls(arr, cluster_tol)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[complex]:
        return iter(self.values)

    @property
    def radius(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0

    @property
    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.values))) if len(self) else math.nan

    @property
    def scale(self) -> float:
        return max(1.0, self.radius)

    def _tol(self, tol: float | None) -> float:
        return (self.cluster_tol if tol is None else tol) * self.scale

    def clusters(self, tol: float | None = None) -> list[tuple[complex, int]]:
        """Single-linkage clusters as (centroid, multiplicity) pairs."""
        eps = self._tol(tol)
        n = len(self)
        label = list(range(n))

        def find(i: int) -> int:
            while label[i] != i:
                label[i] = label[label[i]]
                i = label[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if abs(self.values[i] - self.values[j]) <= eps:
                    label[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        out = [(complex(np.mean(self.values[idx])), len(idx)) for idx in groups.values()]
        return sorted(out, key=lambda c: _sort_key(c[0]))

    def multiplicity(self, z: complex, tol: float | None = None) -> int:
        return int(np.sum(np.abs(self.values - z) <= self._tol(tol)))

    def contains(self, z: complex, tol: float | None = None) -> bool:
        return self.multiplicity(z, tol) > 0

    def matches(self, other: Sequence[complex] | Spectrum, tol: float | None = None) -> MatchResult:
        other_vals = other.values if isinstance(other, Spectrum) else other
        return match_multisets(self.values, other_vals, self.cluster_tol if tol is None else tol)

    def is_symmetric(self, tol: float | None = None) -> bool:
        """Invariant under negation as a multiset."""
        return self.matches(-self.values, tol).ok

    def dominant_real(self, tol: float | None = None) -> float | None:
        """The real non-negative eigenvalue of maximal modulus, if one exists."""
        if not len(self):
            return None
        rho = self.radius
        eps = self._tol(tol)
        hits = [z for z in self.values if abs(abs(z) - rho) <= eps and abs(z - rho) <= eps]
        return rho if hits else None


# ---------------------------------------------------------------------------
# Rank, nullspace, eigenvectors


def _cutoff(s: np.ndarray, shape: tuple[int, int], tol: float | None) -> float:
    norm = float(s[0]) if s.size else 0.0
    factor = RANK_RTOL * max(shape) if tol is None else tol
    return factor * norm


def numerical_rank(M, tol: float | None = None) -> int:
    """Number of singular values above tol * ||M||_2 (default tol: 1e-10 * max(rows, cols))."""
    A = np.asarray(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > _cutoff(s, A.shape, tol)))


def nullspace(M, tol: float | None = None) -> np.ndarray:
    """Orthonormal nullspace basis as the columns of a (cols, k) array."""
    A = np.asarray(M)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=A.dtype)
    if rows == 0:
        return np.eye(cols, dtype=np.result_type(A.dtype, float))
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > _cutoff(s, A.shape, tol)))
    return vh[rank:].conj().T


def spectral_norm(M) -> float:
    A = np.asarray(M)
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def eigenvector_for(M, lam: complex, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unit eigenvector for an (approximate) eigenvalue ``lam``.

    Takes the right singular vector of M - lam I for the smallest singular
    value, phase-fixed so its largest entry is real and positive.
    """
    A = _square(M)
    n = A.shape[0]
    N = A.astype(complex) - lam * np.eye(n)
    _, _, vh = np.linalg.svd(N)
    v = _fix_phase(vh[-1].conj())
    residual = float(np.linalg.norm(A @ v - lam * v))
    bound = 10 * tol * spectral_norm(A)
    if residual > bound and residual > 10 * tol * abs(lam):
        raise LinalgError(f"{lam} is not an eigenvalue within tolerance (residual {residual:.3g})")
    return v


@dataclass(frozen=True)
class PerronResult:
    rho: float
    vector: np.ndarray
    converged: bool
    degenerate: bool = False
    method: str = "power"


def power_iteration_perron(M, iters: int = 20000, tol: float = 1e-12) -> PerronResult:
    """Dominant eigenvalue and non-negative eigenvector of a non-negative matrix.

    Iterates with M + I, which has the same Perron vector and is primitive
    whenever M is irreducible, so periodic matrices converge too. Falls back
    to the QR spectrum when the iteration stalls (reducible inputs).
    """
    A = np.asarray(_square(M), dtype=float)
    if np.any(A < 0):
        raise LinalgError("power iteration needs a non-negative matrix")
    n = A.shape[0]
    if n == 0 or not A.any():
        v = np.ones(n) / math.sqrt(n) if n else np.zeros(0)
        return PerronResult(0.0, v, converged=True, degenerate=True)
    S = A + np.eye(n)
    x = np.ones(n) / math.sqrt(n)
    for _ in range(iters):
        y = S @ x
        y /= np.linalg.norm(y)
        Ay = A @ y
        rho = float(y @ Ay)
        if np.linalg.norm(Ay - rho * y) <= tol * max(1.0, rho):
            return PerronResult(rho, y, converged=True)
        x = y
    rho = eigenvalues(A).radius
    v = np.abs(eigenvector_for(A, rho, tol=1e-6).real)
    v /= np.linalg.norm(v)
    return PerronResult(rho, v, converged=False, method="qr")
