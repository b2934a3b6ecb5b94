"""Structural properties recovered from the K and B spectra alone.

Multiplicities here are geometric, read off numerical ranks with the linalg
threshold (1e-10 * ||M|| * dim), so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from nbspec import linalg
from nbspec.graph import Graph, StructureTruth, structure_truth
from nbspec.operators import build_operators
from nbspec.report import FAIL, NOT_APPLICABLE, PASS, VerificationReport, status_of


def _geometric_multiplicity(M, value: float, tol: float | None) -> int:
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 0:
        return 0
    return n - linalg.numerical_rank(M - value * np.eye(n), tol)


def detect_components(K, tol: float | None = None) -> int:
    """Number of components as dim Null(K - I)."""
    return _geometric_multiplicity(K, 1.0, tol)


def detect_degree1_count(K, tol: float | None = None) -> int:
    """Number of degree-1 vertices as the nullity of K."""
    return _geometric_multiplicity(K, 0.0, tol)


@dataclass(frozen=True)
class BipartiteDetection:
    """The spectral bipartiteness conditions, each evaluated independently.

    ``applicable`` is False for disconnected graphs; the flags are then None.
    """

    applicable: bool
    via_minus_one: bool | None = None
    via_symmetry_K: bool | None = None
    via_symmetry_B: bool | None = None
    via_extremes: bool | None = None

    @property
    def via_symmetry(self) -> bool | None:
        if not self.applicable:
            return None
        return self.via_symmetry_K and self.via_symmetry_B

    def flags(self) -> dict[str, bool | None]:
        return {
            "via_minus_one": self.via_minus_one,
            "via_symmetry_K": self.via_symmetry_K,
            "via_symmetry_B": self.via_symmetry_B,
            "via_extremes": self.via_extremes,
        }

    def consistent(self) -> bool:
        vals = set(self.flags().values())
        return len(vals) == 1


def _extremes_opposite(s: linalg.Spectrum, tol: float) -> bool:
    """A real non-negative eigenvalue of maximal modulus exists and its negative is present.

    The empty spectrum of an edgeless graph counts as vacuously symmetric.
    """
    if not len(s):
        return True
    mu1 = s.dominant_real(tol)
    return mu1 is not None and s.contains(-mu1, tol)


def detect_bipartite(g: Graph, sigma_K: linalg.Spectrum | None = None, sigma_B: linalg.Spectrum | None = None,
                     tol: float = linalg.DEFAULT_TOL) -> BipartiteDetection:
    if not g.is_connected():
        return BipartiteDetection(False)
    ops = build_operators(g)
    sK = sigma_K if sigma_K is not None else linalg.eigenvalues(ops.K)
    sB = sigma_B if sigma_B is not None else linalg.eigenvalues(ops.B)
    n = ops.K.shape[0]
    minus_one = n - linalg.numerical_rank(ops.K + np.eye(n)) > 0
    return BipartiteDetection(
        True,
        via_minus_one=bool(minus_one),
        via_symmetry_K=sK.is_symmetric(tol),
        via_symmetry_B=sB.is_symmetric(tol),
        via_extremes=_extremes_opposite(sB, tol),
    )


@dataclass(frozen=True)
class DetectionResult:
    components: int
    degree1_count: int
    bipartite: BipartiteDetection
    truth: StructureTruth

    @property
    def agreement(self) -> dict[str, bool]:
        out = {
            "components": self.components == self.truth.components,
            "degree1_count": self.degree1_count == self.truth.degree1_count,
        }
        if self.bipartite.applicable:
            for name, flag in self.bipartite.flags().items():
                out[f"bipartite_{name}"] = flag == self.truth.bipartite
        return out

    @property
    def all_agree(self) -> bool:
        return all(self.agreement.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "components": self.components,
            "degree1_count": self.degree1_count,
            "bipartite": self.bipartite.flags() if self.bipartite.applicable else NOT_APPLICABLE,
            "truth": {
                "components": self.truth.components,
                "degree1_count": self.truth.degree1_count,
                "bipartite": self.truth.bipartite,
            },
            "agreement": self.agreement,
        }


def detect_all(g: Graph, tol: float = linalg.DEFAULT_TOL) -> DetectionResult:
    ops = build_operators(g)
    return DetectionResult(
        detect_components(ops.K),
        detect_degree1_count(ops.K),
        detect_bipartite(g, tol=tol),
        structure_truth(g),
    )


def detection_reports(g: Graph, tol: float = linalg.DEFAULT_TOL) -> list[VerificationReport]:
    res = detect_all(g, tol)
    agree = res.agreement
    meta = {"rank_rtol": linalg.RANK_RTOL, "tol": tol}

    def report(name: str, key: str, detected, truth) -> VerificationReport:
        ok = agree[key]
        m = dict(meta, detected=detected, truth=truth)
        if not ok:
            m["counterexample"] = f"detected {detected}, ground truth {truth}"
        return VerificationReport(name, status_of(ok), None, metadata=m)

    out = [
        report("detect_components", "components", res.components, res.truth.components),
        report("detect_degree1_count", "degree1_count", res.degree1_count, res.truth.degree1_count),
    ]
    if res.bipartite.applicable:
        for name, flag in res.bipartite.flags().items():
            out.append(report(f"detect_bipartite_{name}", f"bipartite_{name}", flag, res.truth.bipartite))
    else:
        out.append(VerificationReport("detect_bipartite", NOT_APPLICABLE, hypotheses={"connected": False}))
    return out


def verify_K_eigvec_form(K, tol: float = 1e-8, spectrum: linalg.Spectrum | None = None) -> VerificationReport:
    """Every eigenvector [a; b] of K at mu satisfies a = -mu b.

    Checks a basis of each numerical eigenspace. Clusters whose geometric
    multiplicity is below the algebraic one are logged as defective.
    """
    K = np.asarray(K, dtype=float)
    N = K.shape[0]
    n = N // 2
    s = spectrum if spectrum is not None else linalg.eigenvalues(K)
    worst = 0.0
    defective = []
    checked = 0
    scale = max(1.0, linalg.spectral_norm(K))
    for mu, alg in s.clusters():
        M = K.astype(complex) - mu * np.eye(N)
        basis = linalg.nullspace(M, 1e-8)
        if basis.shape[1] == 0:
            basis = linalg.eigenvector_for(K, mu)[:, None]
        if basis.shape[1] < alg:
            defective.append({"mu": mu, "algebraic": alg, "geometric": basis.shape[1]})
        for v in basis.T:
            a, b = v[:n], v[n:]
            worst = max(worst, float(np.linalg.norm(a + mu * b) / (np.linalg.norm(v) * scale)))
            checked += 1
    meta = {"eigenvectors_checked": checked, "defective": defective, "tol": tol}
    status = PASS if worst <= tol else FAIL
    return VerificationReport("K_eigvec_form", status, worst, metadata=meta)
