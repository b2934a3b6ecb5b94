"""Closed-form non-backtracking spectra and executable versions of the spectral bounds.

Every check returns a report that carries the hypothesis it relied on, so a
graph outside a result's scope is reported as not applicable instead of
silently passing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from nbspec import linalg
from nbspec.generators import cycle_graph, join_at_vertex
from nbspec.graph import Graph, directed_edge_graph_strongly_connected, is_cycle, is_tree, two_core
from nbspec.operators import NBOperators, build_operators
from nbspec.report import FAIL, NOT_APPLICABLE, PASS, VerificationReport, status_of

BOUND_SLACK = 1e-8
HYPOTHESIS_SLACK = 1e-9
DEFAULT_U_SAMPLES = (0.1, 0.3, 0.5, 0.7, -0.4)


class HypothesisError(ValueError):
    """Input outside the scope of the requested closed form or formula."""


def _sqrt_disc(disc: float) -> complex:
    """Square root that treats a rounding-level discriminant as an exact double root."""
    if abs(disc) <= 1e-9 * max(1.0, abs(disc)):
        return 0.0
    return cmath.sqrt(disc)


def _roots_of_unity(n: int, scale: float = 1.0) -> list[complex]:
    return [scale * cmath.exp(2j * math.pi * j / n) for j in range(n)]


@dataclass(frozen=True)
class ClosedFormSpectrum:
    family: str
    values: np.ndarray
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, family: str, values, **params) -> ClosedFormSpectrum:
        arr = linalg.Spectrum.from_values(values).values
        return cls(family, arr, params)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def radius(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0

    def matches(self, spectrum, tol: float = linalg.DEFAULT_TOL) -> linalg.MatchResult:
        vals = spectrum.values if isinstance(spectrum, linalg.Spectrum) else spectrum
        return linalg.match_multisets(self.values, vals, tol)


def tree_spectrum(g: Graph) -> ClosedFormSpectrum:
    """B of a tree is nilpotent: 0 with multiplicity 2(n - 1)."""
    if not is_tree(g):
        raise HypothesisError("tree_spectrum needs a tree")
    return ClosedFormSpectrum.build("tree", np.zeros(2 * (g.n - 1)), n=g.n)


def cycle_spectrum(n: int) -> ClosedFormSpectrum:
    if n < 3:
        raise HypothesisError(f"cycle needs n >= 3, got {n}")
    return ClosedFormSpectrum.build("cycle", _roots_of_unity(n) * 2, n=n)


def directed_cycle_spectrum(n: int) -> ClosedFormSpectrum:
    if n < 1:
        raise HypothesisError(f"directed cycle needs n >= 1, got {n}")
    return ClosedFormSpectrum.build("directed-cycle", _roots_of_unity(n), n=n)


def _remove_nearest(values: list[complex], target: complex) -> None:
    k = min(range(len(values)), key=lambda i: abs(values[i] - target))
    values.pop(k)


def regular_spectrum(g: Graph, spectrum_A: linalg.Spectrum | None = None) -> ClosedFormSpectrum:
    """Both roots of mu^2 - lam mu + (d - 1) per adjacency eigenvalue lam, plus +-1 each m - n times.

    For the 1-regular P_2 and the isolated vertex m - n is negative; the
    surplus +-1 values are then removed instead of added.
    """
    if not g.is_connected() or not g.is_regular():
        raise HypothesisError("regular_spectrum needs a connected regular graph")
    d = g.degrees[0]
    if spectrum_A is None:
        spectrum_A = linalg.eigenvalues(build_operators(g).A)
    vals: list[complex] = []
    for lam in spectrum_A.values.real:
        disc = _sqrt_disc(lam * lam - 4 * (d - 1))
        vals += [(lam + disc) / 2, (lam - disc) / 2]
    excess = g.m - g.n
    if excess >= 0:
        vals += [1.0] * excess + [-1.0] * excess
    else:
        for _ in range(-excess):
            _remove_nearest(vals, 1.0)
            _remove_nearest(vals, -1.0)
    return ClosedFormSpectrum.build("regular", vals, d=d, n=g.n, m=g.m)


def pinwheel_spectrum(p: int, k: int) -> ClosedFormSpectrum:
    if p < 2:
        raise HypothesisError("pinwheel_spectrum needs p >= 2; use cycle_spectrum for p = 1")
    if k < 3:
        raise HypothesisError(f"pinwheel needs k >= 3, got {k}")
    vals = _roots_of_unity(k) * p
    odd = [cmath.exp(1j * math.pi * j / k) for j in range(1, 2 * k, 2)]
    vals += odd * (p - 1)
    vals += _roots_of_unity(k, (2 * p - 1) ** (1.0 / k))
    return ClosedFormSpectrum.build("pinwheel", vals, p=p, k=k, radius=(2 * p - 1) ** (1.0 / k))


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray
    residual: float


def pendant_cycle_eigenpairs(gHat: Graph, v: int, n_cycle: int, tol: float = 1e-9):
    """Join C_{n_cycle} to gHat at v and build the explicit cycle eigenvectors.

    The vector lives on the two directed traversals of the attached cycle:
    omega^t along one direction and -omega^t along the other, with t counting
    from the edge that leaves v. Returns the joined graph and the eigenpairs.
    """
    if n_cycle < 3:
        raise HypothesisError(f"pendant cycle needs length >= 3, got {n_cycle}")
    G = join_at_vertex(gHat, v, cycle_graph(n_cycle), 0)
    cyc = [v] + list(range(gHat.n, gHat.n + n_cycle - 1))
    idx = G.edge_index
    forward = [idx.index(cyc[t], cyc[(t + 1) % n_cycle]) for t in range(n_cycle)]
    back = [idx.index(cyc[-t % n_cycle], cyc[(-t - 1) % n_cycle]) for t in range(n_cycle)]
    if len(set(forward) | set(back)) != 2 * n_cycle:
        raise AssertionError("pendant cycle edge bookkeeping produced overlapping edges")
    B = build_operators(G).B
    pairs = []
    for j in range(n_cycle):
        omega = cmath.exp(2j * math.pi * j / n_cycle)
        x = np.zeros(len(idx), dtype=complex)
        for t in range(n_cycle):
            x[forward[t]] = omega ** t
            x[back[t]] = -(omega ** t)
        x /= np.linalg.norm(x)
        r = float(np.linalg.norm(B @ x - omega * x))
        if r > tol:
            raise linalg.LinalgError(f"pendant cycle eigenvector j={j} has residual {r:.3g}")
        pairs.append(EigenPair(omega, x, r))
    return G, pairs


def ihara_check(g: Graph, u_samples=DEFAULT_U_SAMPLES, tol: float = 1e-8,
                ops: NBOperators | None = None) -> VerificationReport:
    """det(I - uB) against (1 - u^2)^(m - n) det(u^2 (D - I) - uA + I)."""
    ops = ops or build_operators(g)
    if g.m < g.n and any(abs(abs(u) - 1) < 1e-12 for u in u_samples):
        raise HypothesisError("u = +-1 is a pole of the right-hand side when m < n")
    In = np.eye(g.n)
    I2m = np.eye(2 * g.m)
    residuals = []
    for u in u_samples:
        lhs = linalg.determinant(I2m - u * ops.B)
        rhs = (1 - u * u) ** (g.m - g.n) * linalg.determinant(u * u * (ops.D - In) - u * ops.A + In)
        residuals.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
    worst = max(residuals, default=0.0)
    return VerificationReport(
        "ihara", status_of(worst <= tol), worst,
        metadata={"u_samples": list(u_samples), "residuals": residuals, "tol": tol},
    )


def mu_from_lambda(lam: float, x, y, D) -> tuple[complex, complex]:
    """Both roots of mu^2 - lam mu + x^T (D - I) y = 0 with y rescaled so x^T y = 1."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    D = np.asarray(D, dtype=float)
    xu = x / np.linalg.norm(x)
    yu = y / np.linalg.norm(y)
    xy = complex(xu @ yu)
    if abs(xy) <= 1e-10:
        raise HypothesisError("x^T y = 0: the mu-from-lambda formula needs a non-orthogonal pair")
    yu = yu / xy
    c = complex(xu @ (D - np.eye(D.shape[0])) @ yu)
    disc = _sqrt_disc(lam * lam - 4 * c)
    return (lam + disc) / 2, (lam - disc) / 2


@dataclass
class BoundReport:
    """One bound evaluated on one graph.

    ``direction`` is "upper" (observed <= bound) or "lower" (observed >= bound);
    ``strict`` demands a gap of more than the slack. margin is signed so that
    non-negative means the bound holds.
    """

    name: str
    hypothesis: bool
    bound: float | None
    observed: float
    direction: str = "upper"
    strict: bool = False
    slack: float = BOUND_SLACK
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float | None:
        if self.bound is None or math.isnan(self.bound):
            return None
        if self.direction == "upper":
            return self.bound - self.observed
        return self.observed - self.bound

    @property
    def holds(self) -> bool:
        mg = self.margin
        if mg is None:
            return False
        return mg > self.slack if self.strict else mg >= -self.slack

    @property
    def status(self) -> str:
        if not self.hypothesis:
            return NOT_APPLICABLE
        return PASS if self.holds and self.metadata.get("extra_ok", True) else FAIL

    def to_report(self) -> VerificationReport:
        meta = dict(self.metadata)
        meta.update(bound=self.bound, observed=self.observed, margin=self.margin, direction=self.direction)
        status = self.status
        residual = None
        if status == FAIL:
            residual = -self.margin if self.margin is not None else math.inf
            meta.setdefault("counterexample", "bound not satisfied")
        return VerificationReport(self.name, status, residual, {"hypothesis": self.hypothesis}, meta)

    def to_dict(self) -> dict[str, Any]:
        return self.to_report().to_dict()


def _spectrum(M, spectrum):
    return spectrum if spectrum is not None else linalg.eigenvalues(M)


def _core_hypothesis(g: Graph) -> bool:
    return g.is_connected() and not is_tree(g) and not is_cycle(g) and g.d_min >= 2


def check_lower_bound_modulus(g: Graph, spectrum: linalg.Spectrum | None = None) -> BoundReport:
    """min |mu| over sigma(B) is at least 1 for connected graphs with d_min >= 2."""
    hyp = g.is_connected() and g.d_min >= 2
    s = _spectrum(build_operators(g).B, spectrum)
    observed = s.min_modulus if len(s) else math.nan
    return BoundReport("lower_bound_modulus", hyp, 1.0, observed, direction="lower")


def check_rho_K_gt_1(g: Graph, spectrumK: linalg.Spectrum | None = None) -> BoundReport:
    s = _spectrum(build_operators(g).K, spectrumK)
    return BoundReport("rho_K_gt_1", _core_hypothesis(g), 1.0, s.radius, direction="lower", strict=True)


@dataclass(frozen=True)
class KPerron:
    rho: float
    y: np.ndarray
    simple: bool
    real: bool


def k_perron_pair(ops: NBOperators, spectrumK: linalg.Spectrum | None = None) -> KPerron | None:
    """Dominant real eigenvalue of K and the bottom half y of its eigenvector.

    y is made real and signed so its largest-magnitude entry is positive.
    Returns None when K has no real dominant eigenvalue.
    """
    s = _spectrum(ops.K, spectrumK)
    rho = s.dominant_real()
    if rho is None:
        return None
    simple = s.multiplicity(rho) == 1
    vec = linalg.eigenvector_for(ops.K, rho)
    n = ops.n
    y = vec[n:]
    k = int(np.argmax(np.abs(y)))
    y = y * (abs(y[k]) / y[k]) if y[k] != 0 else y
    real = bool(np.linalg.norm(y.imag) <= 1e-8 * max(np.linalg.norm(y), 1e-300))
    return KPerron(float(rho), y.real.copy(), simple, real)


def check_perron_positivity(g: Graph, spectrumK: linalg.Spectrum | None = None) -> VerificationReport:
    if not _core_hypothesis(g):
        return VerificationReport("perron_positivity", NOT_APPLICABLE, hypotheses={"hypothesis": False})
    ops = build_operators(g)
    pair = k_perron_pair(ops, spectrumK)
    hyp = {"hypothesis": True}
    if pair is None:
        return VerificationReport("perron_positivity", FAIL, None, hyp,
                                  {"counterexample": "dominant eigenvalue of K is not real"})
    if not pair.simple or not pair.real:
        return VerificationReport("perron_positivity", FAIL, None, hyp,
                                  {"counterexample": "dominant eigenpair is defective or complex", "rho_K": pair.rho})
    y = pair.y / np.max(np.abs(pair.y))
    worst = float(np.min(y))
    meta = {"rho_K": pair.rho, "y": y}
    if worst > 0:
        return VerificationReport("perron_positivity", PASS, worst, hyp, meta)
    return VerificationReport("perron_positivity", FAIL, worst, hyp, meta)


def printed_corollary_bound(g: Graph) -> float:
    """(sqrt(2m - n - 1) + sqrt(2m - n - 4 d_min + 3)) / 2; nan when a radicand is negative."""
    a = 2 * g.m - g.n - 1
    b = 2 * g.m - g.n - 4 * g.d_min + 3
    if a < 0 or b < 0:
        return math.nan
    return (math.sqrt(a) + math.sqrt(b)) / 2


def corrected_corollary_bound(g: Graph) -> float:
    """The same bound built on rho(A) <= sqrt(2m - n + 1) for connected graphs."""
    a = 2 * g.m - g.n + 1
    b = 2 * g.m - g.n - 4 * g.d_min + 5
    if a < 0 or b < 0:
        return math.nan
    return (math.sqrt(a) + math.sqrt(b)) / 2


def theorem_hypothesis(g: Graph, ops: NBOperators, rho_A: float, perron_x,
                       spectrumK: linalg.Spectrum | None = None) -> tuple[bool, dict[str, Any]]:
    """Evaluate rho(A) >= 2 sqrt(x^T (D - I) y) following the proof's case split.

    Trees and graphs whose 2-core is a cycle are covered directly by the
    proof; otherwise x is the Perron vector of A and y the bottom half of
    K's dominant eigenvector, scaled so that x^T y = 1.
    """
    if not g.is_connected():
        return False, {"branch": "disconnected"}
    if is_tree(g):
        return True, {"branch": "tree"}
    core, _ = two_core(g)
    if is_cycle(core):
        return True, {"branch": "cycle-core"}
    pair = k_perron_pair(ops, spectrumK)
    if pair is None:
        return False, {"branch": "general", "reason": "no real dominant eigenvalue of K"}
    x = np.asarray(perron_x, dtype=float)
    xy = float(x @ pair.y)
    if abs(xy) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(pair.y):
        return False, {"branch": "general", "reason": "x^T y = 0"}
    y = pair.y / xy
    c = float(x @ (ops.D - np.eye(g.n)) @ y)
    threshold = 2 * math.sqrt(c) if c > 0 else 0.0
    return rho_A >= threshold - HYPOTHESIS_SLACK, {"branch": "general", "xDy": c, "threshold": threshold}


def spectral_radius_bounds(g: Graph, spectrum_B: linalg.Spectrum | None = None,
                           spectrumK: linalg.Spectrum | None = None) -> list[BoundReport]:
    """Gershgorin, the Perron-vector theorem bound and both corollary forms."""
    ops = build_operators(g)
    sB = _spectrum(ops.B, spectrum_B)
    rho_B = sB.radius
    connected = g.is_connected()
    reports = []

    regular = g.is_regular()
    gbound = float(g.d_max - 1)
    equal = abs(rho_B - gbound) <= BOUND_SLACK
    reports.append(BoundReport(
        "gershgorin", connected and g.m > 0, gbound, rho_B,
        metadata={"regular": regular, "equality": equal, "extra_ok": equal == regular},
    ))

    if g.n:
        perron = linalg.power_iteration_perron(ops.A)
        rho_A, x = perron.rho, perron.vector
    else:
        rho_A, x = 0.0, np.zeros(0)
    hyp, info = theorem_hypothesis(g, ops, rho_A, x, spectrumK)
    disc = _sqrt_disc(rho_A * rho_A - 4 * (g.d_min - 1))
    tbound = (rho_A + disc.real) / 2 if disc.imag == 0 else math.nan
    info = dict(info, rho_A=rho_A, binding="x = Perron vector of A, y = bottom half of K's dominant eigenvector")
    reports.append(BoundReport("upper_bound_theorem", hyp, tbound, rho_B, metadata=info))
    reports.append(BoundReport("upper_bound_corollary_printed", hyp, printed_corollary_bound(g), rho_B,
                               metadata=dict(info)))
    reports.append(BoundReport("upper_bound_corollary_corrected", hyp, corrected_corollary_bound(g), rho_B,
                               metadata=dict(info)))
    return reports


def k_tree_spectrum_check(g: Graph, spectrumK: linalg.Spectrum | None = None) -> VerificationReport:
    """For a tree, 1, -1 and 0 lie in sigma(K) and 0 has multiplicity at least the leaf count."""
    if not is_tree(g):
        raise HypothesisError("k_tree_spectrum_check needs a tree")
    if g.n < 2:
        # K of the single vertex is [[0, -1], [-1, 0]]; there is no leaf and no zero
        return VerificationReport("k_tree_spectrum", NOT_APPLICABLE, hypotheses={"n_at_least_2": False})
    s = _spectrum(build_operators(g).K, spectrumK)
    leaves = sum(1 for d in g.degrees if d == 1)
    zero_mult = s.multiplicity(0.0)
    ok = s.contains(1.0) and s.contains(-1.0) and zero_mult >= leaves and zero_mult > 0
    meta = {"leaves": leaves, "zero_multiplicity": zero_mult}
    if not ok:
        meta["counterexample"] = "tree K spectrum misses 1, -1 or enough zeros"
    return VerificationReport("k_tree_spectrum", status_of(ok), None if ok else 0.0, metadata=meta)


def adding_tree_invariance(g: Graph, t: Graph, v: int, w: int,
                           tol: float = linalg.DEFAULT_TOL) -> VerificationReport:
    """sigma(B) of g joined with tree t equals sigma(B of g) plus 2(n_t - 1) zeros."""
    if not is_tree(t):
        raise HypothesisError("adding_tree_invariance needs t to be a tree")
    joined = join_at_vertex(g, v, t, w)
    s_base = linalg.eigenvalues(build_operators(g).B)
    s_join = linalg.eigenvalues(build_operators(joined).B)
    expected = np.concatenate([s_base.values, np.zeros(2 * (t.n - 1))])
    match = linalg.match_multisets(expected, s_join.values, tol)
    return VerificationReport("adding_tree_invariance", status_of(match.ok), match.max_distance,
                              metadata={"tree_vertices": t.n, "added_zeros": 2 * (t.n - 1)})


def closed_form_check(closed: ClosedFormSpectrum, M, tol: float = linalg.DEFAULT_TOL) -> VerificationReport:
    s = linalg.eigenvalues(M)
    match = closed.matches(s, tol)
    return VerificationReport(f"closed_form_{closed.family}", status_of(match.ok), match.max_distance,
                              metadata={"params": closed.params, "size": len(closed)})


def check_irreducibility(g: Graph) -> VerificationReport:
    """Connected, not a cycle and d_min >= 2 implies the non-backtracking digraph is strongly connected."""
    strong = directed_edge_graph_strongly_connected(g)
    hyp = g.is_connected() and not is_cycle(g) and g.d_min >= 2
    meta = {"strongly_connected": strong}
    if not hyp:
        return VerificationReport("irreducibility", NOT_APPLICABLE, hypotheses={"hypothesis": False}, metadata=meta)
    if not strong:
        meta["counterexample"] = "hypothesis holds but the directed edge graph is not strongly connected"
    return VerificationReport("irreducibility", status_of(strong), None if strong else 1.0,
                              {"hypothesis": True}, meta)
