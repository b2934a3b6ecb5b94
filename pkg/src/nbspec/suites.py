"""Named bundles of checks run against a single graph (used by the CLI and sweeps)."""

from __future__ import annotations

from functools import cached_property

from nbspec import detect, linalg, oracles, theory
from nbspec.graph import Graph, is_cycle, is_tree
from nbspec.operators import (
    DecompositionError,
    build_K_inverse,
    build_operators,
    lift_K_eigenvector,
    verify_decomposition,
    verify_intertwining,
    verify_K_charpoly,
    verify_product_identities,
)
from nbspec.report import FAIL, NOT_APPLICABLE, PASS, VerificationReport, status_of

SUITES = ("ihara", "decomposition", "bounds", "detect", "oracle")
WALK_K_MAX = 6


class GraphContext:
    """Operators and spectra of one graph, computed lazily and shared between checks."""

    def __init__(self, g: Graph, tol: float = linalg.DEFAULT_TOL):
        self.g = g
        self.tol = tol

    @cached_property
    def ops(self):
        return build_operators(self.g)

    @cached_property
    def sigma_B(self) -> linalg.Spectrum:
        return linalg.eigenvalues(self.ops.B, self.tol)

    @cached_property
    def sigma_K(self) -> linalg.Spectrum:
        return linalg.eigenvalues(self.ops.K, self.tol)

    @cached_property
    def sigma_A(self) -> linalg.Spectrum:
        return linalg.eigenvalues(self.ops.A, self.tol)


def ihara_suite(ctx: GraphContext) -> list[VerificationReport]:
    return [theory.ihara_check(ctx.g, ops=ctx.ops)]


def _k_inverse_report(ctx: GraphContext) -> VerificationReport:
    if any(d == 1 for d in ctx.g.degrees):
        return VerificationReport("K_inverse", NOT_APPLICABLE, hypotheses={"no_degree1_vertex": False})
    try:
        build_K_inverse(ctx.ops)
    except linalg.LinalgError as exc:
        return VerificationReport("K_inverse", FAIL, None, {"no_degree1_vertex": True}, {"counterexample": str(exc)})
    return VerificationReport("K_inverse", PASS, 0.0, {"no_degree1_vertex": True})


def _lift_report(ctx: GraphContext) -> VerificationReport:
    """Lift every simple eigenvalue of K to B; vanishing lifts are counted, not failed."""
    worst = 0.0
    lifted = annihilated = 0
    for mu, mult in ctx.sigma_K.clusters():
        if mult != 1:
            continue
        x = linalg.eigenvector_for(ctx.ops.K, mu, 1e-8)
        try:
            res = lift_K_eigenvector(ctx.ops, mu, x, tol=1e-8)
        except (ValueError, linalg.LinalgError) as exc:
            return VerificationReport("lift_K_eigenvectors", FAIL, None,
                                      metadata={"counterexample": f"mu={mu}: {exc}"})
        if res.annihilated:
            annihilated += 1
        else:
            lifted += 1
            worst = max(worst, res.residual)
    ok = worst <= 1e-6 * max(1.0, linalg.spectral_norm(ctx.ops.B))
    return VerificationReport("lift_K_eigenvectors", status_of(ok), worst,
                              metadata={"lifted": lifted, "annihilated": annihilated})


def decomposition_suite(ctx: GraphContext) -> list[VerificationReport]:
    ops = ctx.ops
    out = [
        verify_product_identities(ops),
        verify_intertwining(ops),
        verify_K_charpoly(ops),
    ]
    try:
        out.append(verify_decomposition(ops, spectral_tol=ctx.tol, spectrum_B=ctx.sigma_B))
    except DecompositionError as exc:
        out.append(VerificationReport("decomposition", FAIL, None, metadata={"counterexample": str(exc)}))
    out.append(_k_inverse_report(ctx))
    out.append(_lift_report(ctx))
    return out


def _closed_form_reports(ctx: GraphContext) -> list[VerificationReport]:
    g = ctx.g
    forms = []
    if is_tree(g):
        forms.append(theory.tree_spectrum(g))
    if is_cycle(g):
        forms.append(theory.cycle_spectrum(g.n))
    if g.is_connected() and g.is_regular():
        forms.append(theory.regular_spectrum(g, ctx.sigma_A))
    out = []
    for cf in forms:
        match = cf.matches(ctx.sigma_B, ctx.tol)
        out.append(VerificationReport(f"closed_form_{cf.family}", status_of(match.ok), match.max_distance,
                                      metadata={"params": cf.params}))
    return out


def bounds_suite(ctx: GraphContext) -> list[VerificationReport]:
    g = ctx.g
    out = [
        theory.check_lower_bound_modulus(g, ctx.sigma_B).to_report(),
        theory.check_rho_K_gt_1(g, ctx.sigma_K).to_report(),
        theory.check_perron_positivity(g, ctx.sigma_K),
    ]
    out += [b.to_report() for b in theory.spectral_radius_bounds(g, ctx.sigma_B, ctx.sigma_K)]
    out += _closed_form_reports(ctx)
    if is_tree(g):
        out.append(theory.k_tree_spectrum_check(g, ctx.sigma_K))
    return out


def detect_suite(ctx: GraphContext) -> list[VerificationReport]:
    out = detect.detection_reports(ctx.g, ctx.tol)
    if ctx.g.n:
        out.append(detect.verify_K_eigvec_form(ctx.ops.K, spectrum=ctx.sigma_K))
    return out


def oracle_suite(ctx: GraphContext) -> list[VerificationReport]:
    g = ctx.g
    out = [theory.check_irreducibility(g)]
    if g.m == 0:
        out.append(VerificationReport("Bk_equals_walkcounts", NOT_APPLICABLE, metadata={"reason": "no edges"}))
    elif g.m > oracles.MAX_WALK_EDGES:
        out.append(VerificationReport("Bk_equals_walkcounts", NOT_APPLICABLE, metadata={"reason": "m > 20"}))
    else:
        reps = [oracles.verify_Bk_equals_walkcounts(g, k) for k in range(1, WALK_K_MAX + 1)]
        bad = [r for r in reps if r.failed]
        r = bad[0] if bad else VerificationReport("Bk_equals_walkcounts", PASS, 0.0,
                                                  metadata={"k_max": WALK_K_MAX})
        out.append(r)
    if is_tree(g) and 2 * (g.n - 1) <= 20:
        out.append(oracles.charpoly_spotcheck(ctx.ops.B, [0.5, 2.0, -1.0]))
        C, _ = oracles.rooted_tree_edge_matrix(g)
        rep = oracles.charpoly_spotcheck(C, [0.5, 2.0, -1.0])
        rep.check = "rooted_tree_charpoly"
        out.append(rep)
    return out


_RUNNERS = {
    "ihara": ihara_suite,
    "decomposition": decomposition_suite,
    "bounds": bounds_suite,
    "detect": detect_suite,
    "oracle": oracle_suite,
}


def run_suite(g: Graph, suite: str, tol: float = linalg.DEFAULT_TOL) -> list[VerificationReport]:
    if suite != "all" and suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    ctx = GraphContext(g, tol)
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        for rep in _RUNNERS[name](ctx):
            rep.metadata.setdefault("suite", name)
            out.append(rep)
    return out


def any_failed(reports) -> bool:
    return any(r.failed for r in reports)


def summary_counts(reports) -> dict[str, int]:
    counts = {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0}
    for r in reports:
        counts[r.status] += 1
    return counts
