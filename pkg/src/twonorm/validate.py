"""Randomized self-checks for every structural identity the package relies on.

Each suite samples deterministic trials, measures worst-case residuals of the
identities it owns, and reports a single pass flag.  Residual limits are
deliberately coarse relative to double precision but far below any
mathematically meaningful violation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .errors import LogUnavailable
from .geometry import (
    curve_length,
    distance_upper,
    exp_curve,
    group_log,
    norm_sandwich_check,
    schatten_norm,
)
from .grassmann import (
    ProjectionOperator,
    delta_p,
    grassmann_equivalence,
    lie_split_grassmann,
    phi,
    psi_section,
    section_pi_p,
)
from .group import (
    SkewOperator,
    algebraic_membership_residual,
    exp_skew,
    frame_unitary,
    membership_residual,
    skew_residual,
)
from .oracles import adjoint_by_definition, sqrt_eig
from .sampling import (
    SETUP_TRIAL,
    projection_near,
    random_complex,
    random_group_member,
    random_projection,
    random_reference,
    random_skew,
    random_stiefel,
    rng_for_trial,
    stiefel_near,
)
from .space import (
    GramPair,
    SpaceSpec,
    adjoint_h1,
    adjoint_l2,
    build_space,
    h1_operator_norm,
    inner_h1,
    inner_l2,
    norm_h1,
    norm_l2,
)
from .stiefel import (
    StiefelOperator,
    lie_split_stiefel,
    operator_to_frame,
    projection_of,
    radius_r,
    section_factors,
    sqrt_F,
    translated_section,
    tuple_metric,
)

__all__ = ["SuiteResult", "run_suites", "SUITE_NAMES"]

SUITE_NAMES = ("space", "group", "section", "sqrt", "grassmann", "geometry")


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    checks: int
    max_residual: float
    passed: bool


class _Recorder:
    def __init__(self):
        self.checks = 0
        self.max_residual = 0.0
        self.passed = True

    def residual(self, value: float, limit: float):
        value = float(value)
        self.checks += 1
        if value > self.max_residual:
            self.max_residual = value
        if not (value <= limit):
            self.passed = False

    def require(self, ok: bool):
        # Boolean checks contribute a unit residual on failure.
        self.residual(0.0 if ok else 1.0, 0.5)

    def result(self, suite: str) -> SuiteResult:
        return SuiteResult(
            suite=suite,
            checks=self.checks,
            max_residual=self.max_residual,
            passed=self.passed,
        )


def _rel(diff: float, scale: float) -> float:
    return float(diff) / max(1.0, float(scale))


def _space_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    n = g.n
    rec.residual(np.linalg.norm(g.gl2 - g.gl2.conj().T), 1e-12 * np.linalg.norm(g.gl2))
    rec.residual(np.linalg.norm(g.gh1 - g.gh1.conj().T), 1e-12 * np.linalg.norm(g.gh1))
    gap = np.linalg.eigvalsh(g.gh1 - g.gl2)
    rec.residual(max(0.0, -float(gap[0])), 1e-10 * float(np.linalg.norm(g.gh1, 2)))

    two = build_space(SpaceSpec(domain_dim=1, grid_points=2, spacing=1.0))
    rec.residual(
        np.max(np.abs(two.gh1 - np.array([[3.0, -2.0], [-2.0, 3.0]]))), 1e-12
    )

    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        A = random_complex(rng, n, n)
        x = random_complex(rng, n, 1)[:, 0]
        y = random_complex(rng, n, 1)[:, 0]
        A2 = adjoint_l2(A, g)
        AH = adjoint_h1(A, g)
        scale = norm_l2(A @ x, g) * norm_l2(y, g)
        rec.residual(
            abs(inner_l2(A @ x, y, g) - inner_l2(x, A2 @ y, g)), 1e-9 * max(1.0, scale)
        )
        scale = norm_h1(A @ x, g) * norm_h1(y, g)
        rec.residual(
            abs(inner_h1(A @ x, y, g) - inner_h1(x, AH @ y, g)), 1e-9 * max(1.0, scale)
        )
        rec.residual(
            np.linalg.norm(A2 - adjoint_by_definition(A, g)),
            1e-9 * max(1.0, np.linalg.norm(A2)),
        )
        opn = h1_operator_norm(A, g)
        ratio = norm_h1(A @ x, g) / max(norm_h1(x, g), 1e-300)
        rec.residual(max(0.0, ratio - opn), 1e-9 * max(1.0, opn))
    return rec.result("space")


def _group_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        X = random_skew(rng, g, scale=1.0)
        rec.residual(skew_residual(X.data, g), 1e-12)
        U = exp_skew(X)
        rec.residual(membership_residual(U.data, g), 1e-10)
        V = random_group_member(rng, g, scale=0.7)
        rec.residual(membership_residual(U.data @ V.data, g), 1e-9)
        rec.residual(membership_residual(U.inv, g), 1e-9)
        back = exp_skew(SkewOperator(-X.data, g))
        rec.residual(
            np.linalg.norm(U.data @ back.data - np.eye(g.n)), 1e-11 * np.exp(2.0)
        )
        rec.residual(algebraic_membership_residual(U.data, g, rng=rng), 1e-8)
    drift = np.eye(g.n, dtype=np.complex128)
    drift[0, 0] = 2.0
    probe_rng = rng_for_trial(cfg.seed, SETUP_TRIAL)
    rec.require(algebraic_membership_residual(drift, g, rng=probe_rng) > 0.1)
    return rec.result("group")


def _section_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    setup = rng_for_trial(cfg.seed, SETUP_TRIAL)
    ref = random_reference(setup, g, cfg.subspace_dim)
    V = random_stiefel(setup, ref, scale=0.4)
    P = projection_of(V).P
    r = radius_r(V)
    eye = np.eye(g.n, dtype=np.complex128)
    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        frac = 0.1 + 0.8 * rng.random()
        V1, _ = stiefel_near(V, frac * r, rng)
        fac = section_factors(V, V1)
        P1 = projection_of(V1).P
        rec.residual(
            np.linalg.norm(fac.sigma.data @ V.V - V1.V), 1e-9 * np.linalg.norm(V1.V)
        )
        rec.residual(membership_residual(fac.sigma.data, g), 1e-9)
        t1s = adjoint_l2(fac.t1, g)
        rec.residual(np.linalg.norm(t1s @ fac.t1 - P), 1e-8 * max(1.0, np.linalg.norm(P)))
        rec.residual(np.linalg.norm(fac.t1 @ t1s - P1), 1e-8 * max(1.0, np.linalg.norm(P1)))
        t2s = adjoint_l2(fac.t2, g)
        rec.residual(np.linalg.norm(t2s @ fac.t2 - (eye - P)), 1e-8 * np.sqrt(g.n))
        rec.residual(np.linalg.norm(fac.t2 @ t2s - (eye - P1)), 1e-8 * np.sqrt(g.n))
        rec.residual(membership_residual(fac.w.data, g), 1e-8)
    # The section translated along the group still maps base to target.
    mover = rng_for_trial(cfg.seed, SETUP_TRIAL - 1)
    V0 = random_stiefel(mover, ref, scale=0.3)
    U = frame_unitary(operator_to_frame(V).Phi, operator_to_frame(V0).Phi, g)
    allowed = r / h1_operator_norm(np.linalg.inv(U.data), g)
    V1, _ = stiefel_near(V0, 0.3 * allowed, mover)
    moved = translated_section(V, V0, V1)
    rec.residual(np.linalg.norm(moved.data @ V.V - V1.V), 1e-9 * np.linalg.norm(V1.V))
    rec.residual(membership_residual(moved.data, g), 1e-8)
    return rec.result("section")


def _sqrt_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    setup = rng_for_trial(cfg.seed, SETUP_TRIAL)
    ref = random_reference(setup, g, cfg.subspace_dim)
    V = random_stiefel(setup, ref, scale=0.4)
    P = projection_of(V).P
    eye = np.eye(g.n, dtype=np.complex128)
    r = radius_r(V)
    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        W, _ = stiefel_near(V, (0.1 + 0.6 * rng.random()) * r, rng)
        Q = projection_of(W).P
        A = (eye - P) @ (eye - Q) @ (eye - P)
        R = sqrt_F(V, W)
        rec.residual(np.linalg.norm(R @ R - A), 1e-9 * max(1.0, np.linalg.norm(A)))
        rec.residual(
            np.linalg.norm(R - sqrt_eig(A, g)), 1e-8 * max(1.0, np.linalg.norm(R))
        )
    return rec.result("sqrt")


def _grassmann_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    setup = rng_for_trial(cfg.seed, SETUP_TRIAL)
    ref = random_reference(setup, g, cfg.subspace_dim)
    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        P = random_projection(rng, g, cfg.subspace_dim)
        radius = 1.0 / (h1_operator_norm(P.P, g) + 1.0) ** 2
        P1, _ = projection_near(P, (0.1 + 0.5 * rng.random()) * radius, rng)
        V1 = psi_section(P, P1, ref)
        rec.residual(
            np.linalg.norm(phi(V1).P - P1.P), 1e-9 * max(1.0, np.linalg.norm(P1.P))
        )
        # The composed section needs the much smaller lifted radius.
        r_star = min(radius, radius_r(psi_section(P, P, ref)))
        P2, _ = projection_near(P, (0.1 + 0.4 * rng.random()) * r_star, rng)
        Upi = section_pi_p(P, P2, ref)
        rec.residual(
            np.linalg.norm(Upi.data @ P.P @ Upi.inv - P2.P),
            1e-9 * max(1.0, np.linalg.norm(P2.P)),
        )
        rec.residual(membership_residual(Upi.data, g), 1e-9)
        V = random_stiefel(rng, ref, scale=0.4)
        # Right translation by a split-preserving element reparameterizes the
        # embedding without moving its image, so the pair is equivalent.
        span = ProjectionOperator(ref.span_projection, ref.N, g)
        Xd, _ = lie_split_grassmann(random_skew(rng, g, scale=0.5), span)
        T = exp_skew(Xd)
        reparam = StiefelOperator(V.V @ T.data, ref)
        res = grassmann_equivalence(reparam, V)
        rec.require(res.equivalent)
        rec.residual(res.map_residual, 1e-7 * max(1.0, np.linalg.norm(V.V)))
        other = random_stiefel(rng, ref, scale=0.4)
        same = (
            h1_operator_norm(projection_of(other).P - projection_of(V).P, g) <= 1e-8
        )
        rec.require(grassmann_equivalence(other, V).equivalent == same)
        Y = random_complex(rng, g.n, g.n)
        d1 = delta_p(Y, P)
        d3 = delta_p(delta_p(d1, P), P)
        rec.residual(np.linalg.norm(d3 - d1), 1e-12 * max(1.0, np.linalg.norm(d1)))
        X = random_skew(rng, g, scale=1.0)
        xg, xh = lie_split_grassmann(X, P)
        rec.residual(
            np.linalg.norm(xg.data + xh.data - X.data),
            1e-12 * max(1.0, np.linalg.norm(X.data)),
        )
        rec.residual(np.linalg.norm(delta_p(xg.data, P)), 1e-10 * max(1.0, np.linalg.norm(xg.data)))
        sg, sh = lie_split_stiefel(X, projection_of(V))
        rec.residual(
            np.linalg.norm(sg.data + sh.data - X.data),
            1e-12 * max(1.0, np.linalg.norm(X.data)),
        )
        rec.residual(
            np.linalg.norm(sg.data @ V.V), 1e-10 * max(1.0, np.linalg.norm(V.V))
        )
    return rec.result("grassmann")


def _geometry_suite(cfg: RunConfig, g: GramPair) -> SuiteResult:
    rec = _Recorder()
    setup = rng_for_trial(cfg.seed, SETUP_TRIAL)
    ref = random_reference(setup, g, cfg.subspace_dim)
    V0 = random_stiefel(setup, ref, scale=0.3)
    spec = cfg.norm
    zero = SkewOperator(np.zeros((g.n, g.n), dtype=np.complex128), g)
    rec.residual(curve_length(exp_curve(V0, zero, 16), spec, g), 0.0)
    for trial in range(min(cfg.trials, 40)):
        rng = rng_for_trial(cfg.seed, trial)
        X = random_skew(rng, g, scale=0.3)
        U = exp_skew(X)
        back = group_log(U.data, g)
        rec.residual(
            np.linalg.norm(back - X.data), 1e-8 * max(1.0, np.linalg.norm(X.data))
        )
        # Small strong-norm generator keeps the connecting element inside the
        # domain of the principal logarithm.
        Y = random_skew(rng, g, scale=1.0)
        Y = SkewOperator(Y.data * (0.02 / h1_operator_norm(Y.data, g)), g)
        W = StiefelOperator(exp_skew(Y).data @ V0.V, ref)
        report = norm_sandwich_check(V0, W, spec)
        rec.require(report.ok)
        try:
            upper = distance_upper(V0, W, spec, steps=32)
            chord = schatten_norm(W.V - V0.V, spec, g)
            rec.residual(max(0.0, chord - upper), 1e-6 * max(1.0, chord))
        except LogUnavailable:
            rec.require(False)
    far = StiefelOperator(-V0.V, ref)
    try:
        distance_upper(V0, far, spec, steps=16)
        rec.require(False)
    except LogUnavailable:
        rec.require(True)
    # Tuple and operator distances stay within the equivalence window.
    other = random_stiefel(setup, ref, scale=0.3)
    d_tuple = tuple_metric(operator_to_frame(V0), operator_to_frame(other))
    d_op = h1_operator_norm(other.V - V0.V, g)
    C = ref.C
    N = ref.N
    rec.residual(max(0.0, d_op - np.sqrt(N) * d_tuple), 1e-10)
    rec.residual(max(0.0, d_tuple - np.sqrt(N) * C * d_op), 1e-10)
    return rec.result("geometry")


def run_suites(cfg: RunConfig) -> list[SuiteResult]:
    g = build_space(cfg.space)
    return [
        _space_suite(cfg, g),
        _group_suite(cfg, g),
        _section_suite(cfg, g),
        _sqrt_suite(cfg, g),
        _grassmann_suite(cfg, g),
        _geometry_suite(cfg, g),
    ]
