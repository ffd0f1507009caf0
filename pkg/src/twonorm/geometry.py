"""Norms, tangent metrics and curve-length bounds on the strong space.

Singular values are always taken in the strong frame, so the Schatten family
interpolates between the strong operator norm (p = inf) and the trace norm
(p = 1).  Differences of two embeddings have rank at most 2N, which sandwiches
every unitarily invariant norm between the operator norm and 2N times it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import svdvals

from .errors import ConvergenceFailure, LogUnavailable
from .group import SkewOperator, exp_skew, frame_unitary, is_lie_algebra_member
from .space import GramPair, adjoint_h1, as_operator, h1_operator_norm
from .stiefel import StiefelOperator, operator_to_frame

__all__ = [
    "NormSpec",
    "h1_singular_values",
    "schatten_norm",
    "SandwichReport",
    "norm_sandwich_check",
    "finsler_norm_stiefel",
    "finsler_norm_grassmann",
    "riemannian_inner_stiefel",
    "riemannian_inner_grassmann",
    "CurveSamples",
    "exp_curve",
    "curve_length",
    "group_log",
    "distance_upper",
]


@dataclass(frozen=True)
class NormSpec:
    """Choice of unitarily invariant norm on the strong space.

    kind is "operator_h1" or "schatten_p"; the latter carries an exponent
    p >= 1, with p = inf agreeing with the operator norm on singular values.
    """

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in ("operator_h1", "schatten_p"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "schatten_p":
            if self.p is None or not (self.p >= 1):
                raise ValueError("schatten_p requires an exponent p >= 1")
        elif self.p is not None:
            raise ValueError("operator_h1 takes no exponent")

    @property
    def label(self) -> str:
        if self.kind == "operator_h1":
            return "operator_h1"
        if math.isinf(self.p):
            return "schatten_inf"
        p = self.p
        return f"schatten_{int(p)}" if float(p).is_integer() else f"schatten_{p}"

    @staticmethod
    def operator() -> "NormSpec":
        return NormSpec(kind="operator_h1")

    @staticmethod
    def schatten(p: float) -> "NormSpec":
        return NormSpec(kind="schatten_p", p=float(p))


def h1_singular_values(A, g: GramPair) -> np.ndarray:
    """Singular values of A as a map of the strong space, descending."""
    A = as_operator(A, g.n, "A")
    return np.asarray(svdvals(g.to_h1_frame(A), check_finite=False))


def schatten_norm(A, spec: NormSpec, g: GramPair) -> float:
    """Norm of A prescribed by ``spec``, computed from strong singular values."""
    sv = h1_singular_values(A, g)
    if spec.kind == "operator_h1" or math.isinf(spec.p):
        return float(sv[0])
    return float(np.sum(sv ** spec.p) ** (1.0 / spec.p))


@dataclass(frozen=True)
class SandwichReport:
    """Operator norm <= chosen norm <= 2N times operator norm, with slack."""

    operator_norm: float
    chosen_norm: float
    upper: float
    top_sum: float
    ok: bool


def norm_sandwich_check(
    V1: StiefelOperator, V2: StiefelOperator, spec: NormSpec, slack: float = 1e-10
) -> SandwichReport:
    """Evaluate the rank-2N sandwich for the difference of two embeddings."""
    g = V1.g
    diff = V1.V - V2.V
    sv = h1_singular_values(diff, g)
    opn = float(sv[0])
    chosen = schatten_norm(diff, spec, g)
    top = float(np.sum(sv[: 2 * V1.N]))
    upper = 2 * V1.N * opn
    ok = (
        opn <= chosen + slack
        and chosen <= top + slack
        and top <= upper + slack
    )
    return SandwichReport(
        operator_norm=opn, chosen_norm=chosen, upper=upper, top_sum=top, ok=ok
    )


def finsler_norm_stiefel(X: SkewOperator, V: StiefelOperator, spec: NormSpec) -> float:
    """Length of the tangent vector X V in the chosen norm."""
    return schatten_norm(X.data @ V.V, spec, V.g)


def finsler_norm_grassmann(X: SkewOperator, P, spec: NormSpec) -> float:
    """Length of the tangent vector [X, P] in the chosen norm."""
    Pm = P.P
    return schatten_norm(X.data @ Pm - Pm @ X.data, spec, P.g)


def riemannian_inner_stiefel(X: SkewOperator, Y: SkewOperator, V: StiefelOperator) -> float:
    """Real trace pairing of tangent vectors XV and YV in the strong space."""
    g = V.g
    a = X.data @ V.V
    b = Y.data @ V.V
    return float(np.trace(a @ adjoint_h1(b, g)).real)


def riemannian_inner_grassmann(X: SkewOperator, Y: SkewOperator, P) -> float:
    g = P.g
    a = X.data @ P.P - P.P @ X.data
    b = Y.data @ P.P - P.P @ Y.data
    return float(np.trace(a @ adjoint_h1(b, g)).real)


@dataclass(frozen=True)
class CurveSamples:
    """Sampled curve on the manifold: parameters, points and velocities.

    Parameters must increase strictly from 0 to 1; points and velocities are
    operator-valued samples of the curve and its derivative.
    """

    ts: tuple
    points: tuple
    velocities: tuple

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        if len(ts) < 2:
            raise ValueError("a curve needs at least two samples")
        if len(self.points) != len(ts) or len(self.velocities) != len(ts):
            raise ValueError("points, velocities and parameters must align")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("curve parameters must increase strictly")
        if abs(ts[0]) > 1e-12 or abs(ts[-1] - 1.0) > 1e-12:
            raise ValueError("curve parameters must run from 0 to 1")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "points", tuple(np.asarray(p, dtype=np.complex128) for p in self.points))
        object.__setattr__(self, "velocities", tuple(np.asarray(v, dtype=np.complex128) for v in self.velocities))


def exp_curve(V0: StiefelOperator, X: SkewOperator, steps: int) -> CurveSamples:
    """One-parameter curve t -> exp(tX) V0 with its exact velocities."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    ts = np.linspace(0.0, 1.0, steps)
    points = []
    velocities = []
    for t in ts:
        Ut = exp_skew(SkewOperator(t * X.data, X.g)).data
        points.append(Ut @ V0.V)
        velocities.append(X.data @ Ut @ V0.V)
    return CurveSamples(ts=tuple(ts), points=tuple(points), velocities=tuple(velocities))


def curve_length(c: CurveSamples, spec: NormSpec, g: GramPair) -> float:
    """Trapezoid-rule length of a sampled curve in the chosen norm."""
    norms = [schatten_norm(v, spec, g) for v in c.velocities]
    total = 0.0
    for (t0, t1), (n0, n1) in zip(zip(c.ts, c.ts[1:]), zip(norms, norms[1:])):
        total += 0.5 * (t1 - t0) * (n0 + n1)
    return float(total)


def _sqrt_denman_beavers(A, *, max_iter=60, tol=1e-15):
    """Square root of a well-conditioned matrix by coupled Newton iteration."""
    Y = A.copy()
    Z = np.eye(A.shape[0], dtype=np.complex128)
    for _ in range(max_iter):
        Y_next = 0.5 * (Y + np.linalg.inv(Z))
        Z_next = 0.5 * (Z + np.linalg.inv(Y))
        delta = np.linalg.norm(Y_next - Y)
        Y, Z = Y_next, Z_next
        if delta <= tol * max(1.0, np.linalg.norm(Y)):
            return Y
    raise ConvergenceFailure("matrix square root iteration stalled")


def group_log(U, g: GramPair, *, tol: float = 1e-8) -> np.ndarray:
    """Principal logarithm of a group element near the identity.

    Inverse scaling and squaring: repeated square roots bring the element
    close to the identity, a short alternating series computes the small
    logarithm, and doubling undoes the roots.  Requires the strong-norm
    distance to the identity to sit below one; the result is checked to lie
    in the Lie algebra.
    """
    U = as_operator(U, g.n, "U")
    eye = np.eye(g.n, dtype=np.complex128)
    if h1_operator_norm(U - eye, g) >= 1.0:
        raise LogUnavailable("element is too far from the identity for the principal logarithm")
    Y = U.copy()
    doublings = 0
    while np.linalg.norm(Y - eye) > 0.25:
        if doublings >= 40:
            raise ConvergenceFailure("square-root scaling did not contract to the identity")
        Y = _sqrt_denman_beavers(Y)
        doublings += 1
    E = Y - eye
    term = E.copy()
    total = E.copy()
    for k in range(2, 60):
        term = term @ E
        piece = ((-1.0) ** (k + 1)) * term / k
        total = total + piece
        if np.linalg.norm(piece) <= 1e-17 * max(1.0, np.linalg.norm(total)):
            break
    X = (2.0**doublings) * total
    if not is_lie_algebra_member(X, g, tol):
        raise ConvergenceFailure("computed logarithm is not skew at tolerance")
    return X


def distance_upper(
    V0: StiefelOperator, V1: StiefelOperator, spec: NormSpec, steps: int = 64
) -> float:
    """Length of an explicit connecting curve; an upper bound for the distance.

    A group element carrying V0 to V1 is built from their image frames, its
    principal logarithm generates the one-parameter curve, and the trapezoid
    length of that curve is returned.  Raises LogUnavailable when the
    connecting element is too far from the identity.
    """
    g = V0.g
    U = frame_unitary(operator_to_frame(V0).Phi, operator_to_frame(V1).Phi, g)
    X = group_log(U.data, g)
    Xs = SkewOperator(X, g, tol=1e-6)
    end = exp_skew(Xs).data @ V0.V
    if np.linalg.norm(end - V1.V) > 1e-8 * max(1.0, np.linalg.norm(V1.V)):
        raise ConvergenceFailure("connecting curve does not reach the target point")
    curve = exp_curve(V0, Xs, steps)
    return curve_length(curve, spec, g)
