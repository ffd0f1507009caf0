"""Deterministic random generators for tests and campaign runs.

Every trial owns a counter-based stream keyed by seed XOR trial index, so
campaigns reproduce byte for byte and trials can run in any order.
"""

from __future__ import annotations

import numpy as np

from .basis import orthonormal_columns
from .grassmann import ProjectionOperator, act_grassmann, projection_from_frame
from .group import GroupElement, SkewOperator, exp_skew
from .space import GramPair, h1_operator_norm
from .stiefel import ReferenceFrame, StiefelOperator

__all__ = [
    "rng_for_trial",
    "random_complex",
    "random_skew",
    "random_group_member",
    "random_reference",
    "base_point",
    "random_stiefel",
    "random_projection",
    "stiefel_near",
    "projection_near",
]

SETUP_TRIAL = 2**64 - 1


def rng_for_trial(seed: int, trial: int) -> np.random.Generator:
    key = int(np.uint64(seed) ^ np.uint64(trial))
    return np.random.Generator(np.random.Philox(key=key))


def random_complex(rng, rows: int, cols: int) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def random_skew(rng, g: GramPair, scale: float = 1.0) -> SkewOperator:
    """Random element of the Lie algebra, exact up to one linear solve."""
    A = random_complex(rng, g.n, g.n)
    S = 0.5 * (A - A.conj().T)
    X = g.solve_l2(S)
    nrm = np.linalg.norm(X)
    if nrm > 0:
        X = X * (scale / nrm)
    return SkewOperator(X, g)


def random_group_member(rng, g: GramPair, scale: float = 1.0) -> GroupElement:
    return exp_skew(random_skew(rng, g, scale))


def random_reference(rng, g: GramPair, N: int) -> ReferenceFrame:
    M = random_complex(rng, g.n, N)
    Xi = orthonormal_columns(M, g)
    if Xi.shape[1] != N:
        raise ValueError("sampled columns were linearly dependent")
    return ReferenceFrame(Xi=Xi, g=g)


def base_point(ref: ReferenceFrame) -> StiefelOperator:
    """The weak orthogonal projection onto the reference subspace."""
    return StiefelOperator(ref.span_projection, ref)


def random_stiefel(rng, ref: ReferenceFrame, scale: float = 0.5) -> StiefelOperator:
    U = random_group_member(rng, ref.g, scale)
    return StiefelOperator(U.data @ base_point(ref).V, ref)


def random_projection(rng, g: GramPair, N: int) -> ProjectionOperator:
    M = random_complex(rng, g.n, N)
    H = orthonormal_columns(M, g)
    if H.shape[1] != N:
        raise ValueError("sampled columns were linearly dependent")
    return projection_from_frame(H, g)


def _calibrated_scale(distance_at, target: float, *, tol: float) -> float:
    # distance_at(s) vanishes at s = 0 and is nearly linear for small s, so
    # proportional updates converge in a handful of evaluations.
    s = min(target, 0.25)
    best_s, best_gap = s, float("inf")
    for _ in range(60):
        d = distance_at(s)
        gap = abs(d - target)
        if gap < best_gap:
            best_s, best_gap = s, gap
        if gap <= tol * target:
            return s
        if d <= 0:
            s *= 2.0
        else:
            s *= min(4.0, max(0.25, target / d))
        if s > 64.0:
            raise ValueError("perturbation cannot reach the requested distance")
    if best_gap <= 1e-6 * target:
        return best_s
    raise ValueError("perturbation scale calibration stalled")


def stiefel_near(
    V: StiefelOperator, target: float, rng, *, tol: float = 1e-9
) -> tuple[StiefelOperator, float]:
    """Perturb V along the group to a prescribed strong-norm distance.

    Returns the perturbed point and the achieved distance
    ``|| V' - V ||`` in the strong operator norm.
    """
    if target <= 0:
        raise ValueError("target distance must be positive")
    g = V.g
    X = random_skew(rng, g, 1.0)

    def distance_at(s: float) -> float:
        U = exp_skew(SkewOperator(s * X.data, g))
        return h1_operator_norm(U.data @ V.V - V.V, g)

    s = _calibrated_scale(distance_at, target, tol=tol)
    U = exp_skew(SkewOperator(s * X.data, g))
    moved = StiefelOperator(U.data @ V.V, V.ref)
    return moved, h1_operator_norm(moved.V - V.V, g)


def projection_near(
    P: ProjectionOperator, target: float, rng, *, tol: float = 1e-9
) -> tuple[ProjectionOperator, float]:
    """Conjugate P by a group element to a prescribed strong-norm distance."""
    if target <= 0:
        raise ValueError("target distance must be positive")
    g = P.g
    X = random_skew(rng, g, 1.0)

    def distance_at(s: float) -> float:
        U = exp_skew(SkewOperator(s * X.data, g))
        moved = U.data @ P.P @ np.linalg.inv(U.data)
        return h1_operator_norm(moved - P.P, g)

    s = _calibrated_scale(distance_at, target, tol=tol)
    U = exp_skew(SkewOperator(s * X.data, g))
    moved = act_grassmann(U, P)
    return moved, h1_operator_norm(moved.P - P.P, g)
