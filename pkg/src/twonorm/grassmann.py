"""Rank-N weak orthogonal projections and the conjugation action on them.

Projections are the quotient picture of the isometric embeddings: two
embeddings share a projection exactly when they differ by a group element
fixing the reference subspace.  The module provides the quotient map and a
local section of it, the conjugation action, equivalence testing with an
explicit block unitary, and the tangent calculus built from the commutator
map delta_P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import orthonormal_columns
from .errors import NeighborhoodViolation
from .group import GroupElement, SkewOperator, frame_unitary
from .space import GramPair, as_operator, h1_operator_norm
from .stiefel import (
    ReferenceFrame,
    StiefelOperator,
    _inv_sqrt_on_range,
    cross_section_sigma,
    projection_of,
    radius_r,
)

__all__ = [
    "ProjectionOperator",
    "projection_from_frame",
    "range_frame",
    "phi",
    "psi_section",
    "EquivalenceResult",
    "grassmann_equivalence",
    "act_grassmann",
    "connecting_unitary",
    "section_pi_p",
    "delta_p",
    "tangent_project_grassmann",
    "lie_split_grassmann",
]

PROJECTION_TOL = 1e-10
TRACE_TOL = 1e-8
EQUIVALENCE_TOL = 1e-8


@dataclass(frozen=True)
class ProjectionOperator:
    """Validated weak orthogonal projection of declared rank."""

    P: np.ndarray
    N: int
    g: GramPair

    def __post_init__(self):
        P = as_operator(self.P, self.g.n, "P")
        scale = max(1.0, float(np.linalg.norm(P)))
        if np.linalg.norm(P @ P - P) > PROJECTION_TOL * scale:
            raise ValueError("operator is not idempotent")
        M = self.g.to_l2_frame(P)
        if np.linalg.norm(M - M.conj().T) > PROJECTION_TOL * scale:
            raise ValueError("operator is not self-adjoint for the weak product")
        tr = float(np.trace(P).real)
        if abs(tr - self.N) > TRACE_TOL * max(1.0, self.N):
            raise ValueError(f"trace {tr:.6f} does not match declared rank {self.N}")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @property
    def n(self) -> int:
        return self.g.n


def projection_from_frame(H, g: GramPair) -> ProjectionOperator:
    """Projection H H^H gl2 onto the span of an orthonormal frame H."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != g.n or H.shape[1] < 1:
        raise ValueError(f"frame must be n-by-N, got {H.shape}")
    N = H.shape[1]
    defect = np.linalg.norm(H.conj().T @ g.gl2 @ H - np.eye(N))
    if defect > 1e-8 * max(1.0, math.sqrt(N)):
        raise ValueError(f"frame is not orthonormal (defect {defect:.3e})")
    return ProjectionOperator(H @ H.conj().T @ g.gl2, N, g)


def range_frame(P: ProjectionOperator) -> np.ndarray:
    """Deterministic orthonormal basis of range(P)."""
    H = orthonormal_columns(P.P, P.g, phase_fix=True)
    if H.shape[1] != P.N:
        raise ValueError(
            f"projection range has numerical dimension {H.shape[1]}, declared {P.N}"
        )
    return H


def phi(V: StiefelOperator) -> ProjectionOperator:
    """Quotient map onto projections: V -> V V*2."""
    return projection_of(V)


def _psi_factors(P: ProjectionOperator, P1: ProjectionOperator, ref: ReferenceFrame):
    g = P.g
    dist = h1_operator_norm(P1.P - P.P, g)
    rad = 1.0 / (h1_operator_norm(P.P, g) + 1.0) ** 2
    if not dist < rad:
        raise NeighborhoodViolation(
            f"projection distance {dist:.6e} is not inside the section radius {rad:.6e}"
        )
    b1 = h1_operator_norm(P.P - P.P @ P1.P @ P.P, g)
    b2 = h1_operator_norm(P1.P - P1.P @ P.P @ P1.P, g)
    if max(b1, b2) >= 1.0:
        raise NeighborhoodViolation(
            f"contraction bounds ({b1:.6f}, {b2:.6f}) must stay below 1"
        )
    U = frame_unitary(ref.Xi, range_frame(P), g)
    t1 = P1.P @ _inv_sqrt_on_range(P.P @ P1.P @ P.P, g, P.N)
    return U, t1


def psi_section(P: ProjectionOperator, P1: ProjectionOperator, ref: ReferenceFrame) -> StiefelOperator:
    """Local section of the quotient map around P.

    A fixed group element carries the reference subspace onto range(P); the
    partial isometry T1 then tilts range(P) onto range(P1).  The composition
    is an isometric embedding whose projection recovers P1.
    """
    if P.N != ref.N:
        raise ValueError("projection rank and reference width differ")
    U, t1 = _psi_factors(P, P1, ref)
    return StiefelOperator(t1 @ U.data, ref)


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of testing whether two embeddings share their image subspace."""

    equivalent: bool
    projection_distance: float
    unitary: GroupElement | None = None
    map_residual: float | None = None


def grassmann_equivalence(
    V: StiefelOperator, V1: StiefelOperator, tol: float = EQUIVALENCE_TOL
) -> EquivalenceResult:
    """Decide V ~ V1 and, on success, return the witnessing block unitary.

    The witness U = V1*2 V + (I - Pi_S) acts as a weak unitary of the
    reference subspace and as the identity on its complement, and satisfies
    V1 U = V up to the reported residual.
    """
    g = V.g
    dist = h1_operator_norm(V.projection - V1.projection, g)
    if dist > tol:
        return EquivalenceResult(equivalent=False, projection_distance=dist)
    eye = np.eye(g.n, dtype=np.complex128)
    U = V1.v_adj @ V.V + (eye - V.ref.span_projection)
    residual = float(np.linalg.norm(V1.V @ U - V.V))
    element = GroupElement(U, g, tol=max(1e-6, 10 * tol))
    return EquivalenceResult(
        equivalent=True,
        projection_distance=dist,
        unitary=element,
        map_residual=residual,
    )


def act_grassmann(U: GroupElement, P: ProjectionOperator) -> ProjectionOperator:
    """Conjugation action U . P = U P U^-1; preserves rank and projection laws."""
    return ProjectionOperator(U.data @ P.P @ U.inv, P.N, P.g)


def connecting_unitary(P: ProjectionOperator, P1: ProjectionOperator) -> GroupElement:
    """Explicit group element conjugating P onto P1; the action is transitive."""
    if P.N != P1.N:
        raise ValueError("projections must have equal rank")
    return frame_unitary(range_frame(P), range_frame(P1), P.g)


def section_pi_p(P: ProjectionOperator, P1: ProjectionOperator, ref: ReferenceFrame) -> GroupElement:
    """Section of the conjugation action: a group element with U P U^-1 = P1.

    Built by lifting both projections through the quotient section and
    applying the cross section on the embedding side.  The working radius
    starts at the smaller of the quotient-section radius and the safe radius
    of the lifted base point, and is halved (at most twenty times) until the
    lifted pair falls inside the embedding-side neighborhood; pairs that
    never do are rejected.
    """
    V = psi_section(P, P, ref)
    r_v = radius_r(V)
    dist = h1_operator_norm(P1.P - P.P, P.g)
    r_star = min(1.0 / (h1_operator_norm(P.P, P.g) + 1.0) ** 2, r_v)
    V1 = psi_section(P, P1, ref)
    lifted_dist = h1_operator_norm(V1.V - V.V, P.g)
    for _ in range(21):
        if not dist < r_star:
            raise NeighborhoodViolation(
                f"projection distance {dist:.6e} is outside the working radius {r_star:.6e}"
            )
        if lifted_dist < r_v:
            break
        r_star /= 2.0
    else:
        raise NeighborhoodViolation(
            f"lifted distance {lifted_dist:.6e} never entered the safe radius {r_v:.6e}"
        )
    return cross_section_sigma(V, V1)


def delta_p(Y, P: ProjectionOperator) -> np.ndarray:
    """Commutator map Y -> Y P - P Y; cubes back to itself."""
    Y = as_operator(Y, P.n, "Y")
    return Y @ P.P - P.P @ Y


def tangent_project_grassmann(Y, P: ProjectionOperator) -> np.ndarray:
    """Idempotent E = delta_P applied twice; projects onto the tangent space."""
    return delta_p(delta_p(Y, P), P)


def lie_split_grassmann(X: SkewOperator, P: ProjectionOperator) -> tuple[SkewOperator, SkewOperator]:
    """Split X into a part commuting with P and a purely off-diagonal part."""
    Pm = P.P
    eye = np.eye(P.n, dtype=np.complex128)
    ip = eye - Pm
    xg = Pm @ X.data @ Pm + ip @ X.data @ ip
    xh = X.data - xg
    return SkewOperator(xg, X.g), SkewOperator(xh, X.g)
