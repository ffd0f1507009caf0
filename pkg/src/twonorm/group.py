"""Invertible operators preserving the weak norm, and their skew generators.

Membership is the quadratic identity U^H gl2 U = gl2; the corresponding
algebra condition is X^H gl2 + gl2 X = 0.  Elements act on the strong space,
so invertibility there comes for free in finite dimension, but predicates
still guard against numerically singular input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .basis import complete_basis
from .errors import ConvergenceFailure
from .space import GramPair, as_operator

__all__ = [
    "GroupElement",
    "SkewOperator",
    "membership_residual",
    "skew_residual",
    "is_group_member",
    "is_lie_algebra_member",
    "exp_skew",
    "bracket",
    "frame_unitary",
    "algebraic_membership_residual",
]

DEFAULT_TOL = 1e-10
CONSTRUCT_TOL = 1e-8
RCOND_FLOOR = 1e-12


def membership_residual(A, g: GramPair) -> float:
    """Relative Frobenius defect of the form-preservation identity."""
    A = as_operator(A, g.n, "A")
    return float(
        np.linalg.norm(A.conj().T @ g.gl2 @ A - g.gl2) / np.linalg.norm(g.gl2)
    )


def skew_residual(X, g: GramPair) -> float:
    X = as_operator(X, g.n, "X")
    return float(np.linalg.norm(X.conj().T @ g.gl2 + g.gl2 @ X) / np.linalg.norm(g.gl2))


def is_group_member(A, g: GramPair, tol: float = DEFAULT_TOL) -> bool:
    """True iff A is invertible and preserves the weak form at tolerance."""
    A = as_operator(A, g.n, "A")
    if not np.all(np.isfinite(A)):
        return False
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= RCOND_FLOOR * sv[0] or sv[0] == 0.0:
        return False
    return membership_residual(A, g) <= tol


def is_lie_algebra_member(X, g: GramPair, tol: float = DEFAULT_TOL) -> bool:
    return skew_residual(X, g) <= tol


@dataclass(frozen=True)
class GroupElement:
    """Validated member of the weak-isometry group."""

    data: np.ndarray
    g: GramPair
    tol: float = CONSTRUCT_TOL

    def __post_init__(self):
        data = as_operator(self.data, self.g.n, "group element")
        res = membership_residual(data, self.g)
        if not np.isfinite(res) or res > self.tol:
            raise ValueError(
                f"form-preservation residual {res:.3e} exceeds tolerance {self.tol:.1e}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @cached_property
    def inv(self) -> np.ndarray:
        return np.linalg.inv(self.data)


@dataclass(frozen=True)
class SkewOperator:
    """Validated member of the corresponding Lie algebra."""

    data: np.ndarray
    g: GramPair
    tol: float = CONSTRUCT_TOL

    def __post_init__(self):
        data = as_operator(self.data, self.g.n, "skew operator")
        res = skew_residual(data, self.g)
        if not np.isfinite(res) or res > self.tol:
            raise ValueError(
                f"skewness residual {res:.3e} exceeds tolerance {self.tol:.1e}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


def bracket(X: SkewOperator, Y: SkewOperator) -> SkewOperator:
    """Commutator [X, Y]; the algebra is closed under it."""
    return SkewOperator(X.data @ Y.data - Y.data @ X.data, X.g)


def exp_skew(X: SkewOperator, *, max_terms: int = 80) -> GroupElement:
    """Exponential by scaling and squaring of the Taylor series.

    The argument is scaled so the series converges rapidly, summed until
    terms fall below machine tolerance, then repeatedly squared.
    """
    A = X.data
    g = X.g
    nrm = np.linalg.norm(A)
    squarings = 0
    if nrm > 0.5:
        squarings = int(np.ceil(np.log2(nrm / 0.5)))
        A = A / (2.0**squarings)
    n = g.n
    total = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, max_terms + 1):
        term = term @ A / k
        total = total + term
        if np.linalg.norm(term) <= 1e-17 * np.linalg.norm(total):
            break
    else:
        raise ConvergenceFailure("exponential series did not reach machine tolerance")
    for _ in range(squarings):
        total = total @ total
    return GroupElement(total, g)


def frame_unitary(F0, F1, g: GramPair, *, tol: float = 1e-8) -> GroupElement:
    """Group element mapping one orthonormal N-frame onto another.

    Both frames are completed to orthonormal bases of their joint span by
    pivoted Gram-Schmidt; the element maps the first basis to the second and
    fixes the weak orthocomplement of the span.  Appended completion vectors
    carry a canonical phase, so two nearby frames produce an element close to
    the identity.
    """
    F0 = np.asarray(F0, dtype=np.complex128)
    F1 = np.asarray(F1, dtype=np.complex128)
    if F0.shape != F1.shape or F0.ndim != 2 or F0.shape[0] != g.n:
        raise ValueError(f"frames must share shape ({g.n}, N), got {F0.shape} and {F1.shape}")
    N = F0.shape[1]
    eye = np.eye(N)
    for name, F in (("first", F0), ("second", F1)):
        defect = np.linalg.norm(F.conj().T @ g.gl2 @ F - eye)
        if defect > tol * max(1.0, np.sqrt(N)):
            raise ValueError(f"{name} frame is not orthonormal (defect {defect:.3e})")
    if np.linalg.norm(F1 - F0) <= 1e-14:
        return GroupElement(np.eye(g.n, dtype=np.complex128), g)
    alpha = complete_basis(F0, F1, g)
    beta = complete_basis(F1, F0, g)
    if alpha.shape[1] != beta.shape[1]:
        raise ConvergenceFailure(
            "joint-span completions disagree on dimension; frames are near a rank decision boundary"
        )
    A = np.hstack([F0, alpha])
    B = np.hstack([F1, beta])
    U = np.eye(g.n, dtype=np.complex128) + (B - A) @ A.conj().T @ g.gl2
    return GroupElement(U, g)


def algebraic_membership_residual(
    U, g: GramPair, probes: int = 16, *, rng=None
) -> float:
    """Largest defect of the quadratic membership identity on random probes.

    For each weakly normalized probe phi the residual |<U*2 U phi, phi> - 1|
    is evaluated, where U*2 is the weak adjoint; for members the adjoint
    equals the inverse, so the value vanishes up to rounding.
    """
    U = as_operator(U, g.n, "U")
    sv = np.linalg.svd(U, compute_uv=False)
    if sv[-1] <= RCOND_FLOOR * max(sv[0], 1.0):
        raise ValueError("element is numerically singular")
    if probes < 1:
        raise ValueError("probes must be positive")
    if rng is None:
        rng = np.random.Generator(np.random.Philox(key=0))
    # Degree-two polynomial coefficient: the weak Gram matrix of U.
    quad = U.conj().T @ g.gl2 @ U
    worst = 0.0
    for _ in range(probes):
        v = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
        nrm = np.sqrt((v.conj() @ (g.gl2 @ v)).real)
        v = v / nrm
        val = (v.conj() @ (quad @ v)).real - 1.0
        worst = max(worst, abs(float(val)))
    return worst
