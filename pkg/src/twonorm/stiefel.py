"""Isometric embeddings of a fixed reference subspace, presented as operators.

A reference frame spans an N-dimensional subspace S of the coefficient space.
Points of the manifold are operators V that restrict to weak isometries of S
and vanish on its weak orthocomplement; equivalently V = Phi Xi^H gl2 for an
orthonormal image frame Phi.  The module provides the frame and operator
presentations, the transitive group action, local cross sections of that
action with an explicit safe radius, a series square root with a rigorous
truncation bound, and the tangent-space calculus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh

from .errors import ConvergenceFailure, NeighborhoodViolation, RankDeficiency
from .group import GroupElement, SkewOperator, frame_unitary
from .space import GramPair, adjoint_l2, as_operator, h1_operator_norm, norm_h1

__all__ = [
    "ReferenceFrame",
    "StiefelFrame",
    "StiefelOperator",
    "frame_to_operator",
    "operator_to_frame",
    "tuple_metric",
    "MetricEquivalenceReport",
    "metric_equivalence_report",
    "act",
    "projection_of",
    "projection_lipschitz_report",
    "binomial_coefficients",
    "binomial_sqrt",
    "binomial_sqrt_truncated",
    "series_tail_bound",
    "sqrt_F",
    "radius_formula",
    "radius_r",
    "SectionFactors",
    "section_factors",
    "cross_section_sigma",
    "translated_section",
    "delta_v",
    "K_map",
    "tangent_project",
    "lie_split_stiefel",
    "mcscf_validate",
]

FRAME_TOL = 1e-10
OPERATOR_TOL = 1e-8
RANGE_CUTOFF = 1e-12


@dataclass(frozen=True)
class ReferenceFrame:
    """Orthonormal basis of the reference subspace, with its strong-norm bound.

    The constant C = max_i ||xi_i||_h1 controls every Lipschitz estimate tied
    to this frame; it is reported per instance rather than normalized away.
    """

    Xi: np.ndarray
    g: GramPair

    def __post_init__(self):
        Xi = np.asarray(self.Xi, dtype=np.complex128)
        if Xi.ndim != 2 or Xi.shape[0] != self.g.n or Xi.shape[1] < 1:
            raise ValueError(f"reference frame must be n-by-N with N >= 1, got {Xi.shape}")
        N = Xi.shape[1]
        defect = np.linalg.norm(Xi.conj().T @ self.g.gl2 @ Xi - np.eye(N))
        if defect > FRAME_TOL * max(1.0, math.sqrt(N)):
            raise ValueError(f"reference frame is not orthonormal (defect {defect:.3e})")
        Xi.setflags(write=False)
        object.__setattr__(self, "Xi", Xi)
        object.__setattr__(self, "C", max(norm_h1(Xi[:, i], self.g) for i in range(N)))

    C: float = 0.0  # filled in __post_init__

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def N(self) -> int:
        return self.Xi.shape[1]

    @cached_property
    def span_projection(self) -> np.ndarray:
        """Weak orthogonal projection onto the reference subspace."""
        return self.Xi @ self.Xi.conj().T @ self.g.gl2


@dataclass(frozen=True)
class StiefelFrame:
    """Orthonormal N-tuple in the coefficient space."""

    Phi: np.ndarray
    g: GramPair
    tol: float = FRAME_TOL

    def __post_init__(self):
        Phi = np.asarray(self.Phi, dtype=np.complex128)
        if Phi.ndim != 2 or Phi.shape[0] != self.g.n or Phi.shape[1] < 1:
            raise ValueError(f"frame must be n-by-N with N >= 1, got {Phi.shape}")
        N = Phi.shape[1]
        defect = np.linalg.norm(Phi.conj().T @ self.g.gl2 @ Phi - np.eye(N))
        if defect > self.tol * max(1.0, math.sqrt(N)):
            raise ValueError(f"frame is not orthonormal (defect {defect:.3e})")
        Phi.setflags(write=False)
        object.__setattr__(self, "Phi", Phi)

    @property
    def N(self) -> int:
        return self.Phi.shape[1]


@dataclass(frozen=True)
class StiefelOperator:
    """Operator presentation V = Phi Xi^H gl2 of an isometric embedding of S."""

    V: np.ndarray
    ref: ReferenceFrame
    tol: float = OPERATOR_TOL

    def __post_init__(self):
        V = as_operator(self.V, self.ref.n, "V")
        g = self.ref.g
        Phi = V @ self.ref.Xi
        N = self.ref.N
        scale = max(1.0, float(np.linalg.norm(V)))
        iso_defect = np.linalg.norm(Phi.conj().T @ g.gl2 @ Phi - np.eye(N))
        rebuilt = Phi @ self.ref.Xi.conj().T @ g.gl2
        kernel_defect = np.linalg.norm(rebuilt - V)
        if iso_defect > self.tol * scale or kernel_defect > self.tol * scale:
            raise ValueError(
                "operator is not an isometric embedding of the reference subspace "
                f"(isometry defect {iso_defect:.3e}, kernel defect {kernel_defect:.3e})"
            )
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def g(self) -> GramPair:
        return self.ref.g

    @property
    def n(self) -> int:
        return self.ref.n

    @property
    def N(self) -> int:
        return self.ref.N

    @cached_property
    def v_adj(self) -> np.ndarray:
        """Weak adjoint of V; maps the image frame back onto the reference."""
        return adjoint_l2(self.V, self.g)

    @cached_property
    def projection(self) -> np.ndarray:
        """Weak orthogonal projection V V*2 onto the image subspace."""
        return self.V @ self.v_adj


def frame_to_operator(Phi: StiefelFrame, ref: ReferenceFrame) -> StiefelOperator:
    """Operator sending each reference vector xi_i to the frame vector phi_i."""
    if Phi.N != ref.N:
        raise ValueError(f"frame width {Phi.N} does not match reference width {ref.N}")
    V = Phi.Phi @ ref.Xi.conj().T @ ref.g.gl2
    return StiefelOperator(V, ref)


def operator_to_frame(V: StiefelOperator) -> StiefelFrame:
    """Image frame phi_i = V xi_i."""
    return StiefelFrame(V.V @ V.ref.Xi, V.g, tol=OPERATOR_TOL)


def tuple_metric(Phi: StiefelFrame, Psi: StiefelFrame) -> float:
    """Strong-norm tuple distance (sum_i ||phi_i - psi_i||_h1^2)^(1/2)."""
    if Phi.N != Psi.N:
        raise ValueError("frames must have equal width")
    g = Phi.g
    diff = Phi.Phi - Psi.Phi
    return float(
        math.sqrt(sum(norm_h1(diff[:, i], g) ** 2 for i in range(Phi.N)))
    )


@dataclass(frozen=True)
class MetricEquivalenceReport:
    """Two-sided comparison of tuple distance and operator distance."""

    tuple_distance: float
    operator_distance: float
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def metric_equivalence_report(
    Phi: StiefelFrame, Psi: StiefelFrame, ref: ReferenceFrame, slack: float = 1e-10
) -> MetricEquivalenceReport:
    """Check d <= sqrt(N) C ||V_Phi - V_Psi|| and ||V_Phi - V_Psi|| <= sqrt(N) d."""
    d = tuple_metric(Phi, Psi)
    V1 = frame_to_operator(Phi, ref)
    V2 = frame_to_operator(Psi, ref)
    opdist = h1_operator_norm(V1.V - V2.V, ref.g)
    root_n = math.sqrt(ref.N)
    return MetricEquivalenceReport(
        tuple_distance=d,
        operator_distance=opdist,
        lower_ok=opdist <= root_n * d + slack,
        upper_ok=d <= root_n * ref.C * opdist + slack,
    )


def act(U: GroupElement, V: StiefelOperator) -> StiefelOperator:
    """Left action U . V; the result stays on the manifold."""
    return StiefelOperator(U.data @ V.V, V.ref)


def projection_of(V: StiefelOperator):
    """Weak orthogonal projection onto the image of V, as a validated value."""
    from .grassmann import ProjectionOperator

    return ProjectionOperator(V.projection, V.N, V.g)


@dataclass(frozen=True)
class LipschitzReport:
    lhs: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.bound + 1e-10


def projection_lipschitz_report(V1: StiefelOperator, V2: StiefelOperator) -> LipschitzReport:
    """Verify ||P1 - P2|| <= N C (C ||V1|| + 1) ||V1 - V2|| in the strong norm."""
    g = V1.g
    lhs = h1_operator_norm(V1.projection - V2.projection, g)
    C = V1.ref.C
    factor = V1.N * C * (C * h1_operator_norm(V1.V, g) + 1.0)
    return LipschitzReport(lhs=lhs, bound=factor * h1_operator_norm(V1.V - V2.V, g))


# ---------------------------------------------------------------------------
# Series square root


def binomial_coefficients(count: int) -> np.ndarray:
    """Signed series coefficients c_1..c_count of (1+z)^(1/2)."""
    if count < 1:
        raise ValueError("count must be positive")
    out = np.empty(count)
    c = 0.5
    for k in range(1, count + 1):
        out[k - 1] = c
        c = c * (0.5 - k) / (k + 1)
    return out


def _validated_series_argument(B, g: GramPair):
    """Check weak self-adjointness and spectrum in [-1, 0]; return eigenvalues."""
    B = as_operator(B, g.n, "B")
    M = g.to_l2_frame(B)
    if np.linalg.norm(M - M.conj().T) > 1e-8 * max(1.0, np.linalg.norm(M)):
        raise ValueError("series argument is not self-adjoint for the weak product")
    lam = eigh(0.5 * (M + M.conj().T), eigvals_only=True, check_finite=False)
    if lam[0] < -1.0 - 1e-10 or lam[-1] > 1e-10:
        raise ValueError(
            f"series argument has spectrum [{lam[0]:.6e}, {lam[-1]:.6e}] outside [-1, 0]"
        )
    return B, lam


def _check_kernel_projector(B, K0, g: GramPair):
    K0 = as_operator(K0, g.n, "kernel projector")
    scale = max(1.0, float(np.linalg.norm(K0)))
    if np.linalg.norm(K0 @ K0 - K0) > 1e-8 * scale:
        raise ValueError("kernel projector is not idempotent")
    M = g.to_l2_frame(K0)
    if np.linalg.norm(M - M.conj().T) > 1e-8 * scale:
        raise ValueError("kernel projector is not self-adjoint for the weak product")
    if (
        np.linalg.norm(B @ K0 + K0) > 1e-8 * scale
        or np.linalg.norm(K0 @ B + K0) > 1e-8 * scale
    ):
        raise ValueError("kernel projector does not match the -1 eigenspace of B")
    return K0


def binomial_sqrt(
    B,
    g: GramPair,
    tol: float = 1e-10,
    kmax: int = 200_000,
    *,
    kernel_projector=None,
) -> np.ndarray:
    """Square root of I + B by the binomial series, for -I <= B <= 0 weakly.

    The truncation error after s terms is a scalar function of the weakly
    self-adjoint argument, so its weak norm is at most the scalar tail
    sum_(k>s) |c_k| rho^k on the spectrum, with rho the weak spectral radius;
    switching to the strong norm costs the Gram pencil factor.  Partial sums
    stop once that rigorous bound drops below tol.  At rho = 1 the tail
    decays like 1/sqrt(s), so a caller that knows the -1 eigenspace of B can
    pass its weak orthogonal projection as ``kernel_projector``: the series
    then runs on the deflated argument and the known kernel is restored
    exactly, keeping convergence geometric.
    """
    B, lam = _validated_series_argument(B, g)
    if not (tol > 0):
        raise ValueError("tol must be positive")
    Bw = B
    K0 = None
    if kernel_projector is not None:
        K0 = _check_kernel_projector(B, kernel_projector, g)
        Bw = B + K0
        _, lam = _validated_series_argument(Bw, g)
    rho = min(1.0, float(np.max(np.abs(lam))))
    amp = max(1.0, g.pencil_factor)
    # Exact weighted tail at s = 0: sum_k |c_k| rho^k = 1 - sqrt(1 - rho).
    tail = 1.0 - math.sqrt(max(0.0, 1.0 - rho)) if rho < 1.0 else 1.0
    if rho >= 1.0:
        needed = amp * amp / (math.pi * tol * tol)
        if needed > kmax:
            raise ConvergenceFailure(
                f"tail bound cannot reach tol={tol:.1e} within kmax={kmax} terms; "
                "the argument has weak spectral radius 1 (pass kernel_projector "
                "if the -1 eigenspace is known)"
            )
    n = g.n
    total = np.eye(n, dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    c = 0.5
    rho_pow = 1.0
    converged = False
    for k in range(1, kmax + 1):
        power = power @ Bw
        total = total + c * power
        rho_pow *= rho
        tail -= abs(c) * rho_pow
        c = c * (0.5 - k) / (k + 1)
        # tail now equals sum_(j>k) |c_j| rho^j.
        if tail * amp <= tol:
            converged = True
            break
    if not converged:
        raise ConvergenceFailure(
            f"series truncation bound did not reach tol={tol:.1e} within {kmax} terms"
        )
    if K0 is not None:
        total = total - K0
    return total


def binomial_sqrt_truncated(B, g: GramPair, terms: int, *, kernel_projector=None) -> np.ndarray:
    """Plain partial sum of the series with a fixed number of terms."""
    B, _ = _validated_series_argument(B, g)
    if terms < 1:
        raise ValueError("terms must be positive")
    Bw = B
    K0 = None
    if kernel_projector is not None:
        K0 = _check_kernel_projector(B, kernel_projector, g)
        Bw = B + K0
    total = np.eye(g.n, dtype=np.complex128)
    power = np.eye(g.n, dtype=np.complex128)
    c = 0.5
    for k in range(1, terms + 1):
        power = power @ Bw
        total = total + c * power
        c = c * (0.5 - k) / (k + 1)
    if K0 is not None:
        total = total - K0
    return total


def series_tail_bound(terms: int, rho: float, amp: float = 1.0) -> float:
    """Truncation error bound after ``terms`` series terms at spectral radius rho.

    Uses the geometric majorant |c_(terms+1)| rho^(terms+1) / (1 - rho) of the
    weighted coefficient tail (coefficient magnitudes decrease), scaled by the
    strong-norm amplification ``amp``.  Free of the cancellation that a
    closed-form-minus-partial-sum evaluation would suffer at small tails.
    """
    if not (0.0 < rho < 1.0):
        raise ValueError("rho must lie in (0, 1)")
    if terms < 1:
        raise ValueError("terms must be positive")
    coeffs = binomial_coefficients(terms + 1)
    return abs(float(coeffs[-1])) * rho ** (terms + 1) / (1.0 - rho) * max(1.0, amp)


def sqrt_F(V: StiefelOperator, W: StiefelOperator, tol: float = 1e-10, kmax: int = 200_000) -> np.ndarray:
    """((I-P)(I-Q)(I-P))^(1/2) for the image projections P of V and Q of W.

    The argument annihilates range(P), so that projection is handed to the
    series as the known kernel and the result vanishes there exactly.
    """
    g = V.g
    eye = np.eye(g.n, dtype=np.complex128)
    P = V.projection
    Q = W.projection
    ip = eye - P
    A = ip @ (eye - Q) @ ip
    return binomial_sqrt(A - eye, g, tol, kmax, kernel_projector=P)


# ---------------------------------------------------------------------------
# Cross sections of the group action


def radius_formula(C: float, N: int, vnorm: float) -> float:
    """Safe section radius for given frame constant, width and operator norm."""
    denom = C * C * N * N * (1.0 + vnorm) * (1.0 + C * N + C * N * vnorm) ** 2
    return min(1.0, 1.0 / denom)


def radius_r(V: StiefelOperator) -> float:
    """Safe section radius at the point V."""
    return radius_formula(V.ref.C, V.N, h1_operator_norm(V.V, V.g))


def _inv_sqrt_on_range(M, g: GramPair, rank: int, cutoff: float = RANGE_CUTOFF) -> np.ndarray:
    """Inverse square root of a weakly self-adjoint PSD operator on its range.

    The top ``rank`` eigenvalues are inverted; everything else is sent to
    zero.  An eigenvalue below the cutoff inside the declared range signals a
    breakdown of the neighborhood assumptions.
    """
    if rank == 0:
        return np.zeros((g.n, g.n), dtype=np.complex128)
    Ms = g.to_l2_frame(M)
    lam, Wv = eigh(0.5 * (Ms + Ms.conj().T), check_finite=False)
    lam = lam[::-1]
    Wv = Wv[:, ::-1]
    if lam[rank - 1] < cutoff:
        raise RankDeficiency(
            f"restricted operator eigenvalue {lam[rank - 1]:.3e} below cutoff {cutoff:.1e}"
        )
    f = np.zeros(g.n)
    f[:rank] = 1.0 / np.sqrt(lam[:rank])
    R = (Wv * f) @ Wv.conj().T
    return g.from_l2_frame(R)


@dataclass(frozen=True)
class SectionFactors:
    """Intermediate operators of the cross-section construction."""

    sigma: GroupElement
    t1: np.ndarray
    t2: np.ndarray
    t: np.ndarray
    w: np.ndarray
    bounds: tuple


def section_factors(V: StiefelOperator, V1: StiefelOperator) -> SectionFactors:
    """Cross-section data for a point V1 inside the safe radius around V.

    T1 carries range(P) isometrically onto range(P1), T2 does the same for
    the complements, and sigma = W T is the group element with sigma V = V1.
    Four contraction bounds must sit strictly below one for the restricted
    inverse square roots to exist; any failure raises NeighborhoodViolation.
    """
    g = V.g
    if V1.ref is not V.ref and not np.allclose(V1.ref.Xi, V.ref.Xi, atol=1e-12):
        raise ValueError("points use different reference frames")
    dist = h1_operator_norm(V1.V - V.V, g)
    r = radius_r(V)
    if not dist < r:
        raise NeighborhoodViolation(
            f"distance {dist:.6e} is not inside the safe radius {r:.6e}"
        )
    eye = np.eye(g.n, dtype=np.complex128)
    P = V.projection
    P1 = V1.projection
    ip = eye - P
    ip1 = eye - P1
    bounds = (
        h1_operator_norm(P - P @ P1 @ P, g),
        h1_operator_norm(P1 - P1 @ P @ P1, g),
        h1_operator_norm(ip - ip @ ip1 @ ip, g),
        h1_operator_norm(ip1 - ip1 @ ip @ ip1, g),
    )
    if max(bounds) >= 1.0:
        raise NeighborhoodViolation(
            f"contraction bounds {tuple(round(b, 6) for b in bounds)} must stay below 1"
        )
    t1 = P1 @ _inv_sqrt_on_range(P @ P1 @ P, g, V.N)
    t2 = ip1 @ _inv_sqrt_on_range(ip @ ip1 @ ip, g, g.n - V.N)
    t = t1 + t2
    w = V1.V @ V.v_adj @ adjoint_l2(t, g) + ip1
    sigma = GroupElement(w @ t, g)
    return SectionFactors(sigma=sigma, t1=t1, t2=t2, t=t, w=w, bounds=bounds)


def cross_section_sigma(V: StiefelOperator, V1: StiefelOperator) -> GroupElement:
    """Group element sigma with sigma V = V1, defined inside the safe radius."""
    return section_factors(V, V1).sigma


def translated_section(
    V: StiefelOperator, V0: StiefelOperator, V1: StiefelOperator
) -> GroupElement:
    """Section around an arbitrary base point V0 = U V, by translating with U.

    The safe radius shrinks by the strong norm of U^-1; the returned element
    maps V to V1.
    """
    g = V.g
    U = frame_unitary(operator_to_frame(V).Phi, operator_to_frame(V0).Phi, g)
    u_inv = U.inv
    shrink = h1_operator_norm(u_inv, g)
    dist = h1_operator_norm(V1.V - V0.V, g)
    allowed = radius_r(V) / shrink
    if not dist < allowed:
        raise NeighborhoodViolation(
            f"distance {dist:.6e} from the base point exceeds the translated radius {allowed:.6e}"
        )
    pulled_back = StiefelOperator(u_inv @ V1.V, V.ref)
    sigma = cross_section_sigma(V, pulled_back)
    return GroupElement(U.data @ sigma.data, g)


# ---------------------------------------------------------------------------
# Tangent calculus


def delta_v(X: SkewOperator, V: StiefelOperator) -> np.ndarray:
    """Tangent vector X V generated by the algebra element X."""
    return X.data @ V.V


def K_map(Y, V: StiefelOperator) -> np.ndarray:
    """Right inverse of the tangent map: Y -> Y V*2."""
    Y = as_operator(Y, V.n, "Y")
    return Y @ V.v_adj


def tangent_project(Y, V: StiefelOperator) -> np.ndarray:
    """Idempotent projection E = delta_V after K onto the tangent space at V."""
    return K_map(Y, V) @ V.V


def lie_split_stiefel(X: SkewOperator, P) -> tuple[SkewOperator, SkewOperator]:
    """Split X into isotropy and complement parts relative to the projection P.

    The isotropy part (I-P) X (I-P) kills range(P); the complement part has
    no (I-P)-corner.  Both stay in the algebra and they sum back to X.
    """
    Pm = as_operator(getattr(P, "P", P), X.g.n, "P")
    eye = np.eye(X.g.n, dtype=np.complex128)
    ip = eye - Pm
    xg = ip @ X.data @ ip
    xh = X.data - xg
    return SkewOperator(xg, X.g), SkewOperator(xh, X.g)


def mcscf_validate(c, Phi: StiefelFrame, K: int, N: int, tol: float = 1e-10) -> bool:
    """Validate a configuration-sphere point paired with a K-frame.

    The coefficient vector must be a real unit vector of length binom(K,N)+1
    and the frame must be an orthonormal K-tuple; dimension mismatches raise,
    numeric defects merely return False.
    """
    if not (1 <= N < K):
        raise ValueError(f"need 1 <= N < K, got N={N}, K={K}")
    c = np.asarray(c, dtype=np.complex128)
    expected = math.comb(K, N) + 1
    if c.shape != (expected,):
        raise ValueError(f"coefficient vector must have length {expected}, got {c.shape}")
    if Phi.N != K:
        raise ValueError(f"frame must have {K} columns, got {Phi.N}")
    if float(np.max(np.abs(c.imag))) > tol:
        return False
    if abs(float(np.linalg.norm(c.real)) - 1.0) > tol:
        return False
    defect = np.linalg.norm(Phi.Phi.conj().T @ Phi.g.gl2 @ Phi.Phi - np.eye(K))
    return bool(defect <= tol * max(1.0, math.sqrt(K)))
