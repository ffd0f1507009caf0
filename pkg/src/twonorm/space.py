"""Finite-dimensional model of a Hilbert space carrying two inner products.

A weak product (``l2``) and a strong product (``h1``) are represented by
Hermitian positive-definite Gram matrices on the coefficient space C^n, with
the strong Gram matrix dominating the weak one.  :func:`build_space`
discretizes scalar fields on a periodic uniform grid: the weak form is the
quadrature weight h^d times the identity and the strong form adds
forward-difference derivative energy, so domination holds by construction.

Vectors are plain length-n complex ndarrays and operators are n-by-n complex
ndarrays acting on coefficients; no wrapper classes are used for either.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh, svdvals

__all__ = [
    "SpaceSpec",
    "GramPair",
    "build_space",
    "gram_pair_from_matrices",
    "inner_l2",
    "inner_h1",
    "norm_l2",
    "norm_h1",
    "adjoint_l2",
    "adjoint_h1",
    "l2_operator_norm",
    "h1_operator_norm",
]

# Hermitian / positive semidefiniteness slack used when validating Gram data.
HERMITIAN_TOL = 1e-12
PSD_FLOOR = -1e-12


def as_operator(A, n=None, name="operator"):
    """Coerce to an n-by-n complex128 array, validating the shape."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if n is not None and A.shape[0] != n:
        raise ValueError(f"{name} must be {n}x{n}, got shape {A.shape}")
    return A


def as_vector(x, n, name="vector"):
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (n,):
        raise ValueError(f"{name} must have shape ({n},), got {x.shape}")
    return x


@dataclass(frozen=True)
class SpaceSpec:
    """Periodic uniform grid description.

    domain_dim  -- spatial dimension, 1, 2 or 3
    grid_points -- points per axis, at least 2
    spacing     -- positive grid spacing h
    boundary    -- only "periodic" is supported
    """

    domain_dim: int
    grid_points: int
    spacing: float
    boundary: str = "periodic"

    def __post_init__(self):
        if self.domain_dim not in (1, 2, 3):
            raise ValueError(f"domain_dim must be 1, 2 or 3, got {self.domain_dim}")
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if not (self.spacing > 0):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.boundary != "periodic":
            raise ValueError(f"unsupported boundary {self.boundary!r}")

    @property
    def n(self) -> int:
        return self.grid_points**self.domain_dim


@dataclass(frozen=True)
class GramPair:
    """Pair of Gram matrices (weak, strong) with cached factorizations.

    Invariants: both matrices are Hermitian positive definite and
    ``gh1 - gl2`` is positive semidefinite.  When forward-difference
    operators are attached (grid-built pairs), ``gh1`` equals
    ``gl2 + sum_a D_a^H gl2 D_a``.
    """

    n: int
    gl2: np.ndarray
    gh1: np.ndarray
    deriv: tuple = ()

    def __post_init__(self):
        gl2 = as_operator(self.gl2, self.n, "gl2")
        gh1 = as_operator(self.gh1, self.n, "gh1")
        for name, G in (("gl2", gl2), ("gh1", gh1)):
            scale = max(1.0, float(np.linalg.norm(G)))
            if np.linalg.norm(G - G.conj().T) > HERMITIAN_TOL * scale:
                raise ValueError(f"{name} is not Hermitian")
            try:
                np.linalg.cholesky(G)
            except np.linalg.LinAlgError:
                raise ValueError(f"{name} is not positive definite") from None
        gap = eigh(gh1 - gl2, eigvals_only=True, check_finite=False)
        scale = max(1.0, float(np.linalg.norm(gh1, 2)))
        if gap[0] < PSD_FLOOR * scale:
            raise ValueError(
                f"gh1 - gl2 has eigenvalue {gap[0]:.3e}; the strong form must dominate"
            )
        deriv = tuple(as_operator(D, self.n, "difference operator") for D in self.deriv)
        if deriv:
            rebuilt = gl2 + sum(D.conj().T @ gl2 @ D for D in deriv)
            if np.linalg.norm(gh1 - rebuilt) > 1e-10 * max(1.0, np.linalg.norm(gh1)):
                raise ValueError("gh1 does not match gl2 plus difference energy")
        for arr in (gl2, gh1) + deriv:
            arr.setflags(write=False)
        object.__setattr__(self, "gl2", gl2)
        object.__setattr__(self, "gh1", gh1)
        object.__setattr__(self, "deriv", deriv)

    # Factorizations are computed once per pair and reused by every operation.

    @cached_property
    def _chol_l2(self):
        return cho_factor(self.gl2, check_finite=False)

    @cached_property
    def _chol_h1(self):
        return cho_factor(self.gh1, check_finite=False)

    @cached_property
    def _sqrt_pair_l2(self):
        return _hermitian_sqrt_pair(self.gl2)

    @cached_property
    def _sqrt_pair_h1(self):
        return _hermitian_sqrt_pair(self.gh1)

    @property
    def sqrt_l2(self):
        return self._sqrt_pair_l2[0]

    @property
    def isqrt_l2(self):
        return self._sqrt_pair_l2[1]

    @property
    def sqrt_h1(self):
        return self._sqrt_pair_h1[0]

    @property
    def isqrt_h1(self):
        return self._sqrt_pair_h1[1]

    def solve_l2(self, B):
        """gl2^{-1} B via the cached Cholesky factor."""
        return cho_solve(self._chol_l2, B, check_finite=False)

    def solve_h1(self, B):
        return cho_solve(self._chol_h1, B, check_finite=False)

    def to_l2_frame(self, A):
        """Congruence gl2^{1/2} A gl2^{-1/2}; Hermitian iff A is weakly self-adjoint."""
        return self.sqrt_l2 @ A @ self.isqrt_l2

    def from_l2_frame(self, A):
        return self.isqrt_l2 @ A @ self.sqrt_l2

    def to_h1_frame(self, A):
        return self.sqrt_h1 @ A @ self.isqrt_h1

    @cached_property
    def pencil_factor(self) -> float:
        """Largest ratio of strong to weak operator norms, sqrt(mu_max/mu_min).

        mu are the eigenvalues of the (strong, weak) Gram pencil; for any
        operator A, ||A||_h1 <= pencil_factor * ||A||_l2 and conversely.
        """
        mu = eigh(self.gh1, self.gl2, eigvals_only=True, check_finite=False)
        return float(np.sqrt(mu[-1] / mu[0]))


def _hermitian_sqrt_pair(G):
    lam, W = eigh(G, check_finite=False)
    root = np.sqrt(lam)
    sqrt = (W * root) @ W.conj().T
    isqrt = (W / root) @ W.conj().T
    return sqrt, isqrt


def _shift_matrix(m: int) -> np.ndarray:
    """Periodic forward shift: (S x)_j = x_{j+1 mod m}."""
    S = np.zeros((m, m))
    for j in range(m):
        S[j, (j + 1) % m] = 1.0
    return S


def forward_difference(spec: SpaceSpec, axis: int) -> np.ndarray:
    """Periodic forward difference along one axis, row-major grid ordering."""
    m, d, h = spec.grid_points, spec.domain_dim, spec.spacing
    if not 0 <= axis < d:
        raise ValueError(f"axis {axis} out of range for dimension {d}")
    D1 = (_shift_matrix(m) - np.eye(m)) / h
    out = np.eye(1)
    for a in range(d):
        out = np.kron(out, D1 if a == axis else np.eye(m))
    return out.astype(np.complex128)


def build_space(spec: SpaceSpec) -> GramPair:
    """Gram pair for a periodic grid: quadrature weights plus difference energy."""
    n = spec.n
    hd = spec.spacing**spec.domain_dim
    gl2 = hd * np.eye(n, dtype=np.complex128)
    derivs = tuple(forward_difference(spec, a) for a in range(spec.domain_dim))
    gh1 = gl2 + sum(D.conj().T @ gl2 @ D for D in derivs)
    return GramPair(n=n, gl2=gl2, gh1=gh1, deriv=derivs)


def gram_pair_from_matrices(gl2, gh1) -> GramPair:
    """Gram pair from explicit matrices; the strong form must dominate the weak."""
    gl2 = np.asarray(gl2, dtype=np.complex128)
    return GramPair(n=gl2.shape[0], gl2=gl2, gh1=gh1)


def inner_l2(x, y, g: GramPair) -> complex:
    """Weak inner product <x, y>, linear in x and conjugate-linear in y."""
    x = as_vector(x, g.n, "x")
    y = as_vector(y, g.n, "y")
    return complex(y.conj() @ (g.gl2 @ x))


def inner_h1(x, y, g: GramPair) -> complex:
    """Strong inner product <x, y>, linear in x and conjugate-linear in y."""
    x = as_vector(x, g.n, "x")
    y = as_vector(y, g.n, "y")
    return complex(y.conj() @ (g.gh1 @ x))


def norm_l2(x, g: GramPair) -> float:
    return float(np.sqrt(max(inner_l2(x, x, g).real, 0.0)))


def norm_h1(x, g: GramPair) -> float:
    return float(np.sqrt(max(inner_h1(x, x, g).real, 0.0)))


def adjoint_l2(A, g: GramPair) -> np.ndarray:
    """Adjoint with respect to the weak product: gl2^{-1} A^H gl2."""
    A = as_operator(A, g.n, "A")
    return g.solve_l2(A.conj().T @ g.gl2)


def adjoint_h1(A, g: GramPair) -> np.ndarray:
    """Adjoint with respect to the strong product: gh1^{-1} A^H gh1."""
    A = as_operator(A, g.n, "A")
    return g.solve_h1(A.conj().T @ g.gh1)


def l2_operator_norm(A, g: GramPair) -> float:
    """Operator norm of A as a map of the weak space."""
    A = as_operator(A, g.n, "A")
    return float(svdvals(g.to_l2_frame(A), check_finite=False)[0])


def h1_operator_norm(A, g: GramPair) -> float:
    """Operator norm of A as a map of the strong space.

    Computed as the largest singular value of gh1^{1/2} A gh1^{-1/2}.
    """
    A = as_operator(A, g.n, "A")
    return float(svdvals(g.to_h1_frame(A), check_finite=False)[0])
