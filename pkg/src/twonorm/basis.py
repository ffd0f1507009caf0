"""Weighted Gram-Schmidt utilities for the weak inner product.

All routines orthonormalize with respect to the gl2 form of a
:class:`~twonorm.space.GramPair`.  Completion is deterministic: candidates are
processed by largest residual norm (ties broken by lowest index), residuals
below ``drop_tol`` are discarded, and appended vectors get a canonical phase
so that reruns and nearby inputs produce nearby bases.
"""

from __future__ import annotations

import numpy as np

from .space import GramPair

__all__ = ["orthonormal_columns", "complete_basis", "canonical_phase"]

DROP_TOL = 1e-12


def _col_norms(W, g: GramPair):
    if W.shape[1] == 0:
        return np.zeros(0)
    quad = np.einsum("ij,ij->j", W.conj(), g.gl2 @ W).real
    return np.sqrt(np.maximum(quad, 0.0))


def _project_out(B, W, g: GramPair):
    """One modified Gram-Schmidt sweep of the columns of W against basis B."""
    for j in range(B.shape[1]):
        b = B[:, j]
        coeff = (g.gl2 @ b).conj() @ W
        W = W - np.outer(b, coeff)
    return W


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate v so its largest-modulus entry is real and positive."""
    j = int(np.argmax(np.abs(v)))
    z = v[j]
    if np.abs(z) == 0.0:
        return v
    return v * (z.conj() / np.abs(z))


def complete_basis(B, candidates, g: GramPair, *, drop_tol=DROP_TOL, phase_fix=True):
    """Extend the orthonormal block B by vectors drawn from ``candidates``.

    Returns only the appended block (possibly zero columns).  Pivoting on the
    residual weak norm makes the outcome independent of candidate order up to
    exact ties, which are broken by the lowest index.
    """
    B = np.asarray(B, dtype=np.complex128).copy()
    W = np.asarray(candidates, dtype=np.complex128).copy()
    if W.ndim != 2 or W.shape[0] != g.n:
        raise ValueError(f"candidates must be {g.n}-by-k, got shape {W.shape}")
    # Two sweeps against the existing basis keep the residuals orthogonal to
    # working precision even when candidates nearly lie in span(B).
    W = _project_out(B, W, g)
    W = _project_out(B, W, g)
    appended = np.zeros((g.n, 0), dtype=np.complex128)
    while W.shape[1] > 0:
        norms = _col_norms(W, g)
        j = int(np.argmax(norms))
        if norms[j] < drop_tol:
            break
        v = W[:, j] / norms[j]
        # One reorthogonalization pass against everything accepted so far.
        full = np.hstack([B, appended])
        v = _project_out(full, v[:, None], g)[:, 0]
        nv = _col_norms(v[:, None], g)[0]
        if nv < drop_tol:
            W = np.delete(W, j, axis=1)
            continue
        v = v / nv
        if phase_fix:
            v = canonical_phase(v)
        appended = np.hstack([appended, v[:, None]])
        W = np.delete(W, j, axis=1)
        W = _project_out(v[:, None], W, g)
    return appended


def orthonormal_columns(M, g: GramPair, *, drop_tol=DROP_TOL, phase_fix=False):
    """Orthonormal basis of the column span of M under the weak product."""
    empty = np.zeros((g.n, 0), dtype=np.complex128)
    return complete_basis(empty, M, g, drop_tol=drop_tol, phase_fix=phase_fix)
