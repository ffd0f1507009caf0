import numpy as np
import pytest

from twonorm import (
    ConvergenceFailure,
    GroupElement,
    SkewOperator,
    algebraic_membership_residual,
    bracket,
    exp_skew,
    frame_unitary,
    is_group_member,
    is_lie_algebra_member,
    membership_residual,
    skew_residual,
)
from twonorm.basis import orthonormal_columns
from twonorm.sampling import random_complex, random_group_member, random_skew, rng_for_trial


def test_skew_parameterization_is_exact(g, rng):
    X = random_skew(rng, g)
    assert skew_residual(X.data, g) <= 1e-13
    assert is_lie_algebra_member(X.data, g)


def test_exponential_lands_in_group(g, rng):
    X = random_skew(rng, g, scale=1.5)
    U = exp_skew(X)
    assert membership_residual(U.data, g) <= 1e-10
    assert is_group_member(U.data, g)


def test_group_operations_stay_in_group(g, rng):
    U = random_group_member(rng, g, scale=0.8)
    W = random_group_member(rng, g, scale=0.8)
    assert membership_residual(U.data @ W.data, g) <= 1e-9
    assert membership_residual(U.inv, g) <= 1e-9
    assert np.allclose(U.data @ U.inv, np.eye(g.n), atol=1e-10)


def test_exponential_one_parameter_property(g, rng):
    X = random_skew(rng, g, scale=0.6)
    U = lambda t: exp_skew(SkewOperator(t * X.data, g)).data
    assert np.allclose(U(0.7) @ U(0.3), U(1.0), atol=1e-12)
    assert np.allclose(U(1.0) @ U(-1.0), np.eye(g.n), atol=1e-12)


def test_bracket_closes(g, rng):
    X = random_skew(rng, g)
    Y = random_skew(rng, g)
    Z = bracket(X, Y)
    assert skew_residual(Z.data, g) <= 1e-12


def test_exp_budget_exhaustion(g, rng):
    X = random_skew(rng, g, scale=1.0)
    with pytest.raises(ConvergenceFailure):
        exp_skew(X, max_terms=2)


def test_group_element_rejects_non_member(g):
    bad = np.eye(g.n, dtype=np.complex128)
    bad[0, 0] = 2.0
    with pytest.raises(ValueError):
        GroupElement(bad, g)
    with pytest.raises(ValueError):
        SkewOperator(np.eye(g.n), g)


def test_membership_rejects_singular(g):
    assert not is_group_member(np.zeros((g.n, g.n)), g)


def test_frame_unitary_swaps_axes(g_flat):
    F0 = np.array([[1.0], [0.0]], dtype=complex)
    F1 = np.array([[0.0], [1.0]], dtype=complex)
    U = frame_unitary(F0, F1, g_flat)
    assert np.allclose(U.data, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)


def test_frame_unitary_maps_frame_to_frame(g, rng):
    F0 = orthonormal_columns(random_complex(rng, g.n, 3), g)
    F1 = orthonormal_columns(random_complex(rng, g.n, 3), g)
    U = frame_unitary(F0, F1, g)
    assert np.allclose(U.data @ F0, F1, atol=1e-9)
    assert membership_residual(U.data, g) <= 1e-9


def test_frame_unitary_near_identity_for_nearby_frames(g, rng):
    F0 = orthonormal_columns(random_complex(rng, g.n, 2), g)
    # Symmetric orthonormalization keeps the perturbed frame columnwise close.
    M = F0 + 1e-6 * random_complex(rng, g.n, 2)
    w, Q = np.linalg.eigh(M.conj().T @ g.gl2 @ M)
    F1 = M @ (Q * (1.0 / np.sqrt(w))) @ Q.conj().T
    assert np.linalg.norm(F1 - F0) <= 1e-4
    U = frame_unitary(F0, F1, g)
    assert np.linalg.norm(U.data - np.eye(g.n)) <= 1e-4


def test_frame_unitary_transitive_on_frames(g, rng):
    frames = [orthonormal_columns(random_complex(rng, g.n, 2), g) for _ in range(3)]
    U01 = frame_unitary(frames[0], frames[1], g)
    U12 = frame_unitary(frames[1], frames[2], g)
    assert np.linalg.norm(U12.data @ (U01.data @ frames[0]) - frames[2]) <= 1e-9


def test_algebraic_membership_detects_stretch(g, rng):
    U = random_group_member(rng, g, scale=0.8)
    assert algebraic_membership_residual(U.data, g, rng=rng) <= 1e-8
    stretch = np.eye(g.n, dtype=np.complex128)
    stretch[0, 0] = 2.0
    assert algebraic_membership_residual(stretch, g, rng=rng) > 0.1
    with pytest.raises(ValueError):
        algebraic_membership_residual(np.zeros((g.n, g.n)), g, rng=rng)


def test_algebraic_membership_default_probes_deterministic(g, rng):
    U = random_group_member(rng, g, scale=0.5)
    r1 = algebraic_membership_residual(U.data, g)
    r2 = algebraic_membership_residual(U.data, g)
    assert r1 == r2
