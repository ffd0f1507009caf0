import numpy as np
import pytest

from twonorm import RankDeficiency, adjoint_l2
from twonorm.oracles import adjoint_by_definition, pinv_on_range, sqrt_eig
from twonorm.sampling import random_complex, random_projection, rng_for_trial


def rank_one_projection(g):
    v = np.zeros(g.n, dtype=np.complex128)
    v[0] = 1.0
    v = v / np.sqrt((v.conj() @ g.gl2 @ v).real)
    return np.outer(v, v.conj()) @ g.gl2


def test_sqrt_eig_matches_closed_form(g):
    # sqrt(I - 0.75 P) = I - 0.5 P for any weak orthogonal projection P.
    P = rank_one_projection(g)
    A = np.eye(g.n) - 0.75 * P
    R = sqrt_eig(A, g)
    assert np.linalg.norm(R - (np.eye(g.n) - 0.5 * P)) <= 1e-12


def test_sqrt_eig_squares_back(g, rng):
    C = random_complex(rng, g.n, g.n)
    A = g.from_l2_frame(g.to_l2_frame(C) @ g.to_l2_frame(C).conj().T)
    R = sqrt_eig(A, g)
    assert np.linalg.norm(R @ R - A) <= 1e-10 * max(1.0, np.linalg.norm(A))


def test_sqrt_eig_keeps_kernel_exact(g):
    P = rank_one_projection(g)
    R = sqrt_eig(P, g)
    # The square root of a projection is the projection itself, kernel included.
    assert np.linalg.norm(R - P) <= 1e-12
    v = np.ones(g.n, dtype=np.complex128)
    v = v - P @ v
    assert np.linalg.norm(R @ v) <= 1e-12 * np.linalg.norm(v)


def test_sqrt_eig_rejects_non_self_adjoint(g):
    A = np.zeros((g.n, g.n), dtype=np.complex128)
    A[0, 1] = 1.0
    with pytest.raises(ValueError):
        sqrt_eig(A, g)


def test_sqrt_eig_rejects_negative(g):
    with pytest.raises(ValueError):
        sqrt_eig(-np.eye(g.n), g)


def test_adjoint_by_definition_agrees_with_library(g, rng):
    A = random_complex(rng, g.n, g.n)
    B = adjoint_by_definition(A, g)
    assert np.linalg.norm(B - adjoint_l2(A, g)) <= 1e-10 * np.linalg.norm(B)


def test_adjoint_by_definition_frozen_two_point(g_small):
    # d=1, m=2, h=1: gl2 = I, gh1 = [[3,-2],[-2,3]]; the weak adjoint of a
    # matrix is its conjugate transpose because gl2 is the identity.
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B = adjoint_by_definition(A, g_small)
    assert np.linalg.norm(B - A.conj().T) <= 1e-13


def test_pinv_on_range_inverts_restriction(g, rng):
    P = random_projection(rng, g, 3)
    # A acts as 2 I on range(P) and as the identity off it.
    A = np.eye(g.n) + P.P
    B = pinv_on_range(P.P, A, g)
    assert np.linalg.norm(B @ A @ P.P - P.P) <= 1e-10
    assert np.linalg.norm(A @ B - P.P) <= 1e-10
    # Zero on the weak complement.
    assert np.linalg.norm(B @ (np.eye(g.n) - P.P)) <= 1e-10


def test_pinv_on_range_rejects_leaky_operator(g, rng):
    P = random_projection(rng, g, 2)
    A = random_complex(rng, g.n, g.n)
    with pytest.raises(ValueError):
        pinv_on_range(P.P, A, g)


def test_pinv_on_range_flags_rank_deficiency(g, rng):
    P = random_projection(rng, g, 2)
    A = 1e-14 * P.P
    with pytest.raises(RankDeficiency):
        pinv_on_range(P.P, A, g)


def test_pinv_on_range_zero_rank(g):
    Z = np.zeros((g.n, g.n))
    out = pinv_on_range(Z, np.eye(g.n), g)
    assert np.linalg.norm(out) == 0.0
