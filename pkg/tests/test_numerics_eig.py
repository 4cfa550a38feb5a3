import numpy as np
import pytest

from degreelab.numerics import (InputError, jacobi_eigenvalues,
                                lapack_eigenvalues, min_eigenvalue)


def test_identity():
    assert min_eigenvalue(np.eye(3)) == pytest.approx(1.0, abs=1e-12)


def test_diagonal():
    assert min_eigenvalue(np.diag([1.0, 2.0])) == pytest.approx(1.0, abs=1e-12)


def test_swap_matrix():
    assert min_eigenvalue(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0, abs=1e-12)


def test_gram_matrices_are_psd():
    rng = np.random.RandomState(7)
    for _ in range(20):
        G = rng.randn(6, 4)
        M = G.T @ G
        assert min_eigenvalue(M) >= -1e-10 * np.linalg.norm(M)


def test_jacobi_matches_lapack():
    rng = np.random.RandomState(11)
    for n in (2, 5, 17, 40):
        A = rng.randn(n, n)
        A = 0.5 * (A + A.T)
        ours = jacobi_eigenvalues(A)
        ref = lapack_eigenvalues(A)
        assert np.allclose(ours, ref, atol=1e-10 * max(1.0, np.linalg.norm(A)))


def test_rejects_asymmetric():
    with pytest.raises(InputError):
        min_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InputError):
        min_eigenvalue(np.zeros((2, 3)))
