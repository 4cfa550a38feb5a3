"""Symmetric eigenvalues: cyclic Jacobi (jitted) or LAPACK fallback."""

import math

import numpy as np

from .._accel import HAVE_NUMBA, njit

SYM_TOL = 1e-8


class InputError(ValueError):
    pass


@njit(cache=True)
def _jacobi_inplace(A, off_target, max_sweeps):
    n = A.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        off = math.sqrt(2.0 * off)
        if off <= off_target:
            return off
        skip = off_target / max(n, 1) * 1e-3
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
    off = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            off += A[p, q] * A[p, q]
    return math.sqrt(2.0 * off)


def jacobi_eigenvalues(M: np.ndarray, max_sweeps: int = 40) -> np.ndarray:
    """All eigenvalues of symmetric M by cyclic Jacobi rotations, sorted."""
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("matrix must be square")
    n = A.shape[0]
    if n == 0:
        return np.empty(0)
    fro = float(np.linalg.norm(A))
    if fro == 0.0:
        return np.zeros(n)
    off_target = 1e-12 * fro
    _jacobi_inplace(A, off_target, max_sweeps)
    return np.sort(np.diag(A).copy())


def lapack_eigenvalues(M: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(np.asarray(M, dtype=float))


def eigenvalues_symmetric(M: np.ndarray) -> np.ndarray:
    """Sorted spectrum of a symmetric matrix.

    Uses the jitted Jacobi path when numba is enabled, LAPACK otherwise.
    """
    M = _check_symmetric(M)
    if HAVE_NUMBA and M.shape[0] <= 1024:
        return jacobi_eigenvalues(M)
    return lapack_eigenvalues(M)


def min_eigenvalue(M: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(eigenvalues_symmetric(M)[0])


def _check_symmetric(M: np.ndarray) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("matrix must be square")
    if A.size:
        scale = max(1.0, float(np.abs(A).max()))
        dev = float(np.abs(A - A.T).max())
        if dev > SYM_TOL * scale:
            raise InputError(f"matrix not symmetric: max|M-M^T| = {dev}")
    return 0.5 * (A + A.T)
