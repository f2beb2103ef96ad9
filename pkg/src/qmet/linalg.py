"""Small dense complex-matrix kernel.

The eigensolver is a cyclic Jacobi method for complex Hermitian matrices.
It is meant for the dimensions that appear in this package (a few up to
~64) where its accuracy is excellent and its cost irrelevant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, NotHermitianError

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-12
PSD_TOL = 1e-10
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    """Return `a` as a square complex128 array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def is_unitary(a, tol: float = UNITARY_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))) <= tol)


def is_psd(a, tol: float = PSD_TOL) -> bool:
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        return False
    return bool(hermitian_eig(m).eigenvalues[0] >= -tol)


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in ascending order; eigenvectors are the columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _off_norm(a: np.ndarray) -> float:
    # summed directly; ||A||^2 - ||diag||^2 cancels catastrophically
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return math.sqrt(float(np.vdot(off, off).real))


def hermitian_eig(
    a,
    tol: float = HERMITIAN_TOL,
    rel_tol: float = JACOBI_REL_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> HermitianEigen:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation to the resulting 2x2 block.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``rel_tol * ||A||_F``.

    Raises
    ------
    NotHermitianError
        If ``max|A - A^H| > tol``.
    ConvergenceError
        If ``max_sweeps`` sweeps are not enough.
    """
    m = as_matrix(a)
    if np.max(np.abs(m - dagger(m))) > tol:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    n = m.shape[0]
    work = 0.5 * (m + dagger(m))
    if n == 2:
        return _jacobi_2x2(work)
    vecs = np.eye(n, dtype=np.complex128)
    target = rel_tol * np.linalg.norm(work)

    for _ in range(max_sweeps + 1):
        if _off_norm(work) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(work[p, q])
                g = abs(apq)
                if g == 0.0:
                    continue
                ph = apq / g
                cph = ph.conjugate()
                cot2 = (work[q, q].real - work[p, p].real) / (2.0 * g)
                t = 1.0 / (abs(cot2) + math.sqrt(cot2 * cot2 + 1.0))
                if cot2 < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- R^H A R with R = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                cp, cq = work[:, p].copy(), work[:, q].copy()
                work[:, p] = c * cp - s * cph * cq
                work[:, q] = s * cp + c * cph * cq
                rp, rq = work[p, :].copy(), work[q, :].copy()
                work[p, :] = c * rp - s * ph * rq
                work[q, :] = s * rp + c * ph * rq
                work[p, q] = work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vp, vq = vecs[:, p].copy(), vecs[:, q].copy()
                vecs[:, p] = c * vp - s * cph * vq
                vecs[:, q] = s * vp + c * cph * vq
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    vals = np.real(np.diag(work)).copy()
    order = np.argsort(vals, kind="stable")
    return HermitianEigen(vals[order], vecs[:, order])


def _jacobi_2x2(a: np.ndarray) -> HermitianEigen:
    # a single rotation diagonalizes a 2x2 block exactly
    app, aqq = a[0, 0].real, a[1, 1].real
    apq = complex(a[0, 1])
    g = abs(apq)
    if g == 0.0:
        vals, vecs = np.array([app, aqq]), np.eye(2, dtype=np.complex128)
    else:
        cph = (apq / g).conjugate()
        cot2 = (aqq - app) / (2.0 * g)
        t = 1.0 / (abs(cot2) + math.sqrt(cot2 * cot2 + 1.0))
        if cot2 < 0.0:
            t = -t
        c = 1.0 / math.sqrt(t * t + 1.0)
        s = t * c
        vals = np.array([app - t * g, aqq + t * g])
        vecs = np.array([[c, s], [-s * cph, c * cph]], dtype=np.complex128)
    order = np.argsort(vals, kind="stable")
    return HermitianEigen(vals[order], vecs[:, order])


def evolve_unitary(h, theta: float, eig: HermitianEigen | None = None) -> np.ndarray:
    """Return ``exp(-i theta H)`` for Hermitian `h`.

    A precomputed decomposition of `h` may be passed as `eig` to skip the
    diagonalization.
    """
    if eig is None:
        eig = hermitian_eig(h)
    v = eig.eigenvectors
    return (v * np.exp(-1j * theta * eig.eigenvalues)) @ dagger(v)


def commutator(a, b) -> np.ndarray:
    """``AB - BA``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a @ b - b @ a
