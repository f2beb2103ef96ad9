"""Density-matrix level Fisher information.

All functions take the state ``rho`` and its exact phase derivative
``drho``; for a unitary family ``rho(theta) = exp(-i theta h) rho0 exp(i theta h)``
use :func:`unitary_derivative`.  Nothing here differentiates numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    NotDensityMatrixError,
    NotHermitianError,
    NotHermitianGeneratorError,
    NotPovmError,
    SupportMismatchError,
    ZeroProbabilityWithNonzeroDerivativeError,
)

STATE_TOL = 1e-10
SUPPORT_EPS = 1e-12
SUPPORT_MISMATCH_TOL = 1e-8
PROB_EPS = 1e-14
DERIV_EPS = 1e-12
OPTIMAL_TOL = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m, eig = _validated_state(self.mat)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "_eig", eig)

    @property
    def eig(self) -> linalg.HermitianEigen:
        return self._eig

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        v = np.asarray(getattr(psi, "coeffs", psi), dtype=np.complex128).ravel()
        return cls(np.outer(v, np.conj(v)))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class PovmSet:
    """Positive operators that sum to the identity."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(linalg.as_matrix(e) for e in self.elements)
        if not elems:
            raise NotPovmError("a POVM needs at least one element")
        d = elems[0].shape[0]
        if any(e.shape != (d, d) for e in elems):
            raise DimensionMismatchError("POVM elements differ in dimension")
        for i, e in enumerate(elems):
            if not linalg.is_psd(e, STATE_TOL):
                raise NotPovmError(f"element {i} is not positive semidefinite")
        total = sum(elems)
        if np.max(np.abs(total - np.eye(d))) > STATE_TOL:
            raise NotPovmError("POVM elements do not sum to the identity")
        for e in elems:
            e.setflags(write=False)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_vectors(cls, vectors: Sequence) -> "PovmSet":
        """Rank-one projectors onto the given (orthonormal) vectors."""
        mats = []
        for v in vectors:
            v = np.asarray(getattr(v, "coeffs", v), dtype=np.complex128).ravel()
            mats.append(np.outer(v, np.conj(v)))
        return cls(tuple(mats))

    @classmethod
    def computational(cls, dim: int) -> "PovmSet":
        return cls.from_vectors(np.eye(dim))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _validated_state(mat):
    m = linalg.as_matrix(mat)
    if not linalg.is_hermitian(m, STATE_TOL):
        raise NotDensityMatrixError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > STATE_TOL:
        raise NotDensityMatrixError(f"trace is {np.trace(m).real!r}, expected 1")
    m = 0.5 * (m + linalg.dagger(m))
    eig = linalg.hermitian_eig(m)
    if eig.eigenvalues[0] < -STATE_TOL:
        raise NotDensityMatrixError("density matrix has a negative eigenvalue")
    return m, eig


def _rho(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return _validated_state(rho)[0]


def _rho_eig(rho):
    if isinstance(rho, DensityMatrix):
        return rho.mat, rho.eig
    return _validated_state(rho)


def _elements(povm) -> tuple:
    if isinstance(povm, PovmSet):
        return povm.elements
    return PovmSet(tuple(povm)).elements


def unitary_derivative(rho, h) -> np.ndarray:
    """``d rho / d theta = -i [h, rho]`` for the family ``exp(-i theta h)``."""
    r = rho.mat if isinstance(rho, DensityMatrix) else rho
    return -1j * linalg.commutator(h, r)


def qfi_mixed(rho, h) -> float:
    """Quantum Fisher information of ``rho`` for the unitary generator `h`.

    Uses the eigen-decomposition ``rho = sum p_k |k><k|``::

        F_Q = 2 sum_{j,k} (p_j - p_k)^2 / (p_j + p_k) |<j|h|k>|^2

    with pairs ``p_j + p_k <= 1e-12`` skipped.
    """
    r, eig = _rho_eig(rho)
    h = linalg.as_matrix(h)
    if h.shape != r.shape:
        raise DimensionMismatchError("generator and state differ in dimension")
    if not linalg.is_hermitian(h, STATE_TOL):
        raise NotHermitianGeneratorError("generator is not Hermitian")
    p = eig.eigenvalues
    v = eig.eigenvectors
    hk = linalg.dagger(v) @ h @ v
    psum = p[:, None] + p[None, :]
    pdiff = p[:, None] - p[None, :]
    mask = psum > SUPPORT_EPS
    terms = np.zeros_like(psum)
    terms[mask] = pdiff[mask] ** 2 / psum[mask] * np.abs(hk[mask]) ** 2
    return float(max(2.0 * terms.sum(), 0.0))


def sld(rho, drho) -> np.ndarray:
    """Symmetric logarithmic derivative L with ``(rho L + L rho)/2 = drho``.

    In the eigenbasis of rho, ``L_jk = 2 drho_jk / (p_j + p_k)``; entries
    with ``p_j + p_k <= 1e-12`` are set to zero, which requires the
    corresponding block of ``drho`` to vanish.

    Raises
    ------
    SupportMismatchError
        If ``drho`` has weight above 1e-8 where rho has none.
    """
    r, eig = _rho_eig(rho)
    d = linalg.as_matrix(drho)
    if d.shape != r.shape:
        raise DimensionMismatchError("drho and rho differ in dimension")
    if not linalg.is_hermitian(d, STATE_TOL):
        raise NotHermitianError("drho is not Hermitian")
    if abs(np.trace(d)) > STATE_TOL:
        raise ValueError("drho must be traceless")
    p = eig.eigenvalues
    v = eig.eigenvectors
    dk = linalg.dagger(v) @ d @ v
    psum = p[:, None] + p[None, :]
    mask = psum > SUPPORT_EPS
    if np.any(np.abs(dk[~mask]) > SUPPORT_MISMATCH_TOL):
        raise SupportMismatchError("drho has weight outside the support of rho")
    lk = np.zeros_like(dk)
    lk[mask] = 2.0 * dk[mask] / psum[mask]
    out = v @ lk @ linalg.dagger(v)
    return 0.5 * (out + linalg.dagger(out))


def outcome_probabilities(rho, povm) -> np.ndarray:
    r = _rho(rho)
    return np.array([np.real(np.trace(r @ e)) for e in _elements(povm)])


def fisher_from_probabilities(p, dp) -> float:
    """Classical Fisher information ``sum dp_i^2 / p_i``.

    Outcomes with ``p_i < 1e-14`` contribute 0 when ``|dp_i| < 1e-12``
    (the value at an isolated zero of a smooth non-negative function) and
    raise otherwise.
    """
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    small = p < PROB_EPS
    if np.any(small & (np.abs(dp) >= DERIV_EPS)):
        raise ZeroProbabilityWithNonzeroDerivativeError(
            "an outcome has vanishing probability but non-zero derivative"
        )
    keep = ~small
    return float(np.sum(dp[keep] ** 2 / p[keep]))


def cfi_povm(rho, drho, povm) -> float:
    """Classical Fisher information of the measurement `povm` on ``rho(theta)``."""
    r = _rho(rho)
    d = linalg.as_matrix(drho)
    elems = _elements(povm)
    if d.shape != r.shape or elems[0].shape != r.shape:
        raise DimensionMismatchError("state, derivative and POVM differ in dimension")
    p = [np.real(np.trace(r @ e)) for e in elems]
    dp = [np.real(np.trace(d @ e)) for e in elems]
    return fisher_from_probabilities(p, dp)


def check_optimal(e, rho, L):
    """Test one POVM element against ``E rho = lambda E L rho``.

    The condition is checked in its reciprocal form ``E L rho = mu E rho``
    with real ``mu`` fitted by least squares, which also covers elements
    on which L has a zero eigenvalue (``mu = 0``).  The residual is

        ||E L rho - mu E rho||_F / max(||E L rho||_F, ||L|| ||E rho||_F)

    i.e. the sine of the angle between the two matrices, damped when
    ``E L rho`` is negligible.  An element with ``E rho = 0`` but
    ``E L rho != 0`` gets residual 1.

    Returns
    -------
    (lam, residual)
        ``lam = 1/mu`` (``inf`` when ``mu = 0``).
    """
    e = linalg.as_matrix(e)
    r = _rho(rho)
    L = linalg.as_matrix(L)
    x = e @ r
    y = e @ L @ r
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    scale = max(ny, np.linalg.norm(L, 2) * nx)
    if scale < SUPPORT_EPS:
        return math.inf, 0.0
    mu = float(np.real(np.vdot(x, y)) / nx**2) if nx > SUPPORT_EPS else 0.0
    residual = float(np.linalg.norm(y - mu * x) / scale)
    if abs(mu) * nx <= SUPPORT_EPS * scale:
        mu = 0.0
    lam = math.inf if mu == 0.0 else 1.0 / mu
    return lam, residual


def povm_residuals(povm, rho, L) -> list:
    return [check_optimal(e, rho, L) for e in _elements(povm)]


def is_optimal_povm(povm, rho, L, tol: float = OPTIMAL_TOL) -> bool:
    return all(res < tol for _, res in povm_residuals(povm, rho, L))


def sld_eigenprojectors(L, tol: float = 1e-9) -> PovmSet:
    """Projectors onto the eigenspaces of L (degenerate eigenvalues grouped)."""
    eig = linalg.hermitian_eig(L)
    vals, vecs = eig.eigenvalues, eig.eigenvectors
    groups = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    mats = []
    for g in groups:
        v = vecs[:, g]
        mats.append(v @ linalg.dagger(v))
    return PovmSet(tuple(mats))
