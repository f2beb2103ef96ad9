"""Symmetric (bosonic) two-mode subspace of N qubits.

Basis kets ``|j>``, ``j = 0..N``, hold ``j`` particles in mode ``a`` and
``N - j`` in mode ``b``.  The collective spin operators act on this
``(N+1)``-dimensional space with ``J_z = diag(j - N/2)`` and the ladder
coefficients ``alpha_j = sqrt((j + 1)(N - j))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, isfinite

import numpy as np

from . import linalg
from .errors import BadAxisError, BadFockIndexError, OddNForTwinFockError

NORM_TOL = 1e-12
AXIS_TOL = 1e-10

AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class SymmetricState:
    """Normalized amplitudes ``C_j`` over the Fock kets ``|j>``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size < 2:
            raise ValueError("a symmetric state needs at least N = 1 (two amplitudes)")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite amplitudes")
        norm = float(np.sum(np.abs(c) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |C_j|^2 = {norm!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def normalized(cls, coeffs) -> "SymmetricState":
        c = np.asarray(coeffs, dtype=np.complex128)
        return cls(c / np.linalg.norm(c))

    @property
    def n_particles(self) -> int:
        return self.coeffs.size - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.coeffs, np.conj(self.coeffs))


@dataclass(frozen=True)
class CollectiveOperators:
    n_particles: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    def along(self, axis) -> np.ndarray:
        """Generator ``n . J`` for a unit axis (or one of 'x', 'y', 'z')."""
        n = unit_axis(axis)
        return n[0] * self.jx + n[1] * self.jy + n[2] * self.jz


def unit_axis(axis) -> np.ndarray:
    if isinstance(axis, str):
        try:
            return np.array(AXES[axis.lower()])
        except KeyError:
            raise BadAxisError(f"unknown axis {axis!r}") from None
    n = np.asarray(axis, dtype=float).ravel()
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise BadAxisError(f"axis must be a real 3-vector, got {axis!r}")
    if abs(np.linalg.norm(n) - 1.0) > AXIS_TOL:
        raise BadAxisError(f"axis must have unit length, |n| = {np.linalg.norm(n)!r}")
    return n


@lru_cache(maxsize=None)
def build_operators(n: int) -> CollectiveOperators:
    """Collective ``J_x, J_y, J_z`` for N particles in the Fock basis.

    ``(J_x)_{j+1,j} = (J_x)_{j,j+1} = alpha_j / 2`` and
    ``(J_y)_{j+1,j} = -(J_y)_{j,j+1} = alpha_j / (2i)``, which gives
    ``[J_x, J_y] = i J_z``.  Results are cached and read-only.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"N must be a positive integer, got {n!r}")
    n = int(n)
    j = np.arange(n)
    alpha = np.sqrt((j + 1.0) * (n - j))
    jx = np.zeros((n + 1, n + 1), dtype=np.complex128)
    jy = np.zeros_like(jx)
    jx[j + 1, j] = jx[j, j + 1] = alpha / 2
    jy[j + 1, j] = alpha / 2j
    jy[j, j + 1] = -alpha / 2j
    jz = np.diag(np.arange(n + 1) - n / 2).astype(np.complex128)
    for m in (jx, jy, jz):
        m.setflags(write=False)
    return CollectiveOperators(n, jx, jy, jz)


@lru_cache(maxsize=256)
def _generator_eig(n: int, axis: tuple) -> linalg.HermitianEigen:
    return linalg.hermitian_eig(build_operators(n).along(axis))


def rotation_matrix(n: int, axis, theta: float) -> np.ndarray:
    """``exp(-i theta n.J)`` on the (N+1)-dimensional space."""
    ax = tuple(float(v) for v in unit_axis(axis))
    return linalg.evolve_unitary(None, theta, eig=_generator_eig(int(n), ax))


def rotate_state(psi: SymmetricState, axis, theta: float) -> SymmetricState:
    out = rotation_matrix(psi.n_particles, axis, theta) @ psi.coeffs
    # exact unitarity only up to round-off; renormalize within the invariant
    return SymmetricState(out / np.linalg.norm(out))


def _fix_phase(c: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    nz = np.flatnonzero(np.abs(c) > tol)
    if nz.size == 0:
        return c
    ph = c[nz[0]] / abs(c[nz[0]])
    return c / ph


def fock_state(n: int, j: int) -> SymmetricState:
    if int(j) != j or not 0 <= j <= n:
        raise BadFockIndexError(f"Fock index must satisfy 0 <= j <= N, got j={j!r}, N={n}")
    c = np.zeros(n + 1, dtype=np.complex128)
    c[int(j)] = 1.0
    return SymmetricState(c)


def noon_state(n: int) -> SymmetricState:
    c = np.zeros(n + 1, dtype=np.complex128)
    c[0] = c[n] = 1 / np.sqrt(2)
    return SymmetricState(c)


def twin_fock_state(n: int) -> SymmetricState:
    if n % 2:
        raise OddNForTwinFockError(f"twin-Fock needs even N, got {n}")
    return fock_state(n, n // 2)


def coherent_spin_state(n: int, polar: float = np.pi / 2, azimuth: float = 0.0) -> SymmetricState:
    """Spin coherent state pointing along (polar, azimuth); the default is +x.

    ``polar = 0`` is ``|j = N>`` (all particles in mode a).
    """
    j = np.arange(n + 1)
    binom = np.array([comb(n, int(k)) for k in j], dtype=float)
    c = np.sqrt(binom) * np.cos(polar / 2) ** j * np.sin(polar / 2) ** (n - j)
    c = c * np.exp(1j * azimuth * (n - j))
    return SymmetricState(_fix_phase(c / np.linalg.norm(c)))


def bose_hubbard_ground(n: int, u_over_j: float) -> SymmetricState:
    """Ground state of ``H = -2 J_x + (U/J) J_z^2`` (tunnelling set to 1).

    The tunnelling term makes the off-diagonal part of H non-positive and
    irreducible, so the ground state is non-degenerate and, after fixing
    the phase, has strictly positive amplitudes.
    """
    u = float(u_over_j)
    if not isfinite(u):
        raise ValueError("u_over_j must be finite (tunnelling must be non-zero)")
    ops = build_operators(n)
    h = -2.0 * ops.jx + u * (ops.jz @ ops.jz)
    ground = linalg.hermitian_eig(h).eigenvectors[:, 0]
    return SymmetricState(_fix_phase(ground / np.linalg.norm(ground)))


def state_factory(kind: str, n: int, **params) -> SymmetricState:
    """Build a named input state.

    kind is one of ``fock`` (needs ``j``), ``noon``, ``twin_fock``,
    ``bose_hubbard_ground`` (needs ``u_over_j``) or ``coherent``.
    """
    kind = kind.lower().replace("-", "_")
    if kind == "fock":
        return fock_state(n, params["j"])
    if kind == "noon":
        return noon_state(n)
    if kind == "twin_fock":
        return twin_fock_state(n)
    if kind in ("bose_hubbard_ground", "bh"):
        return bose_hubbard_ground(n, params["u_over_j"])
    if kind == "coherent":
        return coherent_spin_state(n, **params)
    raise ValueError(f"unknown state kind {kind!r}")
