"""Symmetric two-qubit Werner states ``rho_w = (1 - a)/3 * 1 + a |1,1><1,1|``.

Matrices are in the Fock order ``|j=0>, |j=1>, |j=2>`` = ``|0,2>, |1,1>, |2,0>``
(j particles in mode a).  The interferometer is ``exp(-i theta J_y)``.

With the right-handed ``J_y`` of :mod:`qmet.spinrep` the eigenstates of the
symmetric logarithmic derivative are built from
``psi_-- = (|0,2> - |2,0>)/sqrt(2)`` and ``psi_+ = (|0,2> + |2,0>)/sqrt(2)``;
the map :func:`disentangling_map` then sends them to ``|0,2>, |1,1>, |2,0>``.
"""
from __future__ import annotations

import numpy as np

from . import fisher, linalg, spinrep
from .errors import AlphaOutOfRangeError, AlphaZeroError, DegenerateDenominatorError

N = 2
DENOM_EPS = 1e-14

_KET = np.eye(3, dtype=np.complex128)
KET_02, KET_11, KET_20 = _KET[0], _KET[1], _KET[2]
PSI_MINUS = (KET_02 - KET_20) / np.sqrt(2)
PSI_PLUS = (KET_02 + KET_20) / np.sqrt(2)


def _alpha(alpha: float) -> float:
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise AlphaOutOfRangeError(f"alpha must lie in [0, 1], got {alpha!r}")
    return a


def werner_density(alpha: float) -> np.ndarray:
    a = _alpha(alpha)
    lo = (1.0 - a) / 3.0
    return np.diag([lo, (1.0 + 2.0 * a) / 3.0, lo]).astype(np.complex128)


def werner_state(alpha: float, theta: float) -> np.ndarray:
    """``rho_w(theta) = exp(-i theta J_y) rho_w exp(i theta J_y)``."""
    u = spinrep.rotation_matrix(N, "y", theta)
    return u @ werner_density(alpha) @ linalg.dagger(u)


def werner_derivative(alpha: float, theta: float) -> np.ndarray:
    jy = spinrep.build_operators(N).jy
    return fisher.unitary_derivative(werner_state(alpha, theta), jy)


def werner_qfi(alpha: float, axis="y") -> float:
    """``12 a^2 (n_x^2 + n_y^2) / (2 + a)``; the z part of the generator drops out."""
    a = _alpha(alpha)
    n = spinrep.unit_axis(axis)
    return 12.0 * a * a * (n[0] ** 2 + n[1] ** 2) / (2.0 + a)


def is_usefully_entangled(alpha: float) -> bool:
    """True when the QFI beats the shot-noise value N = 2 (alpha > 2/3)."""
    return werner_qfi(alpha) / N > 1.0


def werner_probabilities(alpha: float, theta: float) -> np.ndarray:
    """Fock-count probabilities ``(p0, p1, p2)`` of ``rho_w(theta)``."""
    a = _alpha(alpha)
    base = (1.0 - a) / 3.0
    s2 = np.sin(theta) ** 2
    edge = base + 0.5 * a * s2
    return np.array([edge, base + a * np.cos(theta) ** 2, edge])


def werner_imbalance_cfi(alpha: float, theta: float) -> float:
    """Fisher information of the population-imbalance (Fock count) measurement::

        36 a^2 sin^2(2 theta) / ([4 - a(1 + 3 cos 2theta)] [2 + a(1 + 3 cos 2theta)])

    At ``alpha = 1`` the expression reduces to 4 for every theta; that value
    is returned directly, which also fills the removable 0/0 points at
    ``theta = 0, pi/2 (mod pi)``.
    """
    a = _alpha(alpha)
    if a == 1.0:
        return 4.0
    k = 1.0 + 3.0 * np.cos(2.0 * theta)
    denom = (4.0 - a * k) * (2.0 + a * k)
    if denom < DENOM_EPS:
        raise DegenerateDenominatorError(f"denominator {denom!r} at alpha={a}, theta={theta}")
    return float(36.0 * a * a * np.sin(2.0 * theta) ** 2 / denom)


def werner_sld(alpha: float, theta: float) -> np.ndarray:
    """Closed-form SLD, ``-6i/(2 + a) [J_y, rho_w(theta)]``."""
    a = _alpha(alpha)
    jy = spinrep.build_operators(N).jy
    return -6j / (2.0 + a) * linalg.commutator(jy, werner_state(a, theta))


def sld_matrix_display(alpha: float, theta: float) -> np.ndarray:
    """The SLD as the explicit 3x3 trigonometric matrix.

    Rows/columns run over ``|2,0>, |1,1>, |0,2>``, i.e. the reverse of the
    package's Fock order; use ``M[::-1, ::-1]`` to compare with
    :func:`werner_sld`.
    """
    a = _alpha(alpha)
    s, c = np.sin(2 * theta), np.cos(2 * theta)
    r2 = np.sqrt(2.0)
    m = np.array(
        [
            [s / r2, -c, -s / r2],
            [-c, -r2 * s, c],
            [-s / r2, c, s / r2],
        ]
    )
    return 6.0 * a / (r2 * (2.0 + a)) * m


def sld_eigenvalues(alpha: float) -> np.ndarray:
    """Eigenvalues of the SLD for (Psi_1, Psi_2, Psi_3)."""
    a = _alpha(alpha)
    lam = 6.0 * a / (2.0 + a)
    return np.array([-lam, lam, 0.0])


def sld_eigensystem(alpha: float, theta: float):
    """Closed-form SLD eigenstates ``(Psi_1, Psi_2, Psi_3)`` at phase `theta`.

    Psi_1 and Psi_2 mix ``psi_-`` with the twin-Fock ket ``|1,1>``; Psi_3 is
    ``psi_+`` for every theta.  Their eigenvalues are
    ``-6a/(2+a), +6a/(2+a), 0``.
    """
    a = _alpha(alpha)
    if a == 0.0:
        raise AlphaZeroError("the SLD vanishes at alpha = 0; its eigenbasis is undefined")
    c, s = np.cos(theta), np.sin(theta)
    r2 = np.sqrt(2.0)
    psi1 = (c - s) / r2 * PSI_MINUS - (c + s) / r2 * KET_11
    psi2 = (c + s) / r2 * PSI_MINUS + (c - s) / r2 * KET_11
    return (
        spinrep.SymmetricState(psi1),
        spinrep.SymmetricState(psi2),
        spinrep.SymmetricState(PSI_PLUS),
    )


def optimal_povm(alpha: float, theta: float) -> fisher.PovmSet:
    return fisher.PovmSet.from_vectors(sld_eigensystem(alpha, theta))


def fock_povm() -> fisher.PovmSet:
    return fisher.PovmSet.computational(N + 1)


def disentangling_map() -> np.ndarray:
    """``V = exp(i pi/2 (J_x J_y + J_y J_x)/2) exp(i pi/4 J_y)``.

    At theta = 0 it maps Psi_1, Psi_2, Psi_3 onto ``|0,2>, |1,1>, |2,0>``.
    """
    ops = spinrep.build_operators(N)
    sym = 0.5 * (ops.jx @ ops.jy + ops.jy @ ops.jx)
    return linalg.evolve_unitary(sym, -np.pi / 2) @ linalg.evolve_unitary(ops.jy, -np.pi / 4)


def fig2_table(alphas, thetas) -> np.ndarray:
    """Columns: theta, then (imbalance CFI, QFI) for each alpha."""
    thetas = np.asarray(thetas, dtype=float)
    cols = [thetas]
    for a in alphas:
        cols.append(np.array([werner_imbalance_cfi(a, t) for t in thetas]))
        cols.append(np.full(thetas.shape, werner_qfi(a)))
    return np.column_stack(cols)
