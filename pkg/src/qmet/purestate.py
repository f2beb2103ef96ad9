"""Pure N-qubit states: where the phase information sits.

For ``|psi> = sum_j C_j |j>`` and a rotation ``exp(-i theta J_k)`` define
``eta_j = <j|J_k|psi> / C_j``.  Then ``d|C_j|^2/dtheta = 2 |C_j|^2 Im eta_j``
and the local phase of ``C_j`` moves at rate ``-Re eta_j``.  The QFI
``4 Var(J_k)`` splits into

* a probability part ``4 sum |C_j|^2 (Im eta_j)^2``, which is the Fisher
  information of counting particles in each mode, and
* a phase part ``4 Var_p(Re eta)`` which no mode-resolved count can see.

Counting is optimal exactly when the phase part vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spinrep
from .errors import BreakdownMismatchError, PreconditionViolatedError

AMPLITUDE_EPS = 1e-12
BREAKDOWN_TOL = 1e-8
OPTIMAL_TOL = 1e-10
FARFIELD_TOL = 1e-10


@dataclass(frozen=True)
class EtaCoefficients:
    axis: str
    values: np.ndarray
    defined: np.ndarray


@dataclass(frozen=True)
class FisherBreakdown:
    prob_term: float
    phase_term: float
    qfi: float


def _axis_name(axis) -> str:
    if isinstance(axis, str) and axis.lower() in spinrep.AXES:
        return axis.lower()
    raise spinrep.BadAxisError(f"axis must be 'x', 'y' or 'z', got {axis!r}")


def _generator(psi: spinrep.SymmetricState, axis: str) -> np.ndarray:
    ops = spinrep.build_operators(psi.n_particles)
    return {"x": ops.jx, "y": ops.jy, "z": ops.jz}[axis]


def eta(psi: spinrep.SymmetricState, axis) -> EtaCoefficients:
    """``eta_j = (J_k psi)_j / C_j``; entries with ``|C_j| <= 1e-12`` are masked (set to 0)."""
    axis = _axis_name(axis)
    c = psi.coeffs
    jc = _generator(psi, axis) @ c
    defined = np.abs(c) > AMPLITUDE_EPS
    values = np.zeros_like(c)
    values[defined] = jc[defined] / c[defined]
    if axis == "z":
        n = psi.n_particles
        values = np.arange(n + 1) - n / 2 + 0j
        defined = np.ones(n + 1, dtype=bool)
    return EtaCoefficients(axis, values, defined)


def variance(psi: spinrep.SymmetricState, axis) -> float:
    j = _generator(psi, _axis_name(axis))
    c = psi.coeffs
    jc = j @ c
    mean = np.real(np.vdot(c, jc))
    return float(max(np.real(np.vdot(jc, jc)) - mean * mean, 0.0))


def qfi_breakdown(psi: spinrep.SymmetricState, axis) -> FisherBreakdown:
    """Split the QFI into probability and phase parts.

    A masked amplitude (``C_j = 0`` but ``(J_k psi)_j != 0``) grows linearly
    in theta, so its probability grows quadratically; its Fisher term
    ``(dp_j)^2 / p_j`` tends to ``4 |(J_k psi)_j|^2``, which is what is
    added to the probability part.  It carries no weight in the phase part.

    Raises
    ------
    BreakdownMismatchError
        If the two parts do not add up to ``4 Var(J_k)`` within 1e-8.
    """
    axis = _axis_name(axis)
    c = psi.coeffs
    jc = _generator(psi, axis) @ c
    p = np.abs(c) ** 2
    defined = np.abs(c) > AMPLITUDE_EPS

    # (Im eta_j)^2 |C_j|^2 = (Im(conj(C_j) (J psi)_j))^2 / |C_j|^2
    cross = np.conj(c[defined]) * jc[defined]
    if axis == "z":
        cross = cross.real + 0j  # J_z is real diagonal; drop round-off
    prob = 4.0 * np.sum(np.imag(cross) ** 2 / p[defined])
    prob += 4.0 * np.sum(np.abs(jc[~defined]) ** 2)

    re_eta = np.real(cross) / p[defined]
    w = p[defined]
    phase = 4.0 * (np.sum(w * re_eta**2) - np.sum(w * re_eta) ** 2)
    phase = max(phase, 0.0)

    mean = np.real(np.vdot(c, jc))
    qfi = 4.0 * max(np.real(np.vdot(jc, jc)) - mean * mean, 0.0)
    if abs(prob + phase - qfi) > BREAKDOWN_TOL * max(1.0, qfi):
        raise BreakdownMismatchError(
            f"prob {prob!r} + phase {phase!r} != 4 Var(J_{axis}) = {qfi!r}"
        )
    return FisherBreakdown(float(prob), float(phase), float(qfi))


def cfi_mode_counting(psi: spinrep.SymmetricState, axis) -> float:
    """Fisher information of counting particles per mode on the output state `psi`.

    This is also the Fisher information of the full N-body position
    distribution when the two modes are spatially separated.
    """
    return qfi_breakdown(psi, axis).prob_term


def counting_is_optimal(psi: spinrep.SymmetricState, axis):
    """``(optimal, deficit)`` where deficit is the phase part of the QFI."""
    deficit = qfi_breakdown(psi, axis).phase_term
    return deficit < OPTIMAL_TOL, deficit


def farfield_cfi(psi0: spinrep.SymmetricState, theta: float = 0.0) -> float:
    """N-body Fisher information after a z phase imprint and far-field expansion.

    Only valid for real, mirror-symmetric inputs (``C_j = C_{N-j}``); the
    result is then ``4 Var(J_z)``, which does not depend on `theta`.
    """
    c = psi0.coeffs
    if np.max(np.abs(np.imag(c))) > FARFIELD_TOL:
        raise PreconditionViolatedError("input amplitudes must be real")
    if np.max(np.abs(c - c[::-1])) > FARFIELD_TOL:
        raise PreconditionViolatedError("input amplitudes must satisfy C_j = C_(N-j)")
    out = spinrep.rotate_state(psi0, "z", theta)
    return 4.0 * variance(out, "z")
