"""Single qubit rotated about y: Bloch vectors, Fisher information, optimal POVMs.

The interferometer is ``U(theta) = exp(-i theta sigma_y / 2)``, which turns
the Bloch vector about the y axis::

    s_x = s_x,in cos(theta) + s_z,in sin(theta)
    s_z = s_z,in cos(theta) - s_x,in sin(theta)

POVM elements are written ``gamma (1 + q . sigma)`` with ``|q| <= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fisher
from .errors import NotPovmError, OutOfPlaneError, PoleAtUnitSzError, ZeroStateError

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
IDENTITY = np.eye(2, dtype=np.complex128)
GENERATOR = PAULI[1] / 2

LENGTH_TOL = 1e-12
PURE_TOL = 1e-10
PLANE_TOL = 1e-10
COMPLETENESS_TOL = 1e-10


def _vec3(v) -> np.ndarray:
    a = np.asarray(getattr(v, "s", v), dtype=float).ravel()
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise ValueError(f"expected a finite real 3-vector, got {v!r}")
    return a


def pauli_dot(v) -> np.ndarray:
    v = _vec3(v)
    return v[0] * PAULI[0] + v[1] * PAULI[1] + v[2] * PAULI[2]


@dataclass(frozen=True)
class BlochVector:
    s: np.ndarray

    def __post_init__(self):
        s = _vec3(self.s).copy()
        if np.linalg.norm(s) > 1.0 + LENGTH_TOL:
            raise ValueError(f"Bloch vector longer than 1: |s| = {np.linalg.norm(s)!r}")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.s))

    @property
    def pure(self) -> bool:
        return abs(self.length - 1.0) < PURE_TOL

    def density_matrix(self) -> np.ndarray:
        return 0.5 * (IDENTITY + pauli_dot(self.s))

    def __iter__(self):
        return iter(self.s)


def _bloch(s) -> BlochVector:
    return s if isinstance(s, BlochVector) else BlochVector(s)


@dataclass(frozen=True)
class QubitPovmElement:
    gamma: float
    q: np.ndarray

    def __post_init__(self):
        q = _vec3(self.q).copy()
        if self.gamma < 0:
            raise ValueError("POVM weight must be non-negative")
        if np.linalg.norm(q) > 1.0 + LENGTH_TOL:
            raise ValueError("POVM direction longer than 1")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gamma", float(self.gamma))

    def matrix(self) -> np.ndarray:
        return self.gamma * (IDENTITY + pauli_dot(self.q))


@dataclass(frozen=True)
class QubitPovmSet:
    """Finite qubit POVM: ``sum gamma_i = 1`` and ``sum gamma_i q_i = 0``."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("empty POVM")
        wsum = sum(e.gamma for e in elems)
        qsum = sum(e.gamma * e.q for e in elems)
        if abs(wsum - 1.0) > COMPLETENESS_TOL or np.max(np.abs(qsum)) > COMPLETENESS_TOL:
            raise NotPovmError("qubit POVM violates completeness")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def projective(cls, direction) -> "QubitPovmSet":
        """Projectors onto the Bloch directions ``+n`` and ``-n``."""
        n = _vec3(direction)
        n = n / np.linalg.norm(n)
        return cls((QubitPovmElement(0.5, n), QubitPovmElement(0.5, -n)))

    def to_povm(self) -> fisher.PovmSet:
        return fisher.PovmSet(tuple(e.matrix() for e in self.elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


UNINFORMATIVE = QubitPovmSet((QubitPovmElement(1.0, np.zeros(3)),))


def rotate_bloch(s_in, theta: float) -> BlochVector:
    sx, sy, sz = _bloch(s_in).s
    c, s = np.cos(theta), np.sin(theta)
    return BlochVector(np.array([sx * c + sz * s, sy, sz * c - sx * s]))


def bloch_derivative(s) -> np.ndarray:
    """``ds/dtheta`` of the rotated vector, which equals ``s_perp``."""
    sx, _, sz = _bloch(s).s
    return np.array([sz, 0.0, -sx])


def qubit_qfi(s) -> float:
    sx, _, sz = _bloch(s).s
    return float(sx * sx + sz * sz)


def qubit_sld(s) -> np.ndarray:
    """The vector ``s_perp = (s_z, 0, -s_x)``; the SLD matrix is ``s_perp . sigma``."""
    return bloch_derivative(s)


def sld_matrix(s) -> np.ndarray:
    return pauli_dot(qubit_sld(s))


def povm_probability(s, e: QubitPovmElement) -> float:
    return float(e.gamma * (1.0 + e.q @ _bloch(s).s))


def qubit_cfi(s_in, theta: float, povm: QubitPovmSet) -> float:
    """Classical Fisher information of `povm` on the state rotated by `theta`.

    The derivative is analytic, ``dp_i = gamma_i q_i . s_perp``.
    """
    s = rotate_bloch(s_in, theta)
    ds = bloch_derivative(s)
    p = [povm_probability(s, e) for e in povm]
    dp = [e.gamma * float(e.q @ ds) for e in povm]
    return fisher.fisher_from_probabilities(p, dp)


def in_plane_frame(s):
    """Unit vectors ``(e_s, e_perp)`` spanning the x-z plane of a vector with s_y = 0."""
    v = _bloch(s).s
    if abs(v[1]) > PLANE_TOL:
        raise OutOfPlaneError(f"s_y = {v[1]!r}; optimal POVMs are derived for s_y = 0")
    r = float(np.linalg.norm(v))
    if r < LENGTH_TOL:
        raise ZeroStateError("maximally mixed state has no preferred frame")
    return v / r, bloch_derivative(v) / r


@dataclass(frozen=True)
class OptimalFamily:
    """Directions q of optimal qubit POVM elements for one state.

    ``kind == "circle"`` (pure state): every unit q in the (e_s, e_perp)
    plane.  ``kind == "pair"`` (mixed state): only ``q = +-e_perp``.
    """

    kind: str
    e_s: np.ndarray
    e_perp: np.ndarray

    @property
    def vectors(self) -> tuple:
        if self.kind != "pair":
            raise AttributeError("a circle family has no finite vector list; use direction(phi)")
        return (self.e_perp, -self.e_perp)

    def direction(self, phi: float) -> np.ndarray:
        """``cos(phi) e_s + sin(phi) e_perp``."""
        return np.cos(phi) * self.e_s + np.sin(phi) * self.e_perp

    def contains(self, q, tol: float = 1e-10) -> bool:
        q = _vec3(q)
        if self.kind == "pair":
            return any(np.max(np.abs(q - v)) < tol for v in self.vectors)
        q1, q2 = q @ self.e_s, q @ self.e_perp
        residue = q - q1 * self.e_s - q2 * self.e_perp
        return bool(np.max(np.abs(residue)) < tol and abs(q1 * q1 + q2 * q2 - 1.0) < tol)


def optimal_q_solutions(s) -> OptimalFamily:
    b = _bloch(s)
    e_s, e_perp = in_plane_frame(b)
    return OptimalFamily("circle" if b.pure else "pair", e_s, e_perp)


def element_residual(s, e: QubitPovmElement):
    """``(lambda, residual)`` of one element under the general optimality check."""
    b = _bloch(s)
    return fisher.check_optimal(e.matrix(), b.density_matrix(), sld_matrix(b))


def imbalance_cfi_qubit(s) -> float:
    """Fisher information of the two-arm population measurement, ``s_x^2 / (1 - s_z^2)``."""
    sx, _, sz = _bloch(s).s
    if abs(sz) >= 1.0 - 1e-12:
        raise PoleAtUnitSzError("one arm has zero probability (|s_z| = 1)")
    return float(sx * sx / (1.0 - sz * sz))


IMBALANCE_POVM = QubitPovmSet.projective((0.0, 0.0, 1.0))
