"""Monte-Carlo check of the Cramer-Rao bound.

Random numbers come from SplitMix64 used as a counter-based generator:
output ``k`` of stream ``seed`` is ``mix(seed + (k + 1) * GOLDEN)``.  Trial
``t`` of an experiment uses the stream seeded by output ``t`` of the master
stream, so results do not depend on the order in which trials run.
Uniform doubles are ``(z >> 11) * 2**-53``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fisher, qubit, spinrep, werner
from .errors import BadProbabilitiesError, DegenerateLikelihoodError, ValidationError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

PROB_TOL = 1e-10
GRID_POINTS = 2001


def splitmix64(seed: int, n: int, start: int = 0) -> np.ndarray:
    """Outputs ``start .. start + n - 1`` of the SplitMix64 stream for `seed`."""
    k = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


def uniforms(seed: int, n: int) -> np.ndarray:
    return (splitmix64(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def substream_seeds(seed: int, n: int) -> list:
    return [int(z) for z in splitmix64(seed, n)]


@dataclass(frozen=True)
class OutcomeModel:
    """Outcome labels and a vectorised probability law.

    ``prob(thetas)`` takes an array of phases and returns an array of shape
    ``thetas.shape + (len(labels),)``.  `interval` is the phase range on
    which the law is identifiable (None: unrestricted).
    """

    labels: tuple
    prob: Callable[[np.ndarray], np.ndarray]
    interval: tuple | None = None
    name: str = ""

    def probabilities(self, theta: float) -> np.ndarray:
        p = np.asarray(self.prob(np.asarray([float(theta)])), dtype=float)[0]
        check_probabilities(p)
        return p

    def fisher_information(self, theta: float, h: float = 1e-5) -> float:
        """CFI of the model at `theta` from central differences of `prob`."""
        p = np.asarray(self.prob(np.array([theta - h, theta, theta + h])), dtype=float)
        return fisher.fisher_from_probabilities(p[1], (p[2] - p[0]) / (2 * h))


def check_probabilities(p) -> None:
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)) or np.any(p < -PROB_TOL) or abs(p.sum() - 1.0) > PROB_TOL:
        raise BadProbabilitiesError(f"not a probability vector: {p!r}")


def qubit_model(s_in, povm: qubit.QubitPovmSet, interval=None) -> OutcomeModel:
    s_in = qubit.BlochVector(getattr(s_in, "s", s_in))
    gam = np.array([e.gamma for e in povm])
    qs = np.array([e.q for e in povm])

    def prob(thetas):
        t = np.asarray(thetas, dtype=float)[..., None]
        sx, sy, sz = s_in.s
        rot = np.stack(
            [sx * np.cos(t) + sz * np.sin(t), np.broadcast_to(sy, t.shape), sz * np.cos(t) - sx * np.sin(t)],
            axis=-1,
        )[..., 0, :]
        return gam * (1.0 + rot @ qs.T)

    return OutcomeModel(tuple(range(len(gam))), prob, interval, "qubit")


def qubit_optimal_model(s_in, theta0: float) -> OutcomeModel:
    """Projective measurement along ``+-e_perp`` of the state at `theta0`.

    The likelihood is monotone on ``theta0 +- pi/2``, which is used as the
    interval.
    """
    s = qubit.rotate_bloch(s_in, theta0)
    _, e_perp = qubit.in_plane_frame(s)
    povm = qubit.QubitPovmSet.projective(e_perp)
    return qubit_model(s_in, povm, (theta0 - np.pi / 2, theta0 + np.pi / 2))


def werner_fock_model(alpha: float) -> OutcomeModel:
    """Fock counts ``n = 0, 1, 2`` on a rotated Werner state; identifiable on (0, pi/2)."""
    a = float(alpha)
    werner.werner_probabilities(a, 0.0)

    def prob(thetas):
        t = np.asarray(thetas, dtype=float)
        base = (1.0 - a) / 3.0
        edge = base + 0.5 * a * np.sin(t) ** 2
        return np.stack([edge, base + a * np.cos(t) ** 2, edge], axis=-1)

    return OutcomeModel((0, 1, 2), prob, (0.0, np.pi / 2), f"werner(alpha={a:g})")


def counting_model(psi0: spinrep.SymmetricState, axis, interval=None) -> OutcomeModel:
    """Mode-occupation counts ``j`` of ``exp(-i theta J_k) psi0``."""
    n = psi0.n_particles
    ax = spinrep.unit_axis(axis)

    def prob(thetas):
        t = np.asarray(thetas, dtype=float)
        out = np.empty(t.shape + (n + 1,))
        for idx, th in np.ndenumerate(t):
            amp = spinrep.rotation_matrix(n, ax, th) @ psi0.coeffs
            out[idx] = np.abs(amp) ** 2
        return out

    return OutcomeModel(tuple(range(n + 1)), prob, interval, "counting")


def sample_counts(model: OutcomeModel, theta: float, m: int, seed: int) -> np.ndarray:
    """Multinomial counts of `m` outcomes at `theta`, by inverse-CDF sampling."""
    if int(m) != m or m < 1:
        raise ValidationError(f"m must be a positive integer, got {m!r}")
    p = model.probabilities(theta)
    return _draw(p, int(m), seed)


def _draw(p: np.ndarray, m: int, seed: int) -> np.ndarray:
    cdf = np.cumsum(np.clip(p, 0.0, None))
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, uniforms(seed, m), side="right")
    return np.bincount(np.minimum(idx, len(p) - 1), minlength=len(p))


def default_grid(model: OutcomeModel, theta0: float, points: int = GRID_POINTS) -> np.ndarray:
    lo, hi = model.interval if model.interval is not None else (theta0 - np.pi / 2, theta0 + np.pi / 2)
    return np.linspace(lo, hi, points)


def _log_table(model: OutcomeModel, grid: np.ndarray) -> np.ndarray:
    p = np.asarray(model.prob(grid), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.clip(p, 0.0, None))


def _refine(grid, ll, k) -> float:
    if k == 0 or k == len(grid) - 1:
        return float(grid[k])
    x0, x1, x2 = grid[k - 1 : k + 2]
    y0, y1, y2 = ll[k - 1 : k + 2]
    if not np.all(np.isfinite([y0, y1, y2])):
        return float(grid[k])
    den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if den == 0.0:
        return float(grid[k])
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    return float(np.clip(x1 - 0.5 * num / den, x0, x2))


def _loglik(logp: np.ndarray, counts: np.ndarray) -> np.ndarray:
    # 0 * log(0) counts as 0; n > 0 with p = 0 gives -inf
    safe = np.where(np.isneginf(logp), 0.0, logp)
    ll = safe @ counts.astype(float)
    impossible = (np.isneginf(logp).astype(float) @ (counts > 0).astype(float)) > 0
    ll[impossible] = -np.inf
    return ll


def ml_estimate(counts, model: OutcomeModel, theta_grid) -> float:
    """Maximum-likelihood phase on `theta_grid`, refined by one parabola step.

    Ties resolve to the smallest grid phase.
    """
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or np.any(np.diff(grid) <= 0):
        raise ValidationError("theta grid must be strictly increasing with at least 3 points")
    counts = np.asarray(counts)
    if counts.shape != (len(model.labels),):
        raise ValidationError("counts do not match the model's outcomes")
    ll = _loglik(_log_table(model, grid), counts)
    if np.all(np.isneginf(ll)):
        raise DegenerateLikelihoodError("log-likelihood is -inf on the whole grid")
    k = int(np.argmax(ll))
    return _refine(grid, ll, k)


@dataclass(frozen=True)
class EstimationResult:
    theta_true: float
    m: int
    trials: int
    theta_hats: np.ndarray = field(repr=False, compare=False)
    empirical_std: float
    crlb: float
    mean_bias: float

    @property
    def ratio(self) -> float:
        return self.empirical_std / self.crlb


def crlb_trial(
    model: OutcomeModel,
    F: float,
    theta_true: float,
    m: int,
    trials: int,
    seed: int,
    theta_grid: Sequence | None = None,
) -> EstimationResult:
    """Repeat ``trials`` experiments of ``m`` shots and compare the spread of
    the ML estimates with ``1/sqrt(m F)``.
    """
    if not F > 0:
        raise ValidationError("Fisher information must be positive")
    if int(m) != m or m < 1 or int(trials) != trials or trials < 1:
        raise ValidationError("m and trials must be positive integers")
    m, trials = int(m), int(trials)
    grid = default_grid(model, theta_true) if theta_grid is None else np.asarray(theta_grid, float)
    p = model.probabilities(theta_true)
    logp = _log_table(model, grid)

    counts = np.stack([_draw(p, m, s) for s in substream_seeds(seed, trials)], axis=1)
    ll = _loglik(logp, counts)
    hats = np.empty(trials)
    for t in range(trials):
        col = ll[:, t]
        if np.all(np.isneginf(col)):
            raise DegenerateLikelihoodError("log-likelihood is -inf on the whole grid")
        hats[t] = _refine(grid, col, int(np.argmax(col)))

    std = float(np.std(hats, ddof=1)) if trials > 1 else 0.0
    return EstimationResult(
        theta_true=float(theta_true),
        m=m,
        trials=trials,
        theta_hats=hats,
        empirical_std=std,
        crlb=float(1.0 / np.sqrt(m * F)),
        mean_bias=float(np.mean(hats) - theta_true),
    )
