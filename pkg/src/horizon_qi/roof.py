"""Convex-roof extension of the three-qubit concurrence fill and global concurrence.

The roof of a pure-state quantity ``f`` is the minimum of ``sum_i p_i f(psi_i)``
over all ensembles with ``rho = sum_i p_i |psi_i><psi_i|``.  Every ensemble of
``m`` members arises from the eigen-ensemble by an ``m x m`` unitary ``W``:

    sqrt(p_i) |psi_i> = sum_j W_ij sqrt(lambda_j) |e_j>.

The search walks over ``W`` with a compass (pattern) search whose coordinate
directions are the Givens generators of U(m): each trial move rotates one
pair of ensemble members into each other by a small angle, with a real or an
imaginary mixing phase.  Only the two touched members need re-evaluation.
The objective is a sum over members, so gains on disjoint pairs add up:
each poll applies the best move of every pair in a greedy disjoint set.
Each direction keeps its own step, doubled when its move is taken and
halved when neither sign helps.  A restart stops once every step falls
below ``step_tolerance`` or the objective improves by less than
``objective_tolerance`` over ``stall_window`` polls.

Restart 0 starts at the eigen-ensemble; the others start at Haar-random
unitaries drawn from ``numpy.random.default_rng([rng_seed, k])``, so every
restart is reproducible on its own and a larger restart budget only adds
candidates.  The returned value is always an upper bound on the true roof.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ArgumentError, ConfigError
from .linalg import DEFAULT_TOL, Tolerances, check_density, eigh

__all__ = [
    "OBJECTIVES",
    "RANK_CUTOFF",
    "RoofConfig",
    "RoofResult",
    "member_values",
    "convex_roof",
    "eigen_ensemble",
    "random_decomposition",
]

log = logging.getLogger(__name__)

OBJECTIVES = ("cf", "gc")

# eigenvalues below this are dropped from the decomposition basis
RANK_CUTOFF = 1e-12
# a poll only counts as a success above rounding noise
_MIN_GAIN = 1e-15


@dataclass(frozen=True)
class RoofConfig:
    """Budget and tolerances of the convex-roof search.

    ``ensemble_size=None`` means ``rank + 2`` members, capped at 8.
    """

    ensemble_size: int | None = None
    restarts: int = 32
    max_iters: int = 2000
    step_tolerance: float = 1e-9
    objective_tolerance: float = 1e-9
    rng_seed: int = 0
    initial_step: float = 0.3
    stall_window: int = 50
    zero_floor: float = 1e-8

    def __post_init__(self):
        if self.ensemble_size is not None and not 1 <= self.ensemble_size <= 64:
            raise ConfigError(f"ensemble_size must be in [1, 64], got {self.ensemble_size}")
        if self.restarts < 1:
            raise ConfigError("restarts must be at least 1")
        if self.max_iters < 0:
            raise ConfigError("max_iters must be non-negative")
        if not (self.step_tolerance > 0 and self.objective_tolerance >= 0):
            raise ConfigError("tolerances must be positive")
        if self.stall_window < 1:
            raise ConfigError("stall_window must be at least 1")
        if not self.initial_step > self.step_tolerance:
            raise ConfigError("initial_step must exceed step_tolerance")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must fit in an unsigned 64-bit integer")

    @classmethod
    def fast(cls, **overrides) -> "RoofConfig":
        """Smoke-test budget: 8 restarts of at most 500 iterations."""
        return replace(cls(restarts=8, max_iters=500), **overrides)


@dataclass(frozen=True)
class RoofResult:
    """Outcome of :func:`convex_roof`.

    ``probabilities`` and ``states`` hold the best ensemble found (states as
    rows, normalized).  ``upper_bound`` is False only when the input was
    numerically pure and the value is exact.
    """

    value: float
    objective: str
    rank: int
    ensemble_size: int
    restarts_used: int
    restart_values: tuple[float, ...]
    iterations: int
    converged: bool
    upper_bound: bool
    probabilities: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)

    @property
    def best(self) -> float:
        return self.value

    @property
    def median(self) -> float:
        return float(np.median(self.restart_values))


def _squared_concurrences(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Squared one-vs-rest concurrences of unnormalized 3-qubit kets.

    ``psi`` has shape ``(..., 8)``; returns ``(c2, norm)`` with ``c2`` of
    shape ``(3, ...)``.  Uses ``det(rho_k) = a (p - a) - |x|^2`` where ``a`` is
    the weight of the site-k ``|0>`` branch and ``x`` its overlap with the
    ``|1>`` branch.
    """
    t = psi.reshape(psi.shape[:-1] + (2, 2, 2))
    p = (psi.real**2 + psi.imag**2).sum(axis=-1)
    dets = []
    for site in range(3):
        ts = np.moveaxis(t, t.ndim - 3 + site, -3)
        zero, one = ts[..., 0, :, :], ts[..., 1, :, :]
        a = (zero.real**2 + zero.imag**2).sum(axis=(-1, -2))
        x = (zero * one.conj()).sum(axis=(-1, -2))
        dets.append(a * (p - a) - (x.real**2 + x.imag**2))
    safe = np.where(p > 1e-100, p, 1.0)  # keeps p**2 clear of underflow
    c2 = 4.0 * np.clip(np.stack(dets), 0.0, None) / safe**2
    return np.minimum(c2, 1.0), p


def member_values(psi: np.ndarray, objective: str) -> np.ndarray:
    """``p_i * f(psi_i / sqrt(p_i))`` for a batch of unnormalized members."""
    c2, p = _squared_concurrences(psi)
    q = 0.5 * (c2[0] + c2[1] + c2[2])
    if objective == "gc":
        return p * q
    heron = (16.0 / 3.0) * q
    for k in range(3):
        heron = heron * np.clip(q - c2[k], 0.0, None)
    return p * np.sqrt(np.sqrt(heron))


def eigen_ensemble(rho, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues above :data:`RANK_CUTOFF` and the matching eigenvectors (columns)."""
    spec = eigh(check_density(rho, tol), tol)
    keep = spec.eigenvalues > RANK_CUTOFF
    return spec.eigenvalues[keep], spec.eigenvectors[:, keep]


def _haar_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_decomposition(rho, m: int, rng: np.random.Generator, tol: Tolerances = DEFAULT_TOL):
    """A Haar-random ``m``-member decomposition of ``rho``.

    Returns ``(probabilities, states)`` with normalized states as rows;
    members of zero weight are dropped.
    """
    lam, vecs = eigen_ensemble(rho, tol)
    r = lam.size
    if m < r:
        raise ConfigError(f"ensemble of {m} members cannot reproduce rank {r}")
    w = _haar_unitary(m, rng)
    tilde = w[:, :r] @ (np.sqrt(lam)[:, None] * vecs.T)
    return _normalize_members(tilde)


def _normalize_members(tilde: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.sum(np.abs(tilde) ** 2, axis=1)
    keep = p > 1e-300
    return p[keep], tilde[keep] / np.sqrt(p[keep])[:, None]


def _compass(psi: np.ndarray, objective: str, cfg: RoofConfig) -> tuple[np.ndarray, float, int, bool]:
    """Pattern search over pairwise member rotations, in place on ``psi``."""
    m = psi.shape[0]
    vals = member_values(psi, objective)
    total = float(vals.sum())
    if m < 2 or cfg.max_iters == 0:
        return psi, total, 0, m < 2
    i_idx, j_idx = np.triu_indices(m, 1)
    n_pairs = i_idx.size
    pair = np.repeat(np.arange(n_pairs), 4)
    rows_i, rows_j = i_idx[pair], j_idx[pair]
    phase = np.tile(np.array([1.0, 1.0, 1j, 1j]), n_pairs)[:, None]
    sign = np.tile(np.array([1.0, -1.0, 1.0, -1.0]), n_pairs)
    direction = np.repeat(np.arange(2 * n_pairs), 2)

    step = np.full(2 * n_pairs, cfg.initial_step)
    step_cap = max(cfg.initial_step, 1.0)
    converged = False
    it = 0
    checkpoint = total
    while it < cfg.max_iters:
        it += 1
        if it % cfg.stall_window == 0:
            if checkpoint - total < cfg.objective_tolerance:
                converged = True
                break
            checkpoint = total
        theta = step[direction] * sign
        c = np.cos(theta)[:, None]
        s = np.sin(theta)[:, None]
        a, b = psi[rows_i], psi[rows_j]
        new_a = c * a + phase * s * b
        new_b = c * b - phase.conj() * s * a
        trial = member_values(np.stack([new_a, new_b], axis=1), objective)
        gain = vals[rows_i] + vals[rows_j] - trial.sum(axis=1)
        step[gain.reshape(-1, 2).max(axis=1) <= _MIN_GAIN] *= 0.5
        per_pair = gain.reshape(n_pairs, 4)
        choice = np.argmax(per_pair, axis=1)
        pair_gain = per_pair[np.arange(n_pairs), choice]
        busy = np.zeros(m, dtype=bool)
        moved = False
        for p in np.argsort(-pair_gain, kind="stable"):
            if pair_gain[p] <= _MIN_GAIN:
                break
            i, j = i_idx[p], j_idx[p]
            if busy[i] or busy[j]:
                continue
            busy[i] = busy[j] = True
            t = 4 * p + choice[p]
            psi[i], psi[j] = new_a[t], new_b[t]
            vals[i], vals[j] = trial[t]
            step[direction[t]] = min(2.0 * step[direction[t]], step_cap)
            moved = True
        if moved:
            total = float(vals.sum())
            if total < cfg.zero_floor:
                converged = True
                break
        if step.max() < cfg.step_tolerance:
            converged = True
            break
    # recompute from scratch so accumulated bookkeeping error cannot leak out
    total = float(member_values(psi, objective).sum())
    return psi, total, it, converged


def convex_roof(
    rho3,
    objective: str = "cf",
    cfg: RoofConfig | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> RoofResult:
    """Upper bound on the convex roof of ``objective`` for a three-qubit state.

    Parameters
    ----------
    rho3 : array_like
        8x8 density operator.
    objective : {"cf", "gc"}
        Concurrence fill or global concurrence (half-perimeter).
    cfg : RoofConfig, optional
        Search budget; defaults to ``RoofConfig()``.

    Notes
    -----
    A numerically pure input (one eigenvalue above :data:`RANK_CUTOFF`) is
    evaluated exactly on its leading eigenvector without any search.
    """
    if objective not in OBJECTIVES:
        raise ArgumentError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    cfg = cfg or RoofConfig()
    rho = check_density(rho3, tol)
    if rho.shape != (8, 8):
        raise ArgumentError(f"convex roof needs an 8x8 three-qubit state, got {rho.shape}")
    lam, vecs = eigen_ensemble(rho, tol)
    r = lam.size
    base = np.sqrt(lam)[:, None] * vecs.T  # r x 8, rows sqrt(lambda_j) <e_j|

    if r == 1:
        value = float(member_values(vecs.T, objective)[0])
        return RoofResult(
            value, objective, 1, 1, 0, (value,), 0, True, False, np.ones(1), vecs.T.copy()
        )

    m = cfg.ensemble_size if cfg.ensemble_size is not None else min(r + 2, 8)
    if m < r:
        raise ConfigError(f"ensemble_size {m} is smaller than the rank {r}")
    padded = np.zeros((m, 8), dtype=complex)
    padded[:r] = base

    best_val, best_psi = np.inf, padded
    values, iterations, best_conv = [], 0, False
    for k in range(cfg.restarts):
        if k == 0:
            start = padded.copy()
        else:
            start = _haar_unitary(m, np.random.default_rng([cfg.rng_seed, k])) @ padded
        psi, val, its, conv = _compass(start, objective, cfg)
        values.append(val)
        iterations += its
        if val < best_val:
            best_val, best_psi, best_conv = val, psi, conv
        if best_val < cfg.zero_floor:
            break
    probs, states = _normalize_members(best_psi)
    return RoofResult(
        float(best_val),
        objective,
        r,
        m,
        len(values),
        tuple(values),
        iterations,
        best_conv,
        True,
        probs,
        states,
    )
