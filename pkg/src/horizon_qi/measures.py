"""Coherence, entanglement and correlation quantifiers for the scenario states.

Pure three-qubit kets use the concurrence triangle: the squared one-vs-rest
concurrences ``C_k^2`` are its sides, ``Q`` (global concurrence) is the
half-perimeter and the concurrence fill ``F`` is the normalized square root
of its Heron area.  Mixed states go through :func:`horizon_qi.roof.convex_roof`.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ContractError
from .horizon import HorizonParams, Scenario, build_pentapartite_state, reduce_to_scenario
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_ket,
    check_density,
    partial_trace,
    von_neumann_entropy,
)
from .roof import RoofConfig, RoofResult, convex_roof

__all__ = [
    "MEASURES",
    "TRADEOFF_TOL",
    "TRIANGLE_TOL",
    "qc_l1",
    "foc_single",
    "foc_tripartite",
    "concurrence_one_vs_rest",
    "one_vs_rest_concurrences",
    "gc_pure",
    "cf_pure",
    "mutual_information",
    "mi_pairs",
    "MeasureReport",
    "evaluate_point",
]

log = logging.getLogger(__name__)

MEASURES = ("qc", "foc", "gc", "cf", "tradeoff", "mi")
TRADEOFF_TOL = 1e-6
# Heron factors this far below zero are rounding noise
TRIANGLE_TOL = 1e-12

_MI_PAIRS = {
    "ABC": ("AB", "AC"),
    "Abc": ("Ab", "Ac"),
    "AbB": ("AB", "Ab"),
    "ABc": ("AB", "Ac"),
}


def qc_l1(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """l1-norm coherence in the computational basis: sum of |rho_ij| over i != j."""
    m = check_density(rho, tol)
    off = np.abs(m).sum() - np.abs(np.diag(m)).sum()
    return float(max(off, 0.0))


def foc_single(rho_qubit, tol: Tolerances = DEFAULT_TOL) -> float:
    """Bloch-vector length ``sqrt(2 tr(rho^2) - 1)`` of a qubit state.

    Evaluated as ``(rho_00 - rho_11)^2 + 4 |rho_01|^2``, which equals
    ``2 tr(rho^2) - 1`` at unit trace but does not cancel near the centre
    of the Bloch ball.
    """
    m = np.asarray(rho_qubit)
    if m.shape != (2, 2):
        raise ArgumentError(f"foc_single needs a 2x2 state, got shape {m.shape}")
    m = check_density(m, tol)
    d2 = (m[0, 0] - m[1, 1]).real ** 2 + 4.0 * abs(m[0, 1]) ** 2
    return float(math.sqrt(min(max(d2, 0.0), 1.0)))


def foc_tripartite(rho3, dims=(2, 2, 2), tol: Tolerances = DEFAULT_TOL) -> float:
    """Root mean square of the single-site Bloch lengths."""
    dims = tuple(int(d) for d in dims)
    if dims != (2, 2, 2):
        raise ArgumentError(f"foc_tripartite supports three qubits only, got dims {dims}")
    m = check_density(rho3, tol)
    if m.shape != (8, 8):
        raise ArgumentError(f"expected an 8x8 state, got {m.shape}")
    d2 = [foc_single(partial_trace(m, dims, [k]), tol) ** 2 for k in range(3)]
    return float(math.sqrt(sum(d2) / 3.0))


def _pure3(psi, tol: Tolerances) -> np.ndarray:
    v = as_ket(psi, tol)
    if v.size != 8:
        raise ArgumentError(f"expected a three-qubit ket of length 8, got {v.size}")
    return v


def one_vs_rest_concurrences(psi, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float, float]:
    """``(C_x(yz), C_y(zx), C_z(xy))`` of a normalized three-qubit ket."""
    v = _pure3(psi, tol)
    out = []
    for k in range(3):
        rk = partial_trace(np.outer(v, v.conj()), (2, 2, 2), [k])
        det = (rk[0, 0] * rk[1, 1] - rk[0, 1] * rk[1, 0]).real
        out.append(min(2.0 * math.sqrt(max(det, 0.0)), 1.0))
    return tuple(out)


def concurrence_one_vs_rest(psi, site: int, dims=(2, 2, 2), tol: Tolerances = DEFAULT_TOL) -> float:
    """``2 sqrt(det rho_site)`` for a pure three-qubit state.

    Raises :class:`ContractError` when ``psi`` is not normalized.
    """
    if tuple(dims) != (2, 2, 2):
        raise ArgumentError(f"only three qubits are supported, got dims {tuple(dims)}")
    if not 0 <= site < 3:
        raise ArgumentError(f"site must be 0, 1 or 2, got {site}")
    return one_vs_rest_concurrences(psi, tol)[site]


def gc_pure(psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """Half-perimeter ``Q = (C_x^2 + C_y^2 + C_z^2) / 2`` of the concurrence triangle."""
    c = one_vs_rest_concurrences(psi, tol)
    return 0.5 * sum(x * x for x in c)


def cf_pure(psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """Concurrence fill ``[16/3 Q (Q - C_x^2)(Q - C_y^2)(Q - C_z^2)]^(1/4)``.

    Raises :class:`ContractError` if a Heron factor is negative beyond
    :data:`TRIANGLE_TOL`, which the triangle inequality rules out for
    genuine quantum states.
    """
    c2 = [x * x for x in one_vs_rest_concurrences(psi, tol)]
    q = 0.5 * sum(c2)
    prod = (16.0 / 3.0) * q
    for s in c2:
        f = q - s
        if f < -TRIANGLE_TOL:
            raise ContractError(f"concurrence triangle violated by {-f:.3e}")
        prod *= max(f, 0.0)
    return float(min(prod**0.25, 1.0))


def mutual_information(rho_pair, dims=(2, 2), tol: Tolerances = DEFAULT_TOL) -> float:
    """``S(X) + S(Y) - S(XY)`` in bits, clamped at zero."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise ArgumentError("mutual_information needs exactly two subsystems")
    m = check_density(rho_pair, tol)
    if m.shape != (dims[0] * dims[1],) * 2:
        raise ArgumentError(f"dims {dims} do not match a {m.shape} matrix")
    sx = von_neumann_entropy(partial_trace(m, dims, [0]), tol)
    sy = von_neumann_entropy(partial_trace(m, dims, [1]), tol)
    return max(sx + sy - von_neumann_entropy(m, tol), 0.0)


def mi_pairs(scenario) -> tuple[str, ...]:
    """Site pairs whose mutual information is reported for ``scenario``.

    The four named scenarios report the two pairs containing Alice; custom
    scenarios report every pair.
    """
    sc = Scenario.parse(scenario)
    if sc.name in _MI_PAIRS:
        return _MI_PAIRS[sc.name]
    return tuple(a + b for a, b in itertools.combinations(sc.labels, 2))


@dataclass(frozen=True)
class MeasureReport:
    """Every requested measure at one parameter point.

    ``cf`` and ``gc`` are upper bounds whenever the scenario state has rank
    above one (see ``cf_roof.upper_bound``).  ``concurrences`` are the
    ensemble-averaged one-vs-rest concurrences of the best CF ensemble (the
    GC ensemble if only GC was requested).  Unrequested entries are None.
    """

    scenario: str
    params: HorizonParams
    rank: int | None = None
    qc_l1: float | None = None
    foc: float | None = None
    concurrences: tuple[float, float, float] | None = None
    gc: float | None = None
    cf: float | None = None
    tradeoff_sum: float | None = None
    mutual_info: dict[str, float] = field(default_factory=dict)
    cf_roof: RoofResult | None = field(default=None, repr=False)
    gc_roof: RoofResult | None = field(default=None, repr=False)


def _ensemble_concurrences(res: RoofResult) -> tuple[float, float, float]:
    acc = np.zeros(3)
    for p, psi in zip(res.probabilities, res.states):
        acc += p * np.array(one_vs_rest_concurrences(psi, DEFAULT_TOL))
    return tuple(float(x) for x in acc)


def evaluate_point(
    p: HorizonParams,
    scenario,
    cfg: RoofConfig | None = None,
    measures=MEASURES,
    tol: Tolerances = DEFAULT_TOL,
) -> MeasureReport:
    """Reduce the five-qubit state to ``scenario`` and evaluate ``measures``.

    ``tradeoff`` implies ``foc`` and ``cf``.  The entanglement measures need a
    three-site scenario; mutual information works for any size of at least two.
    """
    sc = Scenario.parse(scenario)
    wanted = set(measures)
    unknown = wanted - set(MEASURES)
    if unknown:
        raise ArgumentError(f"unknown measures {sorted(unknown)}; choose from {MEASURES}")
    if "tradeoff" in wanted:
        wanted |= {"foc", "cf"}
    if wanted & {"foc", "gc", "cf"} and len(sc.sites) != 3:
        raise ArgumentError(f"foc, gc and cf need a three-site scenario, got {sc.name}")
    cfg = cfg or RoofConfig()

    psi = build_pentapartite_state(p)
    rho = reduce_to_scenario(psi, sc)
    out: dict = {"scenario": sc.name, "params": p}

    if "qc" in wanted:
        out["qc_l1"] = qc_l1(rho, tol)
    if "foc" in wanted:
        out["foc"] = foc_tripartite(rho, tol=tol)
    for obj in ("cf", "gc"):
        if obj in wanted:
            res = convex_roof(rho, obj, cfg, tol)
            out[obj] = res.value
            out[f"{obj}_roof"] = res
            out["rank"] = res.rank
    roof = out.get("cf_roof") or out.get("gc_roof")
    if roof is not None:
        out["concurrences"] = _ensemble_concurrences(roof)
    if "cf" in wanted and "foc" in wanted:
        total = out["foc"] ** 2 + out["cf"]
        out["tradeoff_sum"] = total
        if out["rank"] == 1 and total > 1.0 + TRADEOFF_TOL:
            raise ContractError(
                f"FOC^2 + CF = {total:.9f} exceeds 1 at {sc.name}, {p.alpha}, {p.omega}, {p.t_hawking}"
            )
        if total > 1.0 + TRADEOFF_TOL:
            log.warning("trade-off sum %.9f above 1 for a mixed state at %s", total, p)
    if "mi" in wanted:
        if len(sc.sites) < 2:
            raise ArgumentError("mutual information needs at least two sites")
        mi = {}
        for pair in mi_pairs(sc):
            idx = [sc.labels.index(s) for s in pair]
            pair_rho = partial_trace(rho, [2] * len(sc.sites), idx)
            mi[pair] = mutual_information(pair_rho, tol=tol)
        out["mutual_info"] = mi
    return MeasureReport(**out)
