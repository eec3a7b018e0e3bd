"""Dirac-field state shared across a Schwarzschild horizon.

Alice keeps a Minkowski qubit ``A``; Bob's and Charlie's qubits are
expanded in the Kruskal basis,

    |0>_k = S- |0>_out |0>_in + S+ |1>_out |1>_in,      |1>_k = |1>_out |0>_in,

with ``S± = (exp(±ω/T_H) + 1)^(-1/2)``.  The GHZ-type input
``α|000> + sqrt(1-α²)|111>`` then becomes a five-qubit pure state over the
sites ``(A, b, B, c, C)``, where lower-case letters are the modes behind the
horizon (anti-Bob, anti-Charlie).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ArgumentError, DomainError
from .linalg import partial_trace, projector

__all__ = [
    "SITES",
    "HorizonParams",
    "derive_coefficients",
    "hawking_temperature",
    "black_hole_mass",
    "Scenario",
    "ABC",
    "Abc",
    "AbB",
    "ABc",
    "NAMED_SCENARIOS",
    "parse_sites",
    "build_pentapartite_state",
    "reduce_to_scenario",
    "reduce_sites",
    "appendix_oracle",
    "ORACLE_SUBSETS",
]

SITES = ("A", "b", "B", "c", "C")
_SITE_INDEX = {label: i for i, label in enumerate(SITES)}


def hawking_temperature(mass: float) -> float:
    """T_H = 1 / (8 π M) in natural units."""
    if not mass > 0:
        raise DomainError(f"black-hole mass must be positive, got {mass!r}")
    return 1.0 / (8.0 * math.pi * mass)


def black_hole_mass(t_hawking: float) -> float:
    if not t_hawking > 0:
        raise DomainError(f"Hawking temperature must be positive, got {t_hawking!r}")
    return 1.0 / (8.0 * math.pi * t_hawking)


@dataclass(frozen=True)
class HorizonParams:
    """State parameter, mode frequency and Hawking temperature plus the
    amplitudes of the five-qubit state they generate.

    ``gamma`` is ``α S+ S- = α / (2 cosh(ω / 2T_H))``; with it the five
    amplitudes satisfy ``θ+² + θ-² + 2Γ² + Υ² = 1``.
    """

    alpha: float
    omega: float
    t_hawking: float
    s_plus: float = field(init=False)
    s_minus: float = field(init=False)
    theta_plus: float = field(init=False)
    theta_minus: float = field(init=False)
    gamma: float = field(init=False)
    upsilon: float = field(init=False)

    def __post_init__(self):
        a, w, t = float(self.alpha), float(self.omega), float(self.t_hawking)
        if not (0.0 <= a <= 1.0):
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not (w > 0 and math.isfinite(w)):
            raise DomainError(f"omega must be positive and finite, got {self.omega!r}")
        if not (t > 0 and math.isfinite(t)):
            raise DomainError(f"t_hawking must be positive and finite, got {self.t_hawking!r}")
        x = w / t
        # exp(-x) underflows to 0 for huge ω/T_H: S+ -> 0 and S- -> 1
        e = math.exp(-x) if x < 1e4 else 0.0
        sp2 = e / (1.0 + e)
        sm2 = 1.0 / (1.0 + e)
        sp, sm = math.sqrt(sp2), math.sqrt(sm2)
        for name, value in (
            ("alpha", a),
            ("omega", w),
            ("t_hawking", t),
            ("s_plus", sp),
            ("s_minus", sm),
            ("theta_plus", a * sp2),
            ("theta_minus", a * sm2),
            ("gamma", a * sp * sm),
            ("upsilon", math.sqrt(max(1.0 - a * a, 0.0))),
        ):
            object.__setattr__(self, name, value)

    @property
    def norm_sq(self) -> float:
        return self.theta_plus**2 + self.theta_minus**2 + 2 * self.gamma**2 + self.upsilon**2


def derive_coefficients(alpha: float, omega: float, t_hawking: float) -> HorizonParams:
    """Build :class:`HorizonParams`, raising :class:`DomainError` on bad input."""
    return HorizonParams(alpha, omega, t_hawking)


def parse_sites(spec: str | Iterable) -> tuple[int, ...]:
    """Turn ``"AbB"``, ``["A", "b"]`` or ``(0, 2)`` into sorted site indices."""
    if isinstance(spec, str):
        items = list(spec)
    else:
        items = list(spec)
    out = []
    for it in items:
        if isinstance(it, (int, np.integer)) and not isinstance(it, bool):
            if not 0 <= it < len(SITES):
                raise ArgumentError(f"site index {it} out of range")
            out.append(int(it))
        elif isinstance(it, str) and it in _SITE_INDEX:
            out.append(_SITE_INDEX[it])
        else:
            raise ArgumentError(f"unknown site {it!r}; expected one of {''.join(SITES)}")
    if not out:
        raise ArgumentError("empty site selection")
    if len(set(out)) != len(out):
        raise ArgumentError(f"duplicate sites in {spec!r}")
    return tuple(sorted(out))


@dataclass(frozen=True)
class Scenario:
    """A subset of 1 to 4 of the five sites, held in the global order."""

    sites: tuple[int, ...]

    def __post_init__(self):
        sites = parse_sites(self.sites)
        if not 1 <= len(sites) <= 4:
            raise ArgumentError("a scenario keeps between one and four sites")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def parse(cls, spec) -> "Scenario":
        if isinstance(spec, Scenario):
            return spec
        return cls(parse_sites(spec))

    @property
    def name(self) -> str:
        return "".join(SITES[i] for i in self.sites)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(SITES[i] for i in self.sites)

    @property
    def is_named(self) -> bool:
        return self.name in NAMED_SCENARIOS

    def __str__(self) -> str:
        return self.name


ABC = Scenario((0, 2, 4))
Abc = Scenario((0, 1, 3))
AbB = Scenario((0, 1, 2))
ABc = Scenario((0, 2, 3))
NAMED_SCENARIOS = {s.name: s for s in (ABC, Abc, AbB, ABc)}


def build_pentapartite_state(p: HorizonParams) -> np.ndarray:
    """32-dimensional ket over ``(A, b, B, c, C)``."""
    psi = np.zeros(32, dtype=complex)
    psi[0b01111] = p.theta_plus
    psi[0b00000] = p.theta_minus
    psi[0b00011] = p.gamma
    psi[0b01100] = p.gamma
    psi[0b10101] = p.upsilon
    return psi


def reduce_sites(psi: np.ndarray, sites) -> np.ndarray:
    """Reduced density operator of the five-qubit ket on ``sites`` (global order)."""
    keep = parse_sites(sites)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != 32:
        raise ArgumentError(f"expected a 32-dimensional ket, got {psi.size}")
    return partial_trace(projector(psi), [2] * 5, keep)


def reduce_to_scenario(psi: np.ndarray, scenario) -> np.ndarray:
    """Trace the five-qubit ket down to a named or custom scenario."""
    return reduce_sites(psi, Scenario.parse(scenario).sites)


# Closed forms for every single-qubit and two-qubit reduction, written
# entrywise in terms of the amplitudes.  Two-qubit matrices use the global
# site order; "Bb" is stored as (b, B).  "bc" and "bC" are not printed
# alongside the others but follow from the same expansion.
def _oracle_table(p: HorizonParams) -> dict[str, np.ndarray]:
    tp2, tm2 = p.theta_plus**2, p.theta_minus**2
    g, g2, u2 = p.gamma, p.gamma**2, p.upsilon**2
    x = g * (p.theta_plus + p.theta_minus)
    d = np.diag
    bb = d([g2 + tm2, u2, 0.0, tp2 + g2])
    bb[0, 3] = bb[3, 0] = x
    cc = bb.copy()
    ab = d([g2 + tm2, tp2 + g2, 0.0, u2])
    a_anti = d([g2 + tm2, tp2 + g2, u2, 0.0])
    return {
        "A": d([tp2 + 2 * g2 + tm2, u2]),
        "B": d([g2 + tm2, tp2 + u2 + g2]),
        "b": d([u2 + g2 + tm2, tp2 + g2]),
        "C": d([g2 + tm2, tp2 + u2 + g2]),
        "c": d([u2 + g2 + tm2, tp2 + g2]),
        "AB": ab,
        "AC": ab.copy(),
        "BC": d([tm2, g2, g2, tp2 + u2]),
        "Ab": a_anti,
        "bB": bb,
        "Ac": a_anti.copy(),
        "Bc": d([tm2, g2, u2 + g2, tp2]),
        "cC": cc,
        "bc": d([tm2 + u2, g2, g2, tp2]),
        "bC": d([tm2, g2 + u2, g2, tp2]),
    }


ORACLE_SUBSETS = tuple(
    "".join(SITES[i] for i in parse_sites(k))
    for k in ("A", "b", "B", "c", "C", "Ab", "AB", "Ac", "AC", "bB", "bc", "bC", "Bc", "BC", "cC")
)


def appendix_oracle(subset, p: HorizonParams) -> np.ndarray:
    """Closed-form reduced state on one or two sites, built without the 32-dim ket.

    ``subset`` may be given in any order (``"Bb"`` and ``"bB"`` are the same
    reduction); the matrix is returned in the global site order.
    """
    key = "".join(SITES[i] for i in parse_sites(subset))
    table = _oracle_table(p)
    if key not in table:
        raise ArgumentError(f"no closed form for subset {subset!r}")
    return table[key].astype(complex)
