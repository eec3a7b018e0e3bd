"""Parameter sweeps over (alpha, omega, T_H) and their CSV/JSON output.

A :class:`SweepSpec` fixes a scenario, one or two swept axes, fixed values
for the rest, the measures and the convex-roof budget.  :func:`run_sweep`
evaluates every grid point (in worker processes when ``threads > 1``) and
returns rows in grid order; :func:`emit` writes them atomically.

Column layout: swept axes, then ``qc, foc, gc, cf, tradeoff`` (whichever
were requested), then ``I_XY`` mutual informations, then diagnostics
(``rank`` and, per roof objective, ``*_median``, ``*_restarts``,
``*_converged``, ``*_upper_bound``).
"""

from __future__ import annotations

import io
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConfigError, DomainError
from .horizon import HorizonParams, Scenario
from .measures import MEASURES, evaluate_point, mi_pairs
from .roof import RoofConfig

__all__ = [
    "AXES",
    "Axis",
    "SweepSpec",
    "SweepTable",
    "PRESETS",
    "preset",
    "run_sweep",
    "emit",
    "format_value",
    "data_section",
    "with_points",
]

AXES = ("alpha", "omega", "th")
DEFAULT_FIXED = {"alpha": 1.0 / math.sqrt(2.0), "omega": 1.0, "th": 0.1}
SIG_DIGITS = 12
ENTANGLEMENT = ("qc", "foc", "gc", "cf", "tradeoff")


@dataclass(frozen=True)
class Axis:
    """One swept parameter: ``points`` values from ``start`` to ``stop`` inclusive."""

    name: str
    start: float
    stop: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.name not in AXES:
            raise ArgumentError(f"unknown axis {self.name!r}; expected one of {AXES}")
        if self.points < 1:
            raise ArgumentError("an axis needs at least one point")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ArgumentError("axis bounds must be finite")
        if self.points == 1 and self.start != self.stop:
            raise ArgumentError("a one-point axis needs start == stop")
        lo, hi = min(self.start, self.stop), max(self.start, self.stop)
        if self.log and lo <= 0:
            raise ArgumentError("log-scale axes need positive bounds")
        if self.name == "alpha" and not (0.0 <= lo and hi <= 1.0):
            raise DomainError("alpha must stay within [0, 1]")
        if self.name != "alpha" and lo <= 0:
            raise DomainError(f"{self.name} must be positive")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``axis:start:stop:points[:log]`` (``lin`` is also accepted)."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ArgumentError(f"malformed sweep {text!r}; expected axis:start:stop:points[:log]")
        name = parts[0].strip().lower()
        name = {"t": "th", "t_h": "th", "a": "alpha", "w": "omega"}.get(name, name)
        try:
            start, stop = float(parts[1]), float(parts[2])
            points = int(parts[3])
        except ValueError as exc:
            raise ArgumentError(f"malformed sweep {text!r}: {exc}") from None
        scale = parts[4].strip().lower() if len(parts) == 5 else "lin"
        if scale not in ("lin", "linear", "log"):
            raise ArgumentError(f"unknown scale {scale!r}; use lin or log")
        return cls(name, start, stop, points, scale == "log")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def __str__(self) -> str:
        tail = ":log" if self.log else ""
        return f"{self.name}:{self.start!r}:{self.stop!r}:{self.points}{tail}"


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to reproduce one table."""

    scenario: Scenario
    axes: tuple[Axis, ...]
    fixed: dict = field(default_factory=lambda: dict(DEFAULT_FIXED))
    measures: tuple[str, ...] = ENTANGLEMENT
    roof: RoofConfig = field(default_factory=RoofConfig)
    fmt: str = "csv"
    out: str | None = None
    threads: int = 1
    gc_scale: float = 1.0
    preset: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        object.__setattr__(self, "axes", tuple(self.axes))
        names = [a.name for a in self.axes]
        if not 1 <= len(names) <= 2:
            raise ArgumentError(f"sweep one or two axes, got {len(names)}")
        if len(set(names)) != len(names):
            raise ArgumentError(f"axis swept twice: {names}")
        fixed = {**DEFAULT_FIXED, **self.fixed}
        if set(fixed) != set(AXES):
            raise ArgumentError(f"fixed values must cover exactly {AXES}")
        # validate fixed values through the physics constructor
        HorizonParams(fixed["alpha"], fixed["omega"], fixed["th"])
        object.__setattr__(self, "fixed", fixed)
        ms = tuple(m for m in MEASURES if m in set(self.measures))
        if not ms or len(set(self.measures)) != len(ms):
            bad = sorted(set(self.measures) - set(MEASURES))
            raise ArgumentError(f"bad measure selection {list(self.measures)} {bad or ''}".strip())
        if set(ms) & set(ENTANGLEMENT) - {"qc"} and len(self.scenario.sites) != 3:
            raise ArgumentError("foc, gc, cf and tradeoff need a three-site scenario")
        if "mi" in ms and len(self.scenario.sites) < 2:
            raise ArgumentError("mutual information needs at least two sites")
        object.__setattr__(self, "measures", ms)
        if self.fmt not in ("csv", "json"):
            raise ArgumentError(f"format must be csv or json, got {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if not (self.gc_scale > 0 and math.isfinite(self.gc_scale)):
            raise ConfigError("gc_scale must be positive")

    @property
    def swept(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def grid(self) -> list[dict]:
        """Parameter dicts in row order; the first axis varies slowest."""
        pts = [{}]
        for ax in self.axes:
            pts = [{**p, ax.name: float(v)} for p in pts for v in ax.values()]
        return [{**self.fixed, **p} for p in pts]

    def columns(self) -> list[str]:
        cols = list(self.swept)
        wanted = set(self.measures)
        if "tradeoff" in wanted:
            wanted |= {"foc", "cf"}
        cols += [m for m in ENTANGLEMENT if m in wanted]
        if "mi" in self.measures:
            cols += [f"I_{p}" for p in mi_pairs(self.scenario)]
        roofs = [m for m in ("gc", "cf") if m in cols]
        if roofs:
            cols.append("rank")
        for m in roofs:
            cols += [f"{m}_median", f"{m}_restarts", f"{m}_converged", f"{m}_upper_bound"]
        return cols

    def describe(self) -> dict:
        """JSON-ready echo of the spec (output path and thread count excluded)."""
        return {
            "preset": self.preset,
            "scenario": self.scenario.name,
            "sweep": [str(a) for a in self.axes],
            "fixed": {k: v for k, v in self.fixed.items() if k not in self.swept},
            "measures": list(self.measures),
            "roof": asdict(self.roof),
            "gc_scale": self.gc_scale,
        }


@dataclass(frozen=True)
class SweepTable:
    columns: list[str]
    rows: list[list]
    meta: dict


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.{SIG_DIGITS}g}"


def _round(v):
    if isinstance(v, (bool, np.bool_, int, np.integer)):
        return int(v)
    return float(format_value(v))


def _evaluate_row(args) -> list:
    point, scenario, measures, roof, columns, gc_scale = args
    p = HorizonParams(point["alpha"], point["omega"], point["th"])
    rep = evaluate_point(p, scenario, roof, measures)
    values = {
        "qc": rep.qc_l1,
        "foc": rep.foc,
        "gc": None if rep.gc is None else rep.gc * gc_scale,
        "cf": rep.cf,
        "tradeoff": rep.tradeoff_sum,
        "rank": rep.rank,
        **point,
    }
    values.update({f"I_{k}": v for k, v in rep.mutual_info.items()})
    for name, res in (("cf", rep.cf_roof), ("gc", rep.gc_roof)):
        if res is not None:
            scale = gc_scale if name == "gc" else 1.0
            values[f"{name}_median"] = res.median * scale
            values[f"{name}_restarts"] = res.restarts_used
            values[f"{name}_converged"] = bool(res.converged)
            values[f"{name}_upper_bound"] = bool(res.upper_bound)
    return [_round(values[c]) for c in columns]


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate every grid point; rows follow grid order whatever the worker count."""
    cols = spec.columns()
    tasks = [
        (pt, spec.scenario.name, spec.measures, spec.roof, cols, spec.gc_scale) for pt in spec.grid()
    ]
    t0 = time.perf_counter()
    if spec.threads == 1 or len(tasks) == 1:
        rows = [_evaluate_row(t) for t in tasks]
    else:
        workers = min(spec.threads, len(tasks))
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_row, tasks, chunksize=chunk))
    meta = {
        "spec": spec.describe(),
        "seed": spec.roof.rng_seed,
        "version": _version(),
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "rows": len(rows),
    }
    return SweepTable(cols, rows, meta)


def _version() -> str:
    from . import __version__

    return __version__


def _render(table: SweepTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"meta": table.meta, "columns": table.columns, "rows": table.rows}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# horizon-qi {table.meta['version']}\n")
    buf.write(f"# spec: {json.dumps(table.meta['spec'], sort_keys=True)}\n")
    buf.write(f"# seed: {table.meta['seed']}\n")
    buf.write(f"# wall_time_s: {table.meta['wall_time_s']}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def emit(table: SweepTable, out: str | None = None, fmt: str = "csv", stream=None) -> str:
    """Write ``table`` to ``out`` (or ``stream`` when ``out`` is None or ``-``).

    Files are written to a temporary sibling and renamed into place, so an
    interrupted run never leaves a truncated table behind.  Returns the text.
    """
    if not table.rows:
        raise ArgumentError("refusing to emit an empty table")
    text = _render(table, fmt)
    if out in (None, "-"):
        if stream is not None:
            stream.write(text)
        return text
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(prefix=".partial-", dir=os.path.dirname(target))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return text


def data_section(text: str) -> str:
    """The CSV body without ``#`` provenance lines (what determinism compares)."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


# --- figure presets --------------------------------------------------------

_FIG_SCENARIO = {2: "ABC", 5: "Abc", 8: "AbB", 11: "ABc"}
_ALPHA = Axis("alpha", 0.0, 1.0, 201)
_TH = Axis("th", 0.01, 100.0, 200, log=True)
_OMEGA = Axis("omega", 0.1, 10.0, 200, log=True)
_PANEL_T = {"a": 0.01, "b": 1.0, "c": 10.0, "d": 100.0}


def _build_presets() -> dict[str, dict]:
    out = {}
    inv = 1.0 / math.sqrt(2.0)
    for base, sc in _FIG_SCENARIO.items():
        for panel, t in _PANEL_T.items():
            out[f"fig{base}{panel}"] = dict(
                scenario=sc, axes=(_ALPHA,), fixed={"omega": 1.0, "th": t}, measures=ENTANGLEMENT
            )
        out[f"fig{base + 1}a"] = dict(
            scenario=sc, axes=(_TH,), fixed={"alpha": inv, "omega": 1.0}, measures=ENTANGLEMENT
        )
        out[f"fig{base + 1}b"] = dict(
            scenario=sc, axes=(_OMEGA,), fixed={"alpha": inv, "th": 0.1}, measures=ENTANGLEMENT
        )
        mi = ("mi",)
        out[f"fig{base + 2}a"] = dict(scenario=sc, axes=(_ALPHA,), fixed={"omega": 1.0, "th": 0.01}, measures=mi)
        out[f"fig{base + 2}b"] = dict(scenario=sc, axes=(_ALPHA,), fixed={"omega": 1.0, "th": 10.0}, measures=mi)
        out[f"fig{base + 2}c"] = dict(scenario=sc, axes=(_TH,), fixed={"alpha": inv, "omega": 1.0}, measures=mi)
        out[f"fig{base + 2}d"] = dict(scenario=sc, axes=(_OMEGA,), fixed={"alpha": inv, "th": 0.1}, measures=mi)
    return out


_PRESET_FIELDS = _build_presets()
PRESETS = tuple(sorted(_PRESET_FIELDS, key=lambda n: (int(n[3:-1]), n[-1])))


def preset(name: str, **overrides) -> SweepSpec:
    """Expand a figure preset (``fig2a`` to ``fig13d``) into a :class:`SweepSpec`."""
    key = name.strip().lower()
    if key not in _PRESET_FIELDS:
        raise ArgumentError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    fields = dict(_PRESET_FIELDS[key])
    fields["fixed"] = {**DEFAULT_FIXED, **fields["fixed"]}
    fields.update(overrides)
    return SweepSpec(preset=key, **fields)


def with_points(spec: SweepSpec, points: Sequence[int]) -> SweepSpec:
    """Same spec with the axes resampled to ``points`` (one entry per axis)."""
    if len(points) != len(spec.axes):
        raise ArgumentError("one point count per swept axis")
    return replace(spec, axes=tuple(replace(a, points=n) for a, n in zip(spec.axes, points)))
