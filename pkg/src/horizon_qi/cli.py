"""``horizon-qi`` command line: run a figure preset or a custom sweep.

Exit codes: 0 success, 2 usage error, 3 numerical contract violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from . import __version__
from .errors import ArgumentError, ConfigError, ContractError, DimensionError, DomainError
from .measures import MEASURES
from .roof import RoofConfig
from .sweep import DEFAULT_FIXED, PRESETS, Axis, SweepSpec, emit, preset, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("horizon_qi")


class UsageError(Exception):
    pass


class _Ordered(argparse.Action):
    """Record every option in command-line order so overrides apply left to right."""

    def __call__(self, parser, namespace, values, option_string=None):
        namespace.ops.append((self.dest, values if self.nargs != 0 else True))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="horizon-qi",
        description="Coherence, entanglement and mutual information of a GHZ-type "
        "Dirac state near a Schwarzschild horizon, tabulated over parameter sweeps.",
        epilog=f"presets: {', '.join(PRESETS)}",
    )
    p.set_defaults(ops=[])
    add = lambda *names, **kw: p.add_argument(*names, action=_Ordered, **kw)  # noqa: E731
    add("--preset", help="figure preset, e.g. fig2a or fig13d")
    add("--scenario", help="ABC, Abc, AbB, ABc or any 1-4 of the sites A,b,B,c,C (default ABC)")
    add("--sweep", metavar="AXIS:START:STOP:POINTS[:log]",
        help="swept axis (alpha, omega or th); repeat once for a 2-D grid")
    add("--alpha", type=float, help=f"fixed alpha (default {DEFAULT_FIXED['alpha']:.8f})")
    add("--omega", type=float, help="fixed mode frequency (default 1)")
    add("--th", type=float, help="fixed Hawking temperature (default 0.1)")
    add("--measures", help=f"comma-separated subset of {','.join(MEASURES)}")
    add("--restarts", type=int, help="convex-roof restarts per point (default 32)")
    add("--iters", type=int, help="iteration cap per restart (default 2000)")
    add("--seed", type=int, help="RNG seed of the restart stream (default 0)")
    add("--threads", type=int, help="worker processes (default 1)")
    add("--format", choices=("csv", "json"), help="output format (default csv)")
    add("--out", help="output file; '-' or absent writes to stdout")
    add("--fast", nargs=0, help="smoke-test budget: 8 restarts of 500 iterations")
    add("--gc-scale", type=float, dest="gc_scale",
        help="display factor applied to the global concurrence column (default 1)")
    p.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def parse_args(argv) -> SweepSpec:
    """Turn ``argv`` into a validated :class:`SweepSpec` (raises :class:`UsageError`)."""
    return _parse(argv)[0]


def _parse(argv) -> tuple[SweepSpec, bool]:
    ns = build_parser().parse_args(argv)
    ops = list(ns.ops)
    presets = [v for k, v in ops if k == "preset"]
    if len(presets) > 1:
        raise UsageError("--preset given more than once")
    try:
        if presets:
            base = preset(presets[0])
            fields = {f: getattr(base, f) for f in SweepSpec.__dataclass_fields__}
        else:
            fields = dict(scenario="ABC", axes=(), fixed=dict(DEFAULT_FIXED))
        fields["fixed"] = dict(fields["fixed"])
        roof = fields.pop("roof", RoofConfig())
        user_axes: list[Axis] | None = None
        for key, value in ops:
            if key == "preset":
                continue
            if key == "sweep":
                ax = Axis.parse(value)
                if user_axes is None:
                    user_axes = []
                if ax.name in (a.name for a in user_axes):
                    raise UsageError(f"axis {ax.name} swept twice")
                user_axes.append(ax)
                if len(user_axes) > 2:
                    raise UsageError("at most two axes may be swept")
                fields["axes"] = tuple(user_axes)
            elif key in ("alpha", "omega", "th"):
                fields["fixed"][key] = value
                fields["axes"] = tuple(a for a in fields["axes"] if a.name != key)
                if user_axes is not None:
                    user_axes = [a for a in user_axes if a.name != key]
            elif key == "scenario":
                fields["scenario"] = value
            elif key == "measures":
                fields["measures"] = tuple(m.strip() for m in value.split(",") if m.strip())
            elif key == "restarts":
                roof = replace(roof, restarts=value)
            elif key == "iters":
                roof = replace(roof, max_iters=value)
            elif key == "seed":
                roof = replace(roof, rng_seed=value)
            elif key == "fast":
                roof = replace(roof, restarts=8, max_iters=500)
            elif key == "threads":
                fields["threads"] = value
            elif key == "format":
                fields["fmt"] = value
            elif key == "out":
                fields["out"] = value
            elif key == "gc_scale":
                fields["gc_scale"] = value
        if not fields["axes"]:
            raise UsageError("nothing to sweep: give --preset or --sweep")
        return SweepSpec(roof=roof, **fields), ns.verbose
    except (ArgumentError, ConfigError, DomainError, DimensionError) as exc:
        raise UsageError(str(exc)) from None


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        spec, verbose = _parse(argv)
    except UsageError as exc:
        print(f"horizon-qi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")
    if spec.out not in (None, "-"):
        # fail before spending minutes on the sweep
        target_dir = os.path.dirname(os.path.abspath(spec.out))
        if not os.path.isdir(target_dir) or not os.access(target_dir, os.W_OK):
            print(f"horizon-qi: cannot write output: {target_dir} is not a writable directory",
                  file=sys.stderr)
            return EXIT_IO
    log.info("sweeping %s over %s (%d points)", spec.scenario, spec.swept, len(spec.grid()))
    try:
        table = run_sweep(spec)
    except ContractError as exc:
        print(f"horizon-qi: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    try:
        emit(table, spec.out, spec.fmt, stream=sys.stdout)
    except OSError as exc:
        print(f"horizon-qi: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("done in %.2f s", table.meta["wall_time_s"])
    return EXIT_OK
