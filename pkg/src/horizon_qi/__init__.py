"""Quantum coherence, multipartite entanglement and mutual information of a
GHZ-type Dirac state whose modes straddle a Schwarzschild event horizon."""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    ConfigError,
    ContractError,
    DimensionError,
    DomainError,
    HorizonQIError,
)
from .horizon import (
    ABC,
    NAMED_SCENARIOS,
    SITES,
    AbB,
    ABc,
    Abc,
    HorizonParams,
    Scenario,
    appendix_oracle,
    build_pentapartite_state,
    derive_coefficients,
    reduce_sites,
    reduce_to_scenario,
)
from .linalg import (
    DEFAULT_TOL,
    Spectrum,
    Tolerances,
    eigh,
    partial_trace,
    purity,
    tensor,
    von_neumann_entropy,
)
from .measures import (
    MeasureReport,
    cf_pure,
    concurrence_one_vs_rest,
    evaluate_point,
    foc_single,
    foc_tripartite,
    gc_pure,
    mutual_information,
    qc_l1,
)
from .roof import RoofConfig, RoofResult, convex_roof
from .sweep import PRESETS, Axis, SweepSpec, emit, preset, run_sweep
