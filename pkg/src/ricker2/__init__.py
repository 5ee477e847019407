"""Periodically forced second-order Ricker equation.

Simulation and analysis of x[n+1] = x[n-1] * exp(a[n] - x[n-1] - x[n])
with periodic forcing: triangular factorization into two first-order
equations, closed-form factor solutions, interval-map orbit
decomposition, cycle/chaos classification, and basin scans.
"""

from ._accel import NUMBA_ENABLED
from .analysis import (
    BasinCell,
    BasinScanResult,
    BoundaryParity,
    Classification,
    CycleReport,
    CycleTableEntry,
    EvenCycleVerdict,
    SackerResult,
    ScanGrid,
    basin_scan,
    boundary_orbit,
    canonical_cycle,
    cycles_match,
    detect_cycle,
    sacker_check,
    verify_even_limit_cycle,
)
from .core import (
    InitialData,
    OrbitSource,
    OrbitTrace,
    ParameterCycle,
    iterate_direct,
    make_cycle,
    step_direct,
)
from .errors import (
    EmptyCycle,
    HypothesisViolationWarning,
    NoConvergence,
    NonFiniteState,
    NonFiniteValue,
    NonMinimalPeriod,
    NotPeriodicFactor,
    RickerError,
    RhoOutOfRange,
    UnboundedSubsequence,
    WindowTooShort,
)
from .factor import (
    FactorSolution,
    ParityClass,
    classify,
    for_initial,
    iterate_factored,
    iterate_factored_with_factors,
    s_partial,
    t_closed_form,
    t_log,
)
from .maps import (
    ComposedMap,
    comparison_fixed_point,
    DecompositionCheck,
    InvariantInterval,
    PeriodicPoint,
    TSubsequence,
    build_return_map,
    f_eval,
    f_iter,
    find_periodic_points,
    g_eval,
    h_eval,
    invariant_interval,
    map_derivative,
    map_derivative_log,
    orbit_decomposition_check,
    parity_step,
    parity_update_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "BasinCell",
    "BasinScanResult",
    "BoundaryParity",
    "Classification",
    "ComposedMap",
    "CycleReport",
    "CycleTableEntry",
    "DecompositionCheck",
    "EmptyCycle",
    "EvenCycleVerdict",
    "FactorSolution",
    "HypothesisViolationWarning",
    "InitialData",
    "InvariantInterval",
    "NoConvergence",
    "NonFiniteState",
    "NonFiniteValue",
    "NonMinimalPeriod",
    "NotPeriodicFactor",
    "OrbitSource",
    "OrbitTrace",
    "ParameterCycle",
    "ParityClass",
    "PeriodicPoint",
    "RickerError",
    "RhoOutOfRange",
    "SackerResult",
    "ScanGrid",
    "TSubsequence",
    "UnboundedSubsequence",
    "WindowTooShort",
    "basin_scan",
    "boundary_orbit",
    "build_return_map",
    "canonical_cycle",
    "classify",
    "comparison_fixed_point",
    "cycles_match",
    "detect_cycle",
    "f_eval",
    "f_iter",
    "find_periodic_points",
    "for_initial",
    "g_eval",
    "h_eval",
    "invariant_interval",
    "iterate_direct",
    "iterate_factored",
    "iterate_factored_with_factors",
    "make_cycle",
    "map_derivative",
    "map_derivative_log",
    "orbit_decomposition_check",
    "parity_step",
    "parity_update_pairs",
    "s_partial",
    "sacker_check",
    "step_direct",
    "t_closed_form",
    "t_log",
    "verify_even_limit_cycle",
]
