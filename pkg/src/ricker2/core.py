"""Parameter cycles, initial data, and direct second-order iteration.

The model equation is

    x[n+1] = x[n-1] * exp(a[n] - x[n-1] - x[n]),  n = 0, 1, 2, ...

with a[n] read cyclically from a finite parameter cycle of minimal
period p.  Index convention, shared by every module in this package:
an orbit starts from the pair (x[-1], x[0]); the step that produces
x[n+1] consumes a[n], so the first computed sample is

    x[1] = x[-1] * exp(a[0] - x[-1] - x[0]).

This pins the derived factor sequence to t[1] = exp(a[0]) / t[0].

For positive initial data every sample is positive and bounded above by
exp(sup a - 1); zero is absorbing, which is what boundary orbits (one
parity identically zero) rely on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import EmptyCycle, NonFiniteState, NonFiniteValue, NonMinimalPeriod


class OrbitSource(enum.Enum):
    """Which iteration path produced a trace."""

    DIRECT = "Direct"
    FACTORED = "Factored"
    BOUNDARY_EVEN = "BoundaryEven"
    BOUNDARY_ODD = "BoundaryOdd"


@dataclass(frozen=True)
class ParameterCycle:
    """One minimal period of the forcing sequence, with derived constants.

    sigma is the alternating sum -a[0] + a[1] - ... +- a[p-1], accumulated
    strictly left to right so it is reproducible bit for bit.  Its sign
    (for even p) decides which parity of the orbit decays.
    """

    values: tuple[float, ...]
    period: int
    sigma: float
    sup_a: float
    inf_a: float

    def value_at(self, n: int) -> float:
        """Forcing value a[n] for any n >= 0."""
        return self.values[n % self.period]

    @property
    def bound(self) -> float:
        """Upper bound exp(sup a - 1) on positive orbits."""
        return math.exp(self.sup_a - 1.0)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


def make_cycle(values: Sequence[float]) -> ParameterCycle:
    """Validate one period of forcing values and derive sigma and sup a.

    Raises EmptyCycle, NonFiniteValue, or NonMinimalPeriod (reporting the
    proper divisor that already reproduces the values; minimality is
    checked with exact float equality since inputs are user literals).
    """
    vals = tuple(float(v) for v in values)
    if not vals:
        raise EmptyCycle("parameter cycle needs at least one value")
    for v in vals:
        if not math.isfinite(v):
            raise NonFiniteValue(f"parameter value {v!r} is not finite")
    p = len(vals)
    for d in range(1, p):
        if p % d == 0 and all(vals[i] == vals[i % d] for i in range(p)):
            raise NonMinimalPeriod(d)
    sigma = 0.0
    sign = -1.0
    for v in vals:
        sigma = sigma + sign * v
        sign = -sign
    return ParameterCycle(
        values=vals, period=p, sigma=sigma, sup_a=max(vals), inf_a=min(vals)
    )


@dataclass(frozen=True)
class InitialData:
    """An initial pair (x[-1], x[0]) with the derived factor seed t[0].

    t0 = x[0] / (x[-1] * exp(-x[-1])) when both coordinates are positive;
    boundary pairs (one coordinate zero) carry t0 = None and are only
    meaningful to the direct and boundary iteration paths.
    """

    x_prev: float
    x_curr: float
    t0: Union[float, None] = field(init=False)

    def __post_init__(self):
        for name, v in (("x_prev", self.x_prev), ("x_curr", self.x_curr)):
            if not math.isfinite(v):
                raise NonFiniteValue(f"{name} = {v!r} is not finite")
            if v < 0.0:
                raise ValueError(f"{name} must be >= 0, got {v!r}")
        if self.x_prev > 0.0 and self.x_curr > 0.0:
            t0 = self.x_curr / (self.x_prev * math.exp(-self.x_prev))
        else:
            t0 = None
        object.__setattr__(self, "t0", t0)

    @property
    def is_interior(self) -> bool:
        return self.t0 is not None


InitialLike = Union[InitialData, tuple]


def as_initial(initial: InitialLike) -> InitialData:
    if isinstance(initial, InitialData):
        return initial
    x_prev, x_curr = initial
    return InitialData(float(x_prev), float(x_curr))


@dataclass(frozen=True)
class OrbitTrace:
    """A finite orbit segment x[1] .. x[N] plus its initial pair."""

    initial: InitialData
    samples: np.ndarray
    source: OrbitSource

    def __len__(self) -> int:
        return len(self.samples)

    def value_at(self, n: int) -> float:
        """x[n] for -1 <= n <= len(samples)."""
        if n == -1:
            return self.initial.x_prev
        if n == 0:
            return self.initial.x_curr
        return float(self.samples[n - 1])

    def with_initial(self) -> np.ndarray:
        """The full array [x[-1], x[0], x[1], ..., x[N]]."""
        return np.concatenate(
            ([self.initial.x_prev, self.initial.x_curr], self.samples)
        )

    def parity_split(self, window: int) -> tuple[np.ndarray, np.ndarray]:
        """(even-indexed, odd-indexed) values among the last `window` samples.

        Parity refers to the orbit index n of each sample, not its
        position in the window.
        """
        w = self.samples[-window:]
        start = len(self.samples) - len(w) + 1  # orbit index of w[0]
        idx = np.arange(start, start + len(w))
        return w[idx % 2 == 0], w[idx % 2 == 1]


def step_direct(x_prev: float, x_curr: float, a_n: float) -> float:
    """One application of x[n+1] = x[n-1] * exp(a[n] - x[n-1] - x[n]).

    Returns exactly 0.0 when x_prev == 0 (zero is absorbing).  NaN input
    raises NonFiniteState; negative states are rejected.
    """
    for v in (x_prev, x_curr, a_n):
        if math.isnan(v) or math.isinf(v):
            raise NonFiniteState(f"non-finite input {v!r} to step_direct")
    if x_prev < 0.0 or x_curr < 0.0:
        raise ValueError("states must be >= 0")
    if x_prev == 0.0:
        return 0.0
    return x_prev * math.exp(a_n - x_prev - x_curr)


def iterate_direct(
    cycle: ParameterCycle, initial: InitialLike, n_steps: int
) -> OrbitTrace:
    """Iterate the second-order equation for n_steps samples.

    For positive initial data every sample lies in (0, exp(sup a - 1));
    boundary pairs keep exact zeros on their zero parity.  Identical
    inputs produce bit-identical traces.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    init = as_initial(initial)
    samples = kernels.direct_orbit(
        cycle.array, init.x_prev, init.x_curr, int(n_steps)
    )
    if not np.all(np.isfinite(samples)):
        raise NonFiniteState(
            "orbit left the representable range; check the inputs"
        )
    return OrbitTrace(initial=init, samples=samples, source=OrbitSource.DIRECT)
