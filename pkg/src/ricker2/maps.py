"""Interval-map machinery for orbits with a periodic factor sequence.

When the factor sequence {t[n]} is periodic with period q, the orbit is
generated by composing the one-dimensional maps

    g_k(x) = t[k] * x * exp(-x),      k = 0 .. q-1,

applied in index order: h_k = g_k o ... o g_0 takes x[-1] to x[k], and
the full-period composition f = h_{q-1} is the return map whose m-fold
iterates decompose the orbit as x[q*m + k] = h_k(f^m(x[-1])).

The derivative of f^n follows the exact product form

    (f^n)'(x0) = (x[n*q] / x0) * prod_{j=0}^{n*q-1} (1 - x[j]),

accumulated in sign + log magnitude so long products neither overflow
nor underflow.

The invariant interval [alpha, beta] of the even- or odd-indexed
subsequence comes from the comparison map f_cmp(x) = x * exp(rho - x -
gamma*x*exp(-x)) with rho = inf a_n and gamma = sup(t-subsequence) + 1:
beta = exp(sup a - 1), alpha = min{x*, f_cmp(beta), f_cmp(1)} where x*
is the unique root of rho - x - gamma*x*exp(-x) in (0, rho).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .core import ParameterCycle, iterate_direct
from .errors import NotPeriodicFactor, RhoOutOfRange, UnboundedSubsequence
from .factor import FactorSolution, t_closed_form

STABLE_TOL = 1e-9  # |multiplier| within this of 1 counts as neutral


@dataclass(frozen=True)
class ComposedMap:
    """One period of factor values t[0..q-1] in application order.

    The first map applied to x[-1] uses t[0], so h_0(x[-1]) = x[0];
    evaluating the whole composition one factor at a time equals
    sequential orbit iteration.
    """

    factor_cycle: np.ndarray
    cycle: ParameterCycle

    @property
    def q(self) -> int:
        return len(self.factor_cycle)

    @property
    def t0(self) -> float:
        return float(self.factor_cycle[0])


def build_return_map(fs: FactorSolution) -> ComposedMap:
    """Return map for a periodic factor class (q = 2p, or p on boundaries).

    The factor cycle is generated by the recursion t[k+1] = exp(a[k]) /
    t[k] rather than the closed form: the two agree to ~1e-15, but the
    recursion keeps the pairwise products t[k+1]*t[k] at exp(a[k]) to
    one rounding, so long compositions track direct orbit iteration
    instead of accumulating a systematic parameter offset.  Raises
    NotPeriodicFactor for the unbounded even-period classes.
    """
    if not fs.is_periodic:
        raise NotPeriodicFactor(
            f"factor class {fs.parity_class.value} has no periodic cycle"
        )
    q = fs.q
    ts = np.empty(q)
    ts[0] = fs.t0
    for k in range(q - 1):
        ts[k + 1] = math.exp(fs.cycle.value_at(k)) / ts[k]
    return ComposedMap(factor_cycle=ts, cycle=fs.cycle)


def g_eval(t_k: float, x: float) -> float:
    """g_k(x) = t_k * x * exp(-x); fixes 0 exactly."""
    return t_k * x * math.exp(-x)


def h_eval(cm: ComposedMap, k: int, x: float) -> float:
    """Prefix composition h_k = g_k o ... o g_0 applied to x."""
    if not 0 <= k < cm.q:
        raise ValueError(f"k must be in [0, {cm.q})")
    for j in range(k + 1):
        x = g_eval(cm.factor_cycle[j], x)
    return x


def f_eval(cm: ComposedMap, x: float) -> float:
    """The full return map f = h_{q-1}."""
    return h_eval(cm, cm.q - 1, x)


def f_iter(cm: ComposedMap, x: float, m: int) -> float:
    """f^m(x); f^0 is the identity."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return x
    chain = kernels.g_chain(cm.factor_cycle, float(x), m * cm.q)
    return float(chain[-1])


@dataclass(frozen=True)
class DecompositionCheck:
    """Outcome of comparing h_k o f^m against direct iteration."""

    ok: bool
    max_rel_gap: float
    first_mismatch: Optional[tuple[int, float, float]]
    steps_checked: int

    def __bool__(self) -> bool:
        return self.ok


def orbit_decomposition_check(
    cm: ComposedMap, x_init: float, m_max: int, rtol: float = 1e-9
) -> DecompositionCheck:
    """Check x[q*m + k] == h_k(f^m(x[-1])) against the direct path.

    x_init plays x[-1]; the matching initial pair for the direct path is
    (x[-1], g_0(x[-1])).  Comparison uses `rtol` relative with an
    absolute floor at the subnormal boundary, over all 0 <= m <= m_max
    and 0 <= k < q.  Returns diagnostics rather than raising.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    q = cm.q
    n_apps = q * (m_max + 1)
    # chain[i] = x[i] for i = 0 .. n_apps-1: the unrolled h_k o f^m values
    chain = kernels.g_chain(cm.factor_cycle, float(x_init), n_apps)
    x0 = float(chain[0])
    direct = iterate_direct(cm.cycle, (x_init, x0), n_apps - 1)
    ref = direct.with_initial()[1:]  # [x0, x1, ..., x_{n_apps-1}]

    gaps = np.abs(chain - ref)
    denom = np.maximum(np.abs(chain), np.abs(ref))
    bad = gaps > rtol * denom + 1e-300
    scale = np.where(denom > 0.0, denom, 1.0)
    rel = np.where(denom > 1e-300, gaps / scale, 0.0)
    max_rel = float(rel.max()) if len(rel) else 0.0
    if bad.any():
        j = int(np.argmax(bad))
        return DecompositionCheck(
            ok=False,
            max_rel_gap=max_rel,
            first_mismatch=(j, float(ref[j]), float(chain[j])),
            steps_checked=n_apps,
        )
    return DecompositionCheck(
        ok=True, max_rel_gap=max_rel, first_mismatch=None, steps_checked=n_apps
    )


def map_derivative_log(
    cm: ComposedMap, x0: float, n: int = 1
) -> tuple[float, float]:
    """(sign, log|(f^n)'(x0)|) via the product formula.

    sign 0.0 means the derivative is exactly zero (an orbit point hit
    the critical point x = 1); the log magnitude is -inf then.
    """
    if x0 <= 0.0:
        raise ValueError("x0 must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    sign, log_mag, x_final = kernels.composed_derivative(
        cm.factor_cycle, float(x0), int(n)
    )
    if sign == 0.0:
        return 0.0, -math.inf
    log_mag += math.log(x_final) - math.log(x0)
    return float(sign), float(log_mag)


def map_derivative(cm: ComposedMap, x0: float, n: int = 1) -> float:
    """Derivative of the n-fold return map at x0 (product formula)."""
    sign, log_mag = map_derivative_log(cm, x0, n)
    if sign == 0.0:
        return 0.0
    if log_mag > 700.0:
        return math.copysign(math.inf, sign)
    return sign * math.exp(log_mag)


class TSubsequence(enum.Enum):
    """Which parity subsequence of the factor values to bound.

    EVEN_INDEXED is {t[2n]} (it multiplies the odd-indexed orbit terms);
    ODD_INDEXED is {t[2n+1]} (it multiplies the even-indexed terms).
    """

    EVEN_INDEXED = "EvenIndexed"
    ODD_INDEXED = "OddIndexed"


def _subsequence_sup(fs: FactorSolution, subsequence: TSubsequence) -> float:
    offset = 0 if subsequence is TSubsequence.EVEN_INDEXED else 1
    if fs.is_periodic:
        q = fs.q
        if q % 2 == 1:
            # indices 2n+offset cover every residue mod q
            return max(fs.cycle_values)
        return max(fs.cycle_values[offset::2])
    # unbounded classes: one parity decays (bounded), the other diverges
    sigma = fs.cycle.sigma
    decaying = (
        TSubsequence.ODD_INDEXED if sigma > 0 else TSubsequence.EVEN_INDEXED
    )
    if subsequence is not decaying:
        raise UnboundedSubsequence(
            f"the {subsequence.value} factor subsequence diverges "
            f"(sigma = {sigma:g})"
        )
    # the decaying side attains its sup in the first period (drift term
    # only shrinks it afterwards)
    p = fs.cycle.period
    return max(t_closed_form(fs, n) for n in range(offset, p, 2))


@dataclass(frozen=True)
class InvariantInterval:
    """Attracting invariant interval for one parity subsequence."""

    alpha: float
    beta: float
    x_star: float
    gamma_bound: float
    rho: float


def comparison_fixed_point(
    rho: float, gamma: float, bisect_tol: float = 1e-12
) -> float:
    """Root x* of h(x) = rho - x - gamma*x*exp(-x) in (0, rho).

    h(0) = rho > 0 and h(rho) = -gamma*rho*exp(-rho) < 0 bracket the
    root, so plain bisection converges unconditionally; as gamma -> 0
    the root tends to rho.
    """
    if rho <= 0.0 or gamma <= 0.0:
        raise ValueError("need rho > 0 and gamma > 0")

    def h(x: float) -> float:
        return rho - x - gamma * x * math.exp(-x)

    lo, hi = 0.0, rho
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def invariant_interval(
    cycle: ParameterCycle,
    fs: FactorSolution,
    subsequence: TSubsequence,
    bisect_tol: float = 1e-12,
) -> InvariantInterval:
    """Compute [alpha, beta] for the selected parity subsequence.

    Requires rho = inf a_n in (0, 2) and a bounded t-subsequence.
    beta = exp(sup a - 1); alpha = min{x*, f_cmp(beta), f_cmp(1)} with
    f_cmp(x) = x * exp(rho - x - gamma*x*exp(-x)) and x* its interior
    fixed point from comparison_fixed_point.
    """
    rho = cycle.inf_a
    if not 0.0 < rho < 2.0:
        raise RhoOutOfRange(f"inf a_n = {rho:g} outside (0, 2)")
    gamma = _subsequence_sup(fs, subsequence) + 1.0
    x_star = comparison_fixed_point(rho, gamma, bisect_tol)

    def f_cmp(x: float) -> float:
        return x * math.exp(rho - x - gamma * x * math.exp(-x))

    beta = cycle.bound
    alpha = min(x_star, f_cmp(beta), f_cmp(1.0))
    return InvariantInterval(
        alpha=alpha, beta=beta, x_star=x_star, gamma_bound=gamma, rho=rho
    )


def parity_update_pairs(
    fs: FactorSolution, subsequence: TSubsequence
) -> tuple[tuple[float, float], ...]:
    """One period of (a, t) multipliers for a parity-subsequence update.

    With ODD_INDEXED factors the even-indexed orbit terms satisfy
    y[n+1] = y[n] * exp(a[2n+1] - y[n] - t[2n+1]*y[n]*exp(-y[n])); the
    odd-indexed terms use (a[2n+2], t[2n+2]).  Only available for
    periodic factor classes.
    """
    if not fs.is_periodic:
        raise NotPeriodicFactor(
            "parity updates need a periodic factor sequence"
        )
    q = fs.q
    n_pairs = q if q % 2 == 1 else q // 2
    base = 1 if subsequence is TSubsequence.ODD_INDEXED else 2
    pairs = []
    for n in range(n_pairs):
        idx = 2 * n + base
        pairs.append(
            (fs.cycle.value_at(idx), fs.cycle_values[idx % q])
        )
    return tuple(pairs)


def parity_step(y: float, a: float, t: float) -> float:
    """One parity-subsequence update y * exp(a - y - t*y*exp(-y))."""
    return y * math.exp(a - y - t * y * math.exp(-y))


@dataclass(frozen=True)
class PeriodicPoint:
    """A root of f^omega(x) = x with its multiplier."""

    x: float
    omega: int
    multiplier: float
    stability: str  # "stable" | "unstable" | "neutral"


def _classify_multiplier(m: float) -> str:
    if abs(m) < 1.0 - STABLE_TOL:
        return "stable"
    if abs(m) > 1.0 + STABLE_TOL:
        return "unstable"
    return "neutral"


def _roots_of_f_pow(
    cm: ComposedMap,
    omega: int,
    lo: float,
    hi: float,
    grid_size: int,
) -> list[float]:
    xs = np.linspace(lo, hi, grid_size)
    fx = kernels.f_pow_grid(cm.factor_cycle, xs, omega)
    res = fx - xs
    roots: list[float] = []

    def refine(a: float, b: float, fa: float) -> float:
        for _ in range(80):
            mid = 0.5 * (a + b)
            if b - a <= 1e-13 * (1.0 + mid):
                break
            fm = f_iter(cm, mid, omega) - mid
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        return 0.5 * (a + b)

    for i in range(grid_size - 1):
        if res[i] == 0.0:
            roots.append(float(xs[i]))
        elif res[i] * res[i + 1] < 0.0:
            roots.append(refine(float(xs[i]), float(xs[i + 1]), float(res[i])))
    if res[-1] == 0.0:
        roots.append(float(xs[-1]))
    # merge near-duplicates from adjacent brackets
    merged: list[float] = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-10 * (1.0 + r):
            merged.append(r)
    return merged


def find_periodic_points(
    cm: ComposedMap,
    omega: int,
    interval: Union[tuple[float, float], None] = None,
    grid_size: int = 2048,
) -> list[PeriodicPoint]:
    """Periodic points of minimal period omega for the return map.

    Grid-scans f^omega(x) - x for sign changes over the interval
    (default (1e-6, beta]), refines each bracket by bisection, drops
    roots within 1e-8 of a root of f^d - x for any proper divisor d, and
    attaches the product-formula multiplier.  Points are returned in
    ascending order; the list may be empty.
    """
    if omega < 1:
        raise ValueError("omega must be >= 1")
    if interval is None:
        interval = (1e-6, cm.cycle.bound)
    lo, hi = interval
    if not 0.0 < lo < hi:
        raise ValueError("need 0 < lo < hi")

    lower: list[float] = []
    for d in range(1, omega):
        if omega % d == 0:
            lower.extend(_roots_of_f_pow(cm, d, lo, hi, grid_size))
    points = []
    for r in _roots_of_f_pow(cm, omega, lo, hi, grid_size):
        if any(abs(r - s) < 1e-8 for s in lower):
            continue
        m = map_derivative(cm, r, omega)
        points.append(
            PeriodicPoint(
                x=r, omega=omega, multiplier=m,
                stability=_classify_multiplier(m),
            )
        )
    return points
