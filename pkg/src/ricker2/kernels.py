"""Hot iteration kernels, numba-compiled when available.

Every function here is a tight scalar loop over numpy arrays and carries
``@njit`` from :mod:`ricker2._accel` (a no-op decorator when numba is
disabled via ``RICKER2_NO_NUMBA=1`` or unavailable).  The wrappers in
:mod:`ricker2.core`, :mod:`ricker2.factor` and friends own validation;
kernels assume clean inputs.

The factored-orbit kernel keeps both log t_n and log x_n in compensated
(hi, lo) double-double form.  The factor drift d*sigma grows linearly in
n for even periods, and the cofactor update cancels that drift against
log x_n; doing the cancellation in plain doubles loses ~eps*|d*sigma|
per step and, worse, routing the orbit through subnormal x values
injects their quantization back into the surviving subsequence.  The
compensated form keeps the internal state exact to ~1e-30 so only the
emitted samples are rounded.
"""

import math

import numpy as np

from ._accel import njit, prange


@njit(cache=True)
def direct_orbit(a, x_prev, x_curr, n_steps):
    """Iterate x[n+1] = x[n-1] * exp(a[n] - x[n-1] - x[n]).

    Returns the samples x[1] .. x[n_steps].  A zero x[n-1] propagates as
    an exact 0.0 so boundary orbits keep their zero slots bit-exact.
    """
    p = a.shape[0]
    out = np.empty(n_steps)
    xp = x_prev
    xc = x_curr
    for i in range(n_steps):
        an = a[i % p]
        if xp == 0.0:
            xn = 0.0
        else:
            xn = xp * math.exp(an - xp - xc)
        out[i] = xn
        xp = xc
        xc = xn
    return out


@njit(cache=True)
def factored_orbit(a, log_t0, log_x0, n_steps):
    """Iterate the factor/cofactor pair in compensated log space.

        t[n+1] = exp(a[n]) / t[n]
        x[n+1] = t[n+1] * x[n] * exp(-x[n])

    Returns (x samples, log t hi, log t lo) for n = 1 .. n_steps.  log t
    and log x are carried as double-double (hi, lo) pairs; samples are
    exp() of the log-x state, so they underflow gracefully to subnormals
    and 0.0 without contaminating the internal state.
    """
    p = a.shape[0]
    x_out = np.empty(n_steps)
    lt_hi_out = np.empty(n_steps)
    lt_lo_out = np.empty(n_steps)

    lt_hi = log_t0
    lt_lo = 0.0
    lx_hi = log_x0
    lx_lo = 0.0
    for i in range(n_steps):
        an = a[i % p]

        # lt <- an - lt  (two_sum plus carried compensation)
        s = an - lt_hi
        bv = s - an
        err = (an - (s - bv)) + ((-lt_hi) - bv)
        err -= lt_lo
        lt_hi_n = s + err
        lt_lo_n = err - (lt_hi_n - s)
        lt_hi = lt_hi_n
        lt_lo = lt_lo_n

        # x_n from the log-x state
        if lx_hi > -745.0:
            x = math.exp(lx_hi) * (1.0 + lx_lo)
        else:
            x = 0.0

        # lx <- lt + lx - x
        s = lt_hi + lx_hi
        bv = s - lt_hi
        err = (lt_hi - (s - bv)) + (lx_hi - bv)
        err += lt_lo + lx_lo
        s2 = s - x
        bv = s2 - s
        err2 = (s - (s2 - bv)) + ((-x) - bv)
        err2 += err
        lx_hi = s2 + err2
        lx_lo = err2 - (lx_hi - s2)

        if lx_hi > -745.0:
            x_out[i] = math.exp(lx_hi) * (1.0 + lx_lo)
        else:
            x_out[i] = 0.0
        lt_hi_out[i] = lt_hi
        lt_lo_out[i] = lt_lo
    return x_out, lt_hi_out, lt_lo_out


@njit(cache=True)
def ricker_orbit(alpha, y0, stride, offset, n_steps):
    """Iterate y[k+1] = y[k] * exp(alpha[(stride*k + offset) % len] - y[k]).

    stride=1, offset=0 walks the cycle directly (the first-order
    comparison equation); stride=2 with offset 0 or 1 produces the
    even/odd forcing subsequences used by boundary orbits.
    """
    q = alpha.shape[0]
    out = np.empty(n_steps)
    y = y0
    for k in range(n_steps):
        y = y * math.exp(alpha[(stride * k + offset) % q] - y)
        out[k] = y
    return out


@njit(cache=True)
def g_chain(ts, x0, n_apps):
    """Apply the maps g_k(x) = t_k x e^{-x} cyclically, recording each value.

    out[i] is the value after i+1 applications, i.e. the orbit of the
    composed return map unrolled one factor at a time.
    """
    q = ts.shape[0]
    out = np.empty(n_apps)
    x = x0
    for i in range(n_apps):
        x = ts[i % q] * x * math.exp(-x)
        out[i] = x
    return out


@njit(cache=True)
def f_pow_grid(ts, xs, omega):
    """Evaluate the omega-fold return map f^omega at every grid point."""
    q = ts.shape[0]
    n = xs.shape[0]
    out = np.empty(n)
    for j in range(n):
        x = xs[j]
        for _ in range(omega):
            for k in range(q):
                x = ts[k] * x * math.exp(-x)
        out[j] = x
    return out


@njit(cache=True)
def composed_derivative(ts, x0, n_rounds):
    """Derivative of f^n at x0 via the exact product formula.

        (f^n)'(x0) = (x_{nq} / x0) * prod_{j=0}^{nq-1} (1 - x_j)

    evaluated as (sign, log magnitude, x_{nq}); a factor hitting 1-x == 0
    is reported with sign 0 (the derivative is exactly zero).
    """
    q = ts.shape[0]
    x = x0
    sign = 1.0
    log_mag = 0.0
    for _ in range(n_rounds):
        for k in range(q):
            term = 1.0 - x
            if term == 0.0:
                sign = 0.0
            else:
                log_mag += math.log(abs(term))
                if term < 0.0:
                    sign = -sign
            x = ts[k] * x * math.exp(-x)
    return sign, log_mag, x


@njit(cache=True, parallel=True)
def scan_windows(a, x_prev_vals, x_curr_vals, burn_in, window):
    """Direct orbits for a grid of initial pairs; keep the final window.

    Cells are independent, so rows are filled in parallel; the output
    layout (row-major over the flattened cell list) does not depend on
    scheduling.
    """
    p = a.shape[0]
    n_cells = x_prev_vals.shape[0]
    out = np.empty((n_cells, window))
    total = burn_in + window
    for c in prange(n_cells):
        xp = x_prev_vals[c]
        xc = x_curr_vals[c]
        for i in range(total):
            an = a[i % p]
            if xp == 0.0:
                xn = 0.0
            else:
                xn = xp * math.exp(an - xp - xc)
            if i >= burn_in:
                out[c, i - burn_in] = xn
            xp = xc
            xc = xn
    return out
