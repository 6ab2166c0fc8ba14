"""Compiled inner loops for the density flow on the strategy graph.

Everything here operates on flat edge arrays (tail index, head index,
per-edge cost difference) so the same kernels serve every game size.
Kernels are deliberately scalar-looped: state spaces are small and numba
turns these loops into tight machine code, which matters because a single
stationary solve can take millions of accepted steps.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# _advance status codes
REACHED_END = 0
STATIONARY = 1
STEP_UNDERFLOW = 2

DT_MIN = 1e-14
MASS_TOL = 1e-12
MAX_JUMP = 0.2


@njit(cache=True)
def _rhs_fill(rho, beta, tails, heads, du, lg, out):
    """Net probability inflow per vertex; one pass over undirected edges.

    Each edge contributes one flux value scattered with opposite signs to
    its endpoints, so the components of `out` always cancel pairwise.
    `lg` is scratch space for per-vertex log densities.
    """
    out[:] = 0.0
    if beta > 0.0:
        for i in range(rho.shape[0]):
            lg[i] = np.log(rho[i])
    for k in range(tails.shape[0]):
        a = tails[k]
        b = heads[k]
        d = du[k]
        if beta > 0.0:
            d += beta * (lg[a] - lg[b])
        if d > 0.0:
            f = d * rho[a]
        elif d < 0.0:
            f = d * rho[b]
        else:
            continue
        out[a] -= f
        out[b] += f


@njit(cache=True)
def _rk4_fill(rho, beta, tails, heads, du, dt, k1, y, k2, k3, k4, lg, out):
    """One classical RK4 step into `out`; False if a stage leaves the
    domain where the right-hand side is defined (log of a nonpositive
    density)."""
    n = rho.shape[0]
    need_pos = beta > 0.0
    half = 0.5 * dt
    for i in range(n):
        y[i] = rho[i] + half * k1[i]
        if need_pos and y[i] <= 0.0:
            return False
    _rhs_fill(y, beta, tails, heads, du, lg, k2)
    for i in range(n):
        y[i] = rho[i] + half * k2[i]
        if need_pos and y[i] <= 0.0:
            return False
    _rhs_fill(y, beta, tails, heads, du, lg, k3)
    for i in range(n):
        y[i] = rho[i] + dt * k3[i]
        if need_pos and y[i] <= 0.0:
            return False
    _rhs_fill(y, beta, tails, heads, du, lg, k4)
    sixth = dt / 6.0
    for i in range(n):
        out[i] = rho[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return True


@njit(cache=True)
def _valid_state(x, strict):
    for i in range(x.shape[0]):
        if strict:
            if x[i] <= 0.0:
                return False
        elif x[i] < 0.0:
            return False
    return True


@njit(cache=True)
def _advance(rho, beta, tails, heads, du, t, t_end, dt,
             tol_stat, floor, atol, rtol, resid_frac, stop_on_stationary):
    """Advance `rho` in place from t to t_end (or stationarity).

    Step-doubling error control on top of RK4: a full step is compared
    against two half steps, the halved result is kept, and the step is
    rejected (dt halved) on error overflow, loss of positivity, or a mass
    defect beyond MASS_TOL.  A step passes on either of two error gauges:
    the usual atol/rtol mixed scale, or `resid_frac` times the current
    residual times dt.  The second gauge keeps the injected step error
    strictly below the decaying signal near a fixed point, so the residual
    can always fall below tol_stat instead of locking into tolerance-sized
    chatter.  Accepted states are clamped to `floor` (only when beta > 0,
    where the flow preserves the interior) and renormalised.

    Returns (t, dt, residual, status, n_steps, n_rejected).
    """
    n = rho.shape[0]
    v = np.empty(n)
    vh = np.empty(n)
    lg = np.empty(n)
    y = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    full = np.empty(n)
    h1 = np.empty(n)
    h2 = np.empty(n)
    strict = beta > 0.0
    n_steps = 0
    n_rej = 0
    # absorb float rounding of t across many accumulated steps
    t_done = t_end - 4e-15 * (1.0 + abs(t_end))
    _rhs_fill(rho, beta, tails, heads, du, lg, v)
    while True:
        res = 0.0
        for i in range(n):
            a = abs(v[i])
            if a > res:
                res = a
        if stop_on_stationary and res < tol_stat:
            return t, dt, res, STATIONARY, n_steps, n_rej
        if t >= t_done:
            return t_end, dt, res, REACHED_END, n_steps, n_rej
        if dt > t_end - t:
            dt = t_end - t
        err = 0.0
        while True:
            ok = _rk4_fill(rho, beta, tails, heads, du, dt, v, y, k2, k3, k4, lg, full)
            accepted = False
            if ok:
                ok = _rk4_fill(rho, beta, tails, heads, du, 0.5 * dt, v, y, k2, k3, k4, lg, h1)
                if ok and _valid_state(h1, strict):
                    _rhs_fill(h1, beta, tails, heads, du, lg, vh)
                    ok = _rk4_fill(h1, beta, tails, heads, du, 0.5 * dt, vh, y, k2, k3, k4, lg, h2)
                    if ok and _valid_state(h2, strict):
                        err_mixed = 0.0
                        raw = 0.0
                        jump = 0.0
                        mass = 0.0
                        for i in range(n):
                            e_abs = abs(h2[i] - full[i]) / 15.0
                            if e_abs > raw:
                                raw = e_abs
                            scale = atol + rtol * max(abs(h2[i]), abs(rho[i]))
                            e = e_abs / scale
                            if e > err_mixed:
                                err_mixed = e
                            j = abs(h2[i] - rho[i])
                            if j > jump:
                                jump = j
                            mass += h2[i]
                        err_resid = raw / (resid_frac * res * dt + 1e-300)
                        err = min(err_mixed, err_resid)
                        if err <= 1.0 and jump <= MAX_JUMP and abs(mass - 1.0) <= MASS_TOL:
                            accepted = True
            if accepted:
                break
            dt *= 0.5
            n_rej += 1
            if dt < DT_MIN:
                return t, dt, res, STEP_UNDERFLOW, n_steps, n_rej
        if strict:
            for i in range(n):
                if h2[i] < floor:
                    h2[i] = floor
        s = 0.0
        for i in range(n):
            s += h2[i]
        for i in range(n):
            rho[i] = h2[i] / s
        t += dt
        n_steps += 1
        if err > 0.0:
            fac = 0.9 * err ** -0.2
            if fac > 2.0:
                fac = 2.0
            elif fac < 0.3:
                fac = 0.3
        else:
            fac = 2.0
        dt *= fac
        _rhs_fill(rho, beta, tails, heads, du, lg, v)


def warm_up():
    """Trigger JIT compilation on a toy system so timed runs stay fast."""
    tails = np.array([0], dtype=np.int64)
    heads = np.array([1], dtype=np.int64)
    du = np.array([1.0])
    rho = np.array([0.5, 0.5])
    out = np.empty(2)
    lg = np.empty(2)
    _rhs_fill(rho, 0.5, tails, heads, du, lg, out)
    _advance(rho, 0.5, tails, heads, du, 0.0, 1e-3, 1e-4,
             1e-12, 1e-13, 1e-12, 1e-9, 0.02, True)
