"""The density flow on the product strategy graph and its solvers.

The state is a probability vector over joint profiles.  Mass moves along
each edge from the endpoint with the higher noisy cost (own cost plus
beta times the log density) to the lower one, at a rate equal to that gap,
weighted by the upwind endpoint's mass:

    d rho(x)/dt = sum_i sum_{y in N_i(x)} [c_i(y) - c_i(x)]_+ rho(y)
                - sum_i sum_{y in N_i(x)} [c_i(x) - c_i(y)]_+ rho(x),

with c_i(z) = u_i(z) + beta * log rho(z).  At beta = 0 the log terms are
dropped entirely, so boundary densities are legal and the flow is linear
with constant rate matrix (see :func:`rate_matrix_beta0`).

Fluxes are assembled once per undirected edge and scattered with opposite
signs, so the right-hand side conserves mass by construction rather than
by cancellation of two independently rounded sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .game import Game
from .graph import StrategyGraph
from .validation import check_beta, check_density, check_positive, uniform_density


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and limits for time integration.

    ``tol_stat`` is the stationarity threshold on the sup norm of the
    right-hand side; ``pos_floor`` is the positivity guard applied to
    interior (beta > 0) trajectories; ``atol``/``rtol`` weight the
    step-doubling error estimate.
    """

    beta: float = 1.0
    dt_init: float = 1e-3
    tol_stat: float = 1e-10
    t_max: float = 1e4
    pos_floor: float = 1e-13
    atol: float = 1e-12
    rtol: float = 1e-9
    resid_frac: float = 0.1

    def __post_init__(self):
        check_beta(self.beta)
        for name in ("dt_init", "tol_stat", "t_max", "pos_floor", "atol", "rtol",
                     "resid_frac"):
            check_positive(getattr(self, name), name)


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped density samples plus how the integration ended.

    ``reason`` is one of ``"stationary"`` (sup-norm residual dropped below
    the stationarity tolerance), ``"t_max"`` or ``"step_underflow"``; in
    the last case the trajectory holds the partial run up to the failure.
    """

    times: np.ndarray
    densities: np.ndarray
    reason: str
    residual: float
    n_steps: int
    n_rejected: int

    @property
    def terminal(self) -> np.ndarray:
        return self.densities[-1]

    @property
    def final_time(self) -> float:
        return float(self.times[-1])


class ConvergenceError(RuntimeError):
    """A stationary solve terminated without reaching the tolerance.

    Carries the last density and residual so callers can inspect or keep
    the partial result.
    """

    def __init__(self, message, density, residual, beta, reason):
        super().__init__(message)
        self.density = density
        self.residual = residual
        self.beta = beta
        self.reason = reason


@dataclass(frozen=True)
class _EdgeSystem:
    tails: np.ndarray
    heads: np.ndarray
    du: np.ndarray
    size: int = field(default=0)


def _edge_system(game: Game, graph: StrategyGraph) -> _EdgeSystem:
    if graph.num_vertices != game.num_profiles:
        raise ValueError("graph does not match game")
    du = game.costs[graph.edge_player, graph.edge_tail] - game.costs[graph.edge_player, graph.edge_head]
    return _EdgeSystem(
        tails=np.ascontiguousarray(graph.edge_tail, dtype=np.int64),
        heads=np.ascontiguousarray(graph.edge_head, dtype=np.int64),
        du=np.ascontiguousarray(du, dtype=float),
        size=graph.num_vertices,
    )


def upwind_weight(gap: float, rho_x: float, rho_y: float) -> float:
    """Edge weight of the flux: mass is taken from the upwind side.

    ``gap`` is the noisy-cost difference across the edge, oriented x to y.
    The tie case averages, which keeps the weight inside
    [min(rho_x, rho_y), max(rho_x, rho_y)] and symmetric under edge
    reversal; it never contributes to the flow since the rate is zero
    there.
    """
    if rho_x < 0 or rho_y < 0:
        raise ValueError("densities must be nonnegative")
    if gap > 0:
        return rho_x
    if gap < 0:
        return rho_y
    return 0.5 * (rho_x + rho_y)


def fpe_rhs(game: Game, graph: StrategyGraph, rho, beta) -> np.ndarray:
    """Right-hand side of the density flow at state ``rho``.

    Requires strictly positive ``rho`` when beta > 0 (log densities enter
    the rates); at beta = 0 any point of the simplex is legal.
    """
    beta = check_beta(beta)
    rho = check_density(rho, game.num_profiles, interior=beta > 0)
    sys = _edge_system(game, graph)
    out = np.empty(sys.size)
    _kernels._rhs_fill(rho, beta, sys.tails, sys.heads, sys.du, out)
    return out


def rate_matrix_beta0(game: Game, graph: StrategyGraph) -> np.ndarray:
    """Constant rate matrix Q of the zero-noise flow, d rho/dt = Q rho.

    Column y holds the jump rates out of profile y: Q[x, y] for adjacent x
    is the positive part of the moving player's cost drop from y to x, and
    the diagonal entry makes every column sum to zero.
    """
    sys = _edge_system(game, graph)
    n = sys.size
    Q = np.zeros((n, n))
    fwd = np.maximum(sys.du, 0.0)    # rate tail -> head
    bwd = np.maximum(-sys.du, 0.0)   # rate head -> tail
    np.add.at(Q, (sys.heads, sys.tails), fwd)
    np.add.at(Q, (sys.tails, sys.heads), bwd)
    np.subtract.at(Q, (sys.tails, sys.tails), fwd)
    np.subtract.at(Q, (sys.heads, sys.heads), bwd)
    return Q


def gibbs_measure(phi, beta) -> np.ndarray:
    """Normalized exp(-phi/beta), computed with the min shifted out first."""
    beta = check_beta(beta, allow_zero=False)
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 1 or not np.all(np.isfinite(phi)):
        raise ValueError("phi must be a finite vector")
    w = np.exp(-(phi - phi.min()) / beta)
    return w / w.sum()


_REASONS = {
    _kernels.REACHED_END: "t_max",
    _kernels.STATIONARY: "stationary",
    _kernels.STEP_UNDERFLOW: "step_underflow",
}


def integrate(game: Game, graph: StrategyGraph, rho0, config: SolverConfig,
              sample_dt: float | None = None) -> Trajectory:
    """Integrate the flow from ``rho0`` until stationarity or t_max.

    Time stepping is classical RK4 under step-doubling control: a step is
    rejected and halved when the doubled-resolution solution disagrees
    beyond tolerance, when positivity would be lost, or when the mass
    defect exceeds 1e-12.  Accepted interior states are clamped at
    ``config.pos_floor`` and renormalized, so beta > 0 trajectories stay
    strictly positive on the simplex.

    ``sample_dt`` adds intermediate samples on an exact time grid (the
    integrator lands on grid points, it does not interpolate); by default
    only the initial and terminal states are recorded.
    """
    beta = config.beta
    rho = check_density(rho0, game.num_profiles, interior=beta > 0, name="rho0")
    sys = _edge_system(game, graph)
    if sample_dt is not None:
        check_positive(sample_dt, "sample_dt")

    times = [0.0]
    samples = [rho.copy()]
    t = 0.0
    dt = min(config.dt_init, config.t_max)
    n_steps = 0
    n_rej = 0
    status = _kernels.REACHED_END
    res = np.inf
    while True:
        t_stop = config.t_max if sample_dt is None else min(t + sample_dt, config.t_max)
        # guard against grid points collapsing onto t_max
        if t_stop <= t:
            break
        t, dt, res, status, steps, rej = _kernels._advance(
            rho, beta, sys.tails, sys.heads, sys.du, t, t_stop, dt,
            config.tol_stat, config.pos_floor, config.atol, config.rtol,
            config.resid_frac, True,
        )
        n_steps += steps
        n_rej += rej
        times.append(t)
        samples.append(rho.copy())
        if status != _kernels.REACHED_END or t >= config.t_max:
            break
    # collapse duplicate sample at an exact stationarity-on-grid stop
    if len(times) > 1 and times[-1] == times[-2]:
        times.pop()
        samples.pop()
    return Trajectory(
        times=np.asarray(times),
        densities=np.asarray(samples),
        reason=_REASONS[status],
        residual=float(res),
        n_steps=n_steps,
        n_rejected=n_rej,
    )


def stationary_measure(game: Game, graph: StrategyGraph, beta, rho0=None,
                       config: SolverConfig | None = None) -> np.ndarray:
    """Stationary density at noise level ``beta`` > 0.

    Integrates from ``rho0`` (uniform by default) until the sup-norm
    residual falls below ``config.tol_stat``.  Raises
    :class:`ConvergenceError`, carrying the partial result, if the horizon
    or step control gives out first.  For potential games the result is the
    Gibbs measure of the potential, independent of ``rho0``.
    """
    beta = check_beta(beta, allow_zero=False)
    if config is None:
        config = SolverConfig(beta=beta)
    elif config.beta != beta:
        config = SolverConfig(beta=beta, dt_init=config.dt_init, tol_stat=config.tol_stat,
                              t_max=config.t_max, pos_floor=config.pos_floor,
                              atol=config.atol, rtol=config.rtol,
                              resid_frac=config.resid_frac)
    if rho0 is None:
        rho0 = uniform_density(game.num_profiles)
    traj = integrate(game, graph, rho0, config)
    if traj.reason != "stationary":
        raise ConvergenceError(
            f"no stationary measure within t_max={config.t_max:g} at beta={beta:g} "
            f"(reason={traj.reason}, residual={traj.residual:.3e})",
            density=traj.terminal, residual=traj.residual, beta=beta, reason=traj.reason,
        )
    return traj.terminal
