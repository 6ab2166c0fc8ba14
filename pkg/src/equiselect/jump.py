"""Particle simulation of the best-reply jump process.

Each particle sits on a joint profile and jumps to a neighbor at a rate
equal to the positive part of the moving player's noisy-cost drop, where
the noisy cost uses the ensemble's own smoothed empirical density.  The
ensemble therefore approximates the nonlinear density flow: its forward
equation is exactly the right-hand side evaluated by
:func:`equiselect.dynamics.fpe_rhs`, and the empirical trajectory converges
to the solved density at the usual 1/sqrt(particles) Monte Carlo rate.

Updates are synchronous with the law frozen per step: rates for one step
are computed from the pre-step empirical density.  Particles are
exchangeable, so the simulation advances per-profile occupation counts
with one multinomial draw per occupied profile; this is distributed
identically to advancing particles one by one and is independent of any
particle ordering.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .game import Game
from .graph import StrategyGraph
from .validation import check_beta, check_density, check_positive

MAX_EXIT_PROB = 0.1


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run parameters.

    ``step`` is nominal: a step whose worst-case total exit probability
    would exceed 0.1 is internally halved until safe.  ``smoothing`` is the
    additive count smoothing that keeps log densities finite at unvisited
    profiles.
    """

    horizon: float
    particles: int = 100_000
    step: float = 1e-3
    smoothing: float = 1.0
    seed: int = 0

    def __post_init__(self):
        check_positive(self.horizon, "horizon")
        check_positive(self.step, "step")
        check_positive(self.smoothing, "smoothing")
        if self.particles < 1:
            raise ValueError("particles must be >= 1")


@dataclass(frozen=True)
class Ensemble:
    """Particle population summarized by per-profile occupation counts."""

    counts: np.ndarray
    time: float
    rng: np.random.Generator
    smoothing: float

    @property
    def num_particles(self) -> int:
        return int(self.counts.sum())

    @property
    def density(self) -> np.ndarray:
        """Smoothed empirical density; strictly positive by construction."""
        alpha = self.smoothing
        m = self.num_particles
        return (self.counts + alpha) / (m + alpha * self.counts.size)

    @property
    def profiles(self) -> np.ndarray:
        """Per-particle profile indices (one representative ordering)."""
        return np.repeat(np.arange(self.counts.size), self.counts)


def make_ensemble(game: Game, config: SimConfig, rho0=None) -> Ensemble:
    """Deterministically spread ``particles`` over profiles following rho0.

    Counts are cumulative-rounded so they sum exactly to the particle
    budget; uniform rho0 is the default.
    """
    n = game.num_profiles
    if rho0 is None:
        rho0 = np.full(n, 1.0 / n)
    rho0 = check_density(rho0, n, name="rho0")
    quota = np.round(np.cumsum(rho0) * config.particles)
    counts = np.diff(quota, prepend=0.0).astype(np.int64)
    return Ensemble(
        counts=counts,
        time=0.0,
        rng=np.random.default_rng(config.seed),
        smoothing=config.smoothing,
    )


def _directed_rates(game: Game, graph: StrategyGraph, rho, beta):
    """Jump rate on every directed edge under noisy costs from ``rho``."""
    du = game.costs[graph.edge_player, graph.edge_tail] - game.costs[graph.edge_player, graph.edge_head]
    gap = du + beta * (np.log(rho[graph.edge_tail]) - np.log(rho[graph.edge_head]))
    return np.maximum(gap, 0.0), np.maximum(-gap, 0.0)  # tail->head, head->tail


def step_ensemble(game: Game, graph: StrategyGraph, ensemble: Ensemble,
                  beta, h) -> Ensemble:
    """Advance every particle by one synchronous jump step.

    Rates come from the pre-step smoothed density.  If the requested ``h``
    would give some profile a total exit probability above 0.1 the step is
    halved (repeatedly if needed) with a warning, and the ensemble clock
    advances by the time actually simulated.
    """
    beta = check_beta(beta)
    h = check_positive(h, "h")
    rho = ensemble.density
    fwd, bwd = _directed_rates(game, graph, rho, beta)
    n = graph.num_vertices
    total = np.bincount(graph.edge_tail, fwd, n) + np.bincount(graph.edge_head, bwd, n)
    worst = float(total.max()) if n else 0.0
    if worst * h > MAX_EXIT_PROB:
        safe = h
        while worst * safe > MAX_EXIT_PROB:
            safe *= 0.5
        warnings.warn(
            f"step {h:g} gives exit probability {worst * h:.3f} > {MAX_EXIT_PROB}; "
            f"using {safe:g} for this step"
        )
        h = safe

    # outgoing rate per directed adjacency slot, then one multinomial per
    # occupied profile (particles are exchangeable, so counts suffice)
    adj_rate = np.where(graph._adj_dir == 0, fwd[graph._adj_edge], bwd[graph._adj_edge])
    offsets = graph._adj_offsets
    counts = ensemble.counts
    new_counts = np.zeros_like(counts)
    rng = ensemble.rng
    for state in np.flatnonzero(counts):
        lo, hi = offsets[state], offsets[state + 1]
        if lo == hi:
            new_counts[state] += counts[state]
            continue
        heads = graph._adj_heads[lo:hi]
        rates = adj_rate[lo:hi]
        probs = np.append(rates * h, max(1.0 - rates.sum() * h, 0.0))
        draw = rng.multinomial(int(counts[state]), probs / probs.sum())
        np.add.at(new_counts, heads, draw[:-1])
        new_counts[state] += draw[-1]
    return replace(ensemble, counts=new_counts, time=ensemble.time + h)


def simulate(game: Game, graph: StrategyGraph, config: SimConfig, beta,
             rho0=None, sample_every: int = 1):
    """Run the ensemble to the horizon; returns (times, densities).

    The density rows are the smoothed empirical measures at the sampled
    steps (the initial state included).  Runs are reproducible from the
    seed alone.
    """
    beta = check_beta(beta)
    ens = make_ensemble(game, config, rho0)
    n_steps = int(round(config.horizon / config.step))
    times = [0.0]
    densities = [ens.density]
    for k in range(1, n_steps + 1):
        ens = step_ensemble(game, graph, ens, beta, config.step)
        if k % sample_every == 0 or k == n_steps:
            times.append(ens.time)
            densities.append(ens.density)
    return np.asarray(times), np.asarray(densities)
