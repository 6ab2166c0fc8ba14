"""Noise annealing and the induced ranking of Nash equilibria.

The limit measure of the flow as the noise level goes to zero assigns each
pure equilibrium a probability; sorting by that mass ranks the equilibria.
The double limit (time to infinity, then noise to zero) is realized by a
geometric beta schedule whose stationary solves are warm-started from the
previous level, stopping once consecutive stationary measures agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ConvergenceError, SolverConfig, stationary_measure
from .game import Game, NashSet, enumerate_pure_ne
from .graph import StrategyGraph, index_profile
from .validation import check_positive, uniform_density

SUPPORT_FLOOR = 1e-8


@dataclass(frozen=True)
class AnnealingSchedule:
    """Geometric noise schedule beta_k = beta_start * decay**k.

    The schedule stops at ``beta_min`` or as soon as consecutive stationary
    measures differ by less than ``tol_lim`` in sup norm, whichever comes
    first.
    """

    beta_start: float = 1.0
    decay: float = 0.5
    beta_min: float = 1e-4
    tol_lim: float = 1e-4

    def __post_init__(self):
        check_positive(self.beta_min, "beta_min")
        check_positive(self.tol_lim, "tol_lim")
        if not self.beta_start > self.beta_min:
            raise ValueError("beta_start must exceed beta_min")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")

    def betas(self):
        beta = self.beta_start
        while beta >= self.beta_min:
            yield beta
            beta *= self.decay


@dataclass(frozen=True)
class BetaRecord:
    """One annealing step: the stationary solve at a single noise level."""

    beta: float
    density: np.ndarray
    converged: bool
    residual: float
    delta_prev: float  # sup-norm change from the previous level (nan for the first)


@dataclass(frozen=True)
class RankedEquilibria:
    """Limit measure, equilibrium masses, and the induced order.

    ``order`` lists equivalence classes of profile labels by descending
    limit mass; labels whose masses differ by at most the schedule's
    ``tol_lim`` share a class rather than being ordered arbitrarily.  When
    the game has no pure equilibrium the order covers the support of the
    limit measure instead and ``residual_mass`` is the full mass.
    """

    limit_density: np.ndarray
    labels: tuple[str, ...]
    nash: NashSet
    nash_masses: tuple[float, ...]
    order: tuple[tuple[str, ...], ...]
    residual_mass: float
    history: tuple[BetaRecord, ...] = field(repr=False)

    def nash_labels(self) -> tuple[str, ...]:
        return tuple(self.labels[k] for k in self.nash.indices)


def _tie_classes(indices, masses, tol):
    """Group already-sorted (descending) masses into tie classes."""
    classes = []
    current = [indices[0]]
    for i in range(1, len(indices)):
        if masses[i - 1] - masses[i] <= tol:
            current.append(indices[i])
        else:
            classes.append(tuple(current))
            current = [indices[i]]
    classes.append(tuple(current))
    return classes


def select_equilibria(game: Game, graph: StrategyGraph,
                      schedule: AnnealingSchedule | None = None,
                      config: SolverConfig | None = None,
                      rho0=None, warm_start: bool = True) -> RankedEquilibria:
    """Anneal the noise level to zero and rank the pure equilibria.

    Each level's stationary solve starts from the previous level's measure
    (``warm_start=False`` restarts from ``rho0`` instead, which is mainly
    useful to probe initial-condition dependence).  A solve that runs out
    of horizon is recorded as unconverged, with its final state kept as
    the next warm start; the limit is still reported, so callers must
    consult the history (or :func:`limit_diagnostics`) before trusting a
    schedule that never settled.
    """
    if schedule is None:
        schedule = AnnealingSchedule()
    if config is None:
        config = SolverConfig()
    if rho0 is None:
        rho0 = uniform_density(game.num_profiles)
    if not graph.is_connected():
        warnings.warn("product graph is disconnected; the flow cannot move mass "
                      "between components and the ranking is per-component")

    history: list[BetaRecord] = []
    current = np.asarray(rho0, dtype=float)
    prev = None
    for beta in schedule.betas():
        start = current if warm_start else rho0
        try:
            density = stationary_measure(game, graph, beta, rho0=start, config=config)
            converged, residual = True, float("nan")
        except ConvergenceError as err:
            density, residual, converged = err.density, err.residual, False
        delta = float(np.max(np.abs(density - prev))) if prev is not None else math.nan
        history.append(BetaRecord(beta=beta, density=density, converged=converged,
                                  residual=residual, delta_prev=delta))
        current = density
        if prev is not None and delta < schedule.tol_lim:
            break
        prev = density

    limit = history[-1].density
    labels = tuple(game.profile_labels())
    nash = enumerate_pure_ne(game, graph)
    nash_masses = tuple(float(limit[k]) for k in nash.indices)
    residual_mass = float(1.0 - sum(nash_masses))

    if nash.indices:
        rank_over = list(nash.indices)
    else:
        rank_over = [int(k) for k in np.flatnonzero(limit >= SUPPORT_FLOOR)]
    rank_over.sort(key=lambda k: -limit[k])
    if rank_over:
        masses_sorted = [float(limit[k]) for k in rank_over]
        classes = _tie_classes(rank_over, masses_sorted, schedule.tol_lim)
        order = tuple(tuple(labels[k] for k in cls) for cls in classes)
    else:
        order = ()

    return RankedEquilibria(
        limit_density=limit,
        labels=labels,
        nash=nash,
        nash_masses=nash_masses,
        order=order,
        residual_mass=residual_mass,
        history=tuple(history),
    )


@dataclass(frozen=True)
class LimitReport:
    """Schedule health summary produced by :func:`limit_diagnostics`."""

    betas: tuple[float, ...]
    support_entropy: tuple[float, ...]
    nash_mass: tuple[float, ...]
    deltas: tuple[float, ...]
    all_converged: bool
    cauchy: bool

    @property
    def trustworthy(self) -> bool:
        return self.all_converged and self.cauchy


def limit_diagnostics(history, nash_indices=()) -> LimitReport:
    """Summarize an annealing history so a stalled schedule is visible.

    Reports, per noise level, the Shannon entropy of the stationary
    measure, the mass on the given equilibrium profiles, and the change
    from the previous level; ``cauchy`` is False when those changes ever
    increase, the signature of a schedule read off before it settled.
    """
    history = tuple(history)
    if len(history) < 2:
        raise ValueError("limit diagnostics need at least two annealing records")
    betas = tuple(rec.beta for rec in history)
    entropies = []
    ne_mass = []
    for rec in history:
        rho = rec.density
        pos = rho > 0
        entropies.append(float(-np.sum(rho[pos] * np.log(rho[pos]))))
        ne_mass.append(float(sum(rho[k] for k in nash_indices)))
    deltas = tuple(
        float(np.max(np.abs(b.density - a.density)))
        for a, b in zip(history[:-1], history[1:])
    )
    cauchy = all(d2 <= d1 for d1, d2 in zip(deltas[:-1], deltas[1:]))
    return LimitReport(
        betas=betas,
        support_entropy=tuple(entropies),
        nash_mass=tuple(ne_mass),
        deltas=deltas,
        all_converged=all(rec.converged for rec in history),
        cauchy=cauchy,
    )
