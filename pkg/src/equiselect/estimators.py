"""Scikit-learn style estimators wrapping the solvers.

Both estimators treat a :class:`~equiselect.game.Game` as the object being
fitted, expose their hyperparameters through ``get_params``/``set_params``
and store results in trailing-underscore attributes, so they clone and
compose like any other estimator.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning, NotFittedError

from .dynamics import ConvergenceError, SolverConfig, integrate, stationary_measure
from .game import Game
from .graph import build_product
from .selection import AnnealingSchedule, select_equilibria


def _ensure_graph(game, graph):
    if not isinstance(game, Game):
        raise TypeError("expected a Game instance")
    return build_product(game) if graph is None else graph


class FokkerPlanckSolver(BaseEstimator):
    """Solve the density flow of a game at a fixed noise level.

    ``fit`` integrates to the stationary measure; ``evolve`` returns a
    time-sampled trajectory without touching the fitted state.

    Attributes after fit: ``stationary_density_``, ``labels_``,
    ``residual_``, ``converged_``, ``graph_``.
    """

    def __init__(self, beta=1.0, dt_init=1e-3, tol_stat=1e-10, t_max=1e4,
                 pos_floor=1e-13):
        self.beta = beta
        self.dt_init = dt_init
        self.tol_stat = tol_stat
        self.t_max = t_max
        self.pos_floor = pos_floor

    def _config(self):
        return SolverConfig(beta=self.beta, dt_init=self.dt_init,
                            tol_stat=self.tol_stat, t_max=self.t_max,
                            pos_floor=self.pos_floor)

    def fit(self, game: Game, rho0=None, graph=None):
        graph = _ensure_graph(game, graph)
        try:
            density = stationary_measure(game, graph, self.beta, rho0=rho0,
                                         config=self._config())
            self.converged_ = True
            self.residual_ = 0.0
        except ConvergenceError as err:
            warnings.warn(str(err), ConvergenceWarning)
            density = err.density
            self.converged_ = False
            self.residual_ = err.residual
        self.stationary_density_ = density
        self.labels_ = tuple(game.profile_labels())
        self.graph_ = graph
        return self

    def evolve(self, game: Game, rho0=None, graph=None, sample_dt=None):
        """Trajectory from rho0 (uniform default) under this solver's config."""
        graph = _ensure_graph(game, graph)
        if rho0 is None:
            rho0 = np.full(game.num_profiles, 1.0 / game.num_profiles)
        return integrate(game, graph, rho0, self._config(), sample_dt=sample_dt)

    def predict_proba(self, profiles):
        """Stationary probability of each profile index in ``profiles``."""
        if not hasattr(self, "stationary_density_"):
            raise NotFittedError("call fit first")
        return self.stationary_density_[np.asarray(profiles, dtype=int)]


class EquilibriumSelector(BaseEstimator):
    """Rank a game's pure Nash equilibria by annealing the noise to zero.

    Attributes after fit: ``limit_density_``, ``labels_``,
    ``nash_labels_``, ``nash_masses_``, ``order_``, ``residual_mass_``,
    ``history_``, ``graph_``, ``converged_``.
    """

    def __init__(self, beta_start=1.0, decay=0.5, beta_min=1e-4, tol_lim=1e-4,
                 dt_init=1e-3, tol_stat=1e-10, t_max=1e4, pos_floor=1e-13,
                 warm_start=True):
        self.beta_start = beta_start
        self.decay = decay
        self.beta_min = beta_min
        self.tol_lim = tol_lim
        self.dt_init = dt_init
        self.tol_stat = tol_stat
        self.t_max = t_max
        self.pos_floor = pos_floor
        self.warm_start = warm_start

    def fit(self, game: Game, rho0=None, graph=None):
        graph = _ensure_graph(game, graph)
        schedule = AnnealingSchedule(beta_start=self.beta_start, decay=self.decay,
                                     beta_min=self.beta_min, tol_lim=self.tol_lim)
        config = SolverConfig(beta=self.beta_start, dt_init=self.dt_init,
                              tol_stat=self.tol_stat, t_max=self.t_max,
                              pos_floor=self.pos_floor)
        result = select_equilibria(game, graph, schedule=schedule, config=config,
                                   rho0=rho0, warm_start=self.warm_start)
        self.result_ = result
        self.limit_density_ = result.limit_density
        self.labels_ = result.labels
        self.nash_labels_ = result.nash_labels()
        self.nash_masses_ = result.nash_masses
        self.order_ = result.order
        self.residual_mass_ = result.residual_mass
        self.history_ = result.history
        self.graph_ = graph
        self.converged_ = all(rec.converged for rec in result.history)
        if not self.converged_:
            warnings.warn("some annealing levels did not reach stationarity; "
                          "inspect history_ before trusting the limit",
                          ConvergenceWarning)
        return self

    def predict(self, game: Game | None = None):
        """Top equivalence class of the fitted ranking (best equilibria)."""
        if not hasattr(self, "order_"):
            raise NotFittedError("call fit first")
        return self.order_[0] if self.order_ else ()
