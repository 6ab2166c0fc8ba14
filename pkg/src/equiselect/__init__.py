"""Equilibrium ranking for finite games via a vanishing-noise density flow.

The public surface groups into:

* game model: :class:`Game`, :func:`load_game`, :func:`detect_potential`,
  :func:`enumerate_pure_ne`;
* strategy graphs: :func:`build_product`, :func:`profile_index`,
  :func:`index_profile`;
* dynamics: :func:`fpe_rhs`, :func:`integrate`, :func:`stationary_measure`,
  :func:`gibbs_measure`, :func:`rate_matrix_beta0`, :func:`upwind_weight`;
* selection: :func:`select_equilibria`, :func:`limit_diagnostics`;
* diagnostics: :func:`relative_entropy`, :func:`relative_fisher`,
  :func:`free_energy`, :func:`h_theorem_check`;
* Monte Carlo: :func:`simulate`, :func:`step_ensemble`;
* estimators: :class:`EquilibriumSelector`, :class:`FokkerPlanckSolver`.
"""

from .corpus import CORPUS_GAMES, corpus_names, load_corpus_game
from .diagnostics import (
    DiagnosticsReport,
    NotPotentialError,
    free_energy,
    h_theorem_check,
    relative_entropy,
    relative_fisher,
)
from .dynamics import (
    ConvergenceError,
    SolverConfig,
    Trajectory,
    fpe_rhs,
    gibbs_measure,
    integrate,
    rate_matrix_beta0,
    stationary_measure,
    upwind_weight,
)
from .estimators import EquilibriumSelector, FokkerPlanckSolver
from .game import (
    DisconnectedGraphError,
    Game,
    GameFormatError,
    NashSet,
    PotentialCertificate,
    detect_potential,
    enumerate_pure_ne,
    game_from_document,
    load_game,
)
from .graph import PlayerGraph, StrategyGraph, build_product, complete_edges, index_profile, profile_index
from .jump import Ensemble, SimConfig, make_ensemble, simulate, step_ensemble
from .selection import (
    AnnealingSchedule,
    BetaRecord,
    LimitReport,
    RankedEquilibria,
    limit_diagnostics,
    select_equilibria,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealingSchedule",
    "BetaRecord",
    "CORPUS_GAMES",
    "ConvergenceError",
    "DiagnosticsReport",
    "DisconnectedGraphError",
    "Ensemble",
    "EquilibriumSelector",
    "FokkerPlanckSolver",
    "Game",
    "GameFormatError",
    "LimitReport",
    "NashSet",
    "NotPotentialError",
    "PlayerGraph",
    "PotentialCertificate",
    "RankedEquilibria",
    "SimConfig",
    "SolverConfig",
    "StrategyGraph",
    "Trajectory",
    "build_product",
    "complete_edges",
    "corpus_names",
    "detect_potential",
    "enumerate_pure_ne",
    "fpe_rhs",
    "free_energy",
    "game_from_document",
    "gibbs_measure",
    "h_theorem_check",
    "index_profile",
    "integrate",
    "limit_diagnostics",
    "load_corpus_game",
    "load_game",
    "make_ensemble",
    "profile_index",
    "rate_matrix_beta0",
    "relative_entropy",
    "relative_fisher",
    "select_equilibria",
    "simulate",
    "stationary_measure",
    "step_ensemble",
    "upwind_weight",
]
