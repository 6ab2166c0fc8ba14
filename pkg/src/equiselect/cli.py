"""Command-line front end.

Commands: ``inspect``, ``evolve``, ``stationary``, ``select``,
``diagnose``, ``simulate``.  Exit status 0 on success, 2 on input errors,
3 when a solver fails to converge (with a JSON error body on stdout).
Outputs are deterministic: the same invocation with the same seed writes
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .diagnostics import NotPotentialError, h_theorem_check
from .dynamics import ConvergenceError, SolverConfig, integrate, stationary_measure
from .game import DisconnectedGraphError, Game, GameFormatError, detect_potential, enumerate_pure_ne, load_game
from .graph import build_product
from .jump import SimConfig, simulate
from .selection import AnnealingSchedule, select_equilibria
from .serialize import (
    density_from_json,
    density_to_json,
    diagnostics_csv,
    diagnostics_summary_json,
    selection_to_json,
    trajectory_csv,
)
from .validation import uniform_density

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3

DIAGNOSE_SPACING = 1e-3
DIAGNOSE_T_MAX = 20.0
EVOLVE_SAMPLES = 500


class _InputError(Exception):
    pass


def _worker_threads() -> int | None:
    """Validated EQUISELECT_THREADS cap (the solvers are single-threaded,
    so any positive cap is trivially honored)."""
    raw = os.environ.get("EQUISELECT_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise _InputError(f"EQUISELECT_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise _InputError(f"EQUISELECT_THREADS must be >= 1, got {value}")
    return value


def _load(args) -> Game:
    return load_game(args.game)


def _rho0(args, game: Game) -> np.ndarray:
    spec = getattr(args, "rho0", "uniform")
    if spec == "uniform":
        return uniform_density(game.num_profiles)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise _InputError(f"cannot read rho0 file {path!r}: {exc}")
        try:
            return density_from_json(text, game.profile_labels())
        except (ValueError, json.JSONDecodeError) as exc:
            raise _InputError(f"bad density file {path!r}: {exc}")
    raise _InputError(f"--rho0 must be 'uniform' or 'file:<path>', got {spec!r}")


def _config(args, beta) -> SolverConfig:
    kwargs = {"beta": beta}
    if getattr(args, "t_max", None) is not None:
        kwargs["t_max"] = args.t_max
    if getattr(args, "tol", None) is not None:
        kwargs["tol_stat"] = args.tol
    return SolverConfig(**kwargs)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out_path).write_text(text)


def _cmd_inspect(args) -> int:
    game = _load(args)
    graph = build_product(game)
    nash = enumerate_pure_ne(game, graph)
    labels = game.profile_labels()
    try:
        cert = detect_potential(game, graph)
        is_potential = cert.is_potential
        phi = ({lab: float(v) for lab, v in zip(labels, cert.phi)}
               if cert.is_potential else None)
    except DisconnectedGraphError:
        is_potential = None
        phi = None
    body = {
        "players": game.num_players,
        "strategies": [list(s) for s in game.strategy_names],
        "is_potential": is_potential,
        "phi": phi,
        "nash": [labels[k] for k in nash.indices],
    }
    _emit(json.dumps(body, indent=2), args.out)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    game = _load(args)
    graph = build_product(game)
    config = _config(args, args.beta)
    sample_dt = config.t_max / EVOLVE_SAMPLES
    traj = integrate(game, graph, _rho0(args, game), config, sample_dt=sample_dt)
    _emit(trajectory_csv(traj.times, traj.densities, game.profile_labels()), args.out)
    return EXIT_OK


def _cmd_stationary(args) -> int:
    game = _load(args)
    graph = build_product(game)
    try:
        density = stationary_measure(game, graph, args.beta, rho0=_rho0(args, game),
                                     config=_config(args, args.beta))
    except ConvergenceError as err:
        body = {"error": str(err), "beta": err.beta, "residual": err.residual,
                "reason": err.reason}
        sys.stdout.write(json.dumps(body, indent=2) + "\n")
        return EXIT_SOLVER
    _emit(density_to_json(density, game.profile_labels()), args.out)
    return EXIT_OK


def _cmd_select(args) -> int:
    game = _load(args)
    graph = build_product(game)
    schedule = AnnealingSchedule() if args.tol is None else AnnealingSchedule(tol_lim=args.tol)
    config = _config(args, schedule.beta_start)
    result = select_equilibria(game, graph, schedule=schedule, config=config,
                               rho0=_rho0(args, game))
    _emit(selection_to_json(result), args.out)
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    game = _load(args)
    graph = build_product(game)
    beta = args.beta if args.beta is not None else 1.0
    t_max = args.t_max if args.t_max is not None else DIAGNOSE_T_MAX
    config = SolverConfig(beta=beta, t_max=t_max)
    traj = integrate(game, graph, _rho0(args, game), config, sample_dt=DIAGNOSE_SPACING)
    try:
        report = h_theorem_check(traj, game, graph, beta)
    except NotPotentialError as exc:
        raise _InputError(str(exc))
    Path(args.out).write_text(diagnostics_csv(report))
    sys.stdout.write(diagnostics_summary_json(report) + "\n")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    game = _load(args)
    graph = build_product(game)
    config = SimConfig(horizon=args.horizon, particles=args.particles,
                       step=args.step, seed=args.seed)
    sample_every = max(1, int(round(config.horizon / config.step)) // EVOLVE_SAMPLES)
    times, densities = simulate(game, graph, config, args.beta,
                                rho0=_rho0(args, game), sample_every=sample_every)
    _emit(trajectory_csv(times, densities, game.profile_labels()), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equiselect",
        description="Rank pure Nash equilibria through a vanishing-noise "
                    "density flow on the strategy graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, beta=None, rho0=True, out=True, t_max=False, tol=False):
        p.add_argument("--game", required=True, help="path to a game document (JSON)")
        if beta == "required":
            p.add_argument("--beta", type=float, required=True, help="noise level")
        elif beta == "optional":
            p.add_argument("--beta", type=float, default=None, help="noise level")
        if rho0:
            p.add_argument("--rho0", default="uniform",
                           help="'uniform' (default) or 'file:<path>' with a density JSON")
        if out:
            p.add_argument("--out", default=None, help="output path (default stdout)")
        if t_max:
            p.add_argument("--t-max", dest="t_max", type=float, default=None,
                           help="integration horizon")
        if tol:
            p.add_argument("--tol", type=float, default=None, help="tolerance")

    p = sub.add_parser("inspect", help="game summary: potential, equilibria")
    common(p, rho0=False)
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("evolve", help="integrate the flow; emit trajectory CSV")
    common(p, beta="required", t_max=True, tol=True)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("stationary", help="stationary density at one noise level")
    common(p, beta="required", t_max=True, tol=True)
    p.set_defaults(func=_cmd_stationary)

    p = sub.add_parser("select", help="anneal the noise and rank equilibria")
    common(p, t_max=True, tol=True)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("diagnose", help="entropy dissipation diagnostics (CSV + summary)")
    common(p, beta="optional", out=False, t_max=True)
    p.add_argument("--out", required=True, help="CSV output path (summary JSON on stdout)")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("simulate", help="particle simulation; emit trajectory CSV")
    common(p, beta="required")
    p.add_argument("--particles", type=int, default=100_000)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _worker_threads()
        return args.func(args)
    except (_InputError, GameFormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
