"""Finite normal-form games: loading, potential detection, pure equilibria.

A game document is a JSON object with keys

* ``players``: number of players N,
* ``strategies``: N lists of distinct strategy labels,
* ``costs``: N flat arrays of length prod(M_i), row-major over joint
  profiles with the last player's index varying fastest; entry k of array i
  is player i's cost at the joint profile with index k (lower is better),
* ``edges`` (optional): N edge lists of [from, to] zero-based strategy
  index pairs; a missing or null entry means that player's switch graph is
  complete,
* ``name`` (optional): free-form label.

Equilibria are defined relative to the switch graph: a profile is a pure
Nash equilibrium when no player can strictly lower their own cost by moving
to a neighboring strategy.  With complete switch graphs this is the
classical definition.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import StrategyGraph, build_product, index_profile

TOL_POT = 1e-9


class GameFormatError(ValueError):
    """Raised when a game document violates the schema."""


class DisconnectedGraphError(ValueError):
    """Raised where an operation needs a connected product graph."""


@dataclass(frozen=True)
class Game:
    """Immutable N-player game with per-player cost tensors.

    ``costs`` has shape (N, prod(M_i)): row i is player i's cost over joint
    profiles in mixed-radix order.  ``edges`` carries the document's
    optional switch-graph restrictions (None = complete for that player).
    """

    num_players: int
    strategy_names: tuple[tuple[str, ...], ...]
    costs: np.ndarray
    edges: tuple[tuple[tuple[int, int], ...] | None, ...] | None = None
    name: str = ""

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strategy_names)

    @property
    def num_profiles(self) -> int:
        return int(np.prod(self.shape))

    def profile_labels(self) -> list[str]:
        """Joint-profile labels, strategies joined by '|', in index order."""
        labels = [""]
        for names in self.strategy_names:
            labels = [f"{p}|{n}" if p else n for p in labels for n in names]
        return labels

    def cost(self, player: int, profile) -> float:
        k = 0
        for x, m in zip(profile, self.shape):
            k = k * m + x
        return float(self.costs[player, k])


@dataclass(frozen=True)
class PotentialCertificate:
    """Either a verified potential function or a witness that none exists.

    When ``is_potential``, ``phi`` satisfies
    ``phi(x) - phi(y) == u_i(x) - u_i(y)`` on every product edge (x, y)
    moved by player i, to tolerance ``tol``, and is normalized so its
    minimum is 0.  Otherwise ``witness`` is ``(tail, head, player,
    residual)`` for an edge where the identity fails.
    """

    is_potential: bool
    phi: np.ndarray | None
    witness: tuple[int, int, int, float] | None
    tol: float


@dataclass(frozen=True)
class NashSet:
    """Pure Nash equilibria with per-player improvement slacks.

    ``slacks[k][i]`` is ``min over y in N_i(x_k) of u_i(y) - u_i(x_k)``,
    nonnegative for an equilibrium and +inf when player i has no moves.
    """

    profiles: tuple[tuple[int, ...], ...]
    indices: tuple[int, ...]
    slacks: tuple[tuple[float, ...], ...]

    def __len__(self) -> int:
        return len(self.profiles)


def _as_edge_lists(raw, shape):
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != len(shape):
        raise GameFormatError(f"'edges' must be a list of {len(shape)} per-player edge lists")
    out = []
    for i, entry in enumerate(raw):
        if entry is None:
            out.append(None)
            continue
        if not isinstance(entry, list):
            raise GameFormatError(f"player {i}: edge list must be an array")
        pairs = []
        for pair in entry:
            if (not isinstance(pair, list)) or len(pair) != 2 or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in pair
            ):
                raise GameFormatError(f"player {i}: edge {pair!r} is not an index pair")
            pairs.append((pair[0], pair[1]))
        out.append(tuple(pairs))
    return tuple(out)


def game_from_document(doc: dict) -> Game:
    """Build a validated Game from a parsed document."""
    if not isinstance(doc, dict):
        raise GameFormatError("game document must be a JSON object")
    allowed = {"players", "strategies", "costs", "edges", "name"}
    unknown = set(doc) - allowed
    if unknown:
        raise GameFormatError(f"unknown keys in game document: {sorted(unknown)}")
    for key in ("players", "strategies", "costs"):
        if key not in doc:
            raise GameFormatError(f"game document missing key '{key}'")

    players = doc["players"]
    if not isinstance(players, int) or isinstance(players, bool) or players < 1:
        raise GameFormatError("'players' must be a positive integer")

    strategies = doc["strategies"]
    if not isinstance(strategies, list) or len(strategies) != players:
        raise GameFormatError(f"'strategies' must list strategy names for {players} players")
    names = []
    for i, strat in enumerate(strategies):
        if not isinstance(strat, list) or not strat:
            raise GameFormatError(f"player {i}: strategy list must be a non-empty array")
        labels = [str(s) for s in strat]
        if len(set(labels)) != len(labels):
            raise GameFormatError(f"player {i}: duplicate strategy label")
        names.append(tuple(labels))
    shape = tuple(len(s) for s in names)
    n_profiles = int(np.prod(shape))

    raw_costs = doc["costs"]
    if not isinstance(raw_costs, list) or len(raw_costs) != players:
        raise GameFormatError(f"'costs' must hold one flat array per player ({players})")
    costs = np.empty((players, n_profiles))
    for i, arr in enumerate(raw_costs):
        if not isinstance(arr, list) or len(arr) != n_profiles:
            raise GameFormatError(
                f"player {i}: cost array has length "
                f"{len(arr) if isinstance(arr, list) else 'n/a'}, expected {n_profiles}"
            )
        vec = np.asarray(arr, dtype=float)
        if not np.all(np.isfinite(vec)):
            raise GameFormatError(f"player {i}: non-finite cost entry")
        costs[i] = vec

    edges = _as_edge_lists(doc.get("edges"), shape)
    game = Game(
        num_players=players,
        strategy_names=tuple(names),
        costs=costs,
        edges=edges,
        name=str(doc.get("name", "")),
    )
    if edges is not None:
        build_product(game)  # validates edge indices, raises on bad input
    return game


def load_game(path) -> Game:
    """Load and validate a game document from a JSON file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return game_from_document(doc)
    except GameFormatError as exc:
        raise GameFormatError(f"{path}: {exc}") from exc


def detect_potential(game: Game, graph: StrategyGraph, tol: float = TOL_POT) -> PotentialCertificate:
    """Decide whether the game admits an exact potential on the graph.

    A candidate is integrated along a breadth-first spanning tree of the
    product graph (each tree edge fixes the potential difference from the
    moving player's cost difference) and then every edge, tree or not, is
    checked against the defining identity.  The first failing edge is
    returned as a witness.
    """
    if graph.num_vertices != game.num_profiles:
        raise ValueError("graph does not match game")
    if not graph.is_connected():
        raise DisconnectedGraphError(
            "product graph is disconnected; a potential is only defined per component"
        )
    n = graph.num_vertices
    phi = np.zeros(n)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        heads, players = graph.neighbors(v)
        for h, p in zip(heads, players):
            if not seen[h]:
                seen[h] = True
                phi[h] = phi[v] + game.costs[p, h] - game.costs[p, v]
                queue.append(int(h))

    du = game.costs[graph.edge_player, graph.edge_tail] - game.costs[graph.edge_player, graph.edge_head]
    resid = (phi[graph.edge_tail] - phi[graph.edge_head]) - du
    bad = np.abs(resid) > tol
    if bad.any():
        k = int(np.argmax(np.abs(resid)))
        witness = (int(graph.edge_tail[k]), int(graph.edge_head[k]),
                   int(graph.edge_player[k]), float(resid[k]))
        return PotentialCertificate(False, None, witness, tol)
    phi -= phi.min()
    return PotentialCertificate(True, phi, None, tol)


def enumerate_pure_ne(game: Game, graph: StrategyGraph) -> NashSet:
    """All graph-local pure Nash equilibria.

    A profile survives iff no incident edge offers its moving player a
    strictly lower cost.  Comparisons are exact: costs are user inputs,
    not computed quantities.
    """
    if graph.num_vertices != game.num_profiles:
        raise ValueError("graph does not match game")
    du = game.costs[graph.edge_player, graph.edge_tail] - game.costs[graph.edge_player, graph.edge_head]
    is_ne = np.ones(graph.num_vertices, dtype=bool)
    is_ne[graph.edge_tail[du > 0]] = False   # tail's player strictly prefers head
    is_ne[graph.edge_head[du < 0]] = False
    indices = np.flatnonzero(is_ne)

    profiles = []
    slacks = []
    for k in indices:
        profiles.append(index_profile(graph, int(k)))
        heads, players = graph.neighbors(int(k))
        row = []
        for i in range(game.num_players):
            mine = heads[players == i]
            if mine.size == 0:
                row.append(math.inf)
            else:
                row.append(float(np.min(game.costs[i, mine] - game.costs[i, k])))
        slacks.append(tuple(row))
    return NashSet(
        profiles=tuple(profiles),
        indices=tuple(int(k) for k in indices),
        slacks=tuple(slacks),
    )
