"""Per-player strategy graphs and their Cartesian product.

Joint profiles are indexed mixed-radix with the last player's digit
varying fastest, so profile (x_1, ..., x_N) maps to
``sum_i x_i * prod_{j>i} M_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def complete_edges(n: int) -> list[tuple[int, int]]:
    """Edge list of the complete graph on ``n`` vertices."""
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


@dataclass(frozen=True)
class PlayerGraph:
    """Undirected switch graph of one player's strategy set."""

    player: int
    num_strategies: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.edges:
            if not (0 <= a < self.num_strategies and 0 <= b < self.num_strategies):
                raise ValueError(
                    f"player {self.player}: edge ({a},{b}) out of range "
                    f"for {self.num_strategies} strategies"
                )
            if a == b:
                raise ValueError(f"player {self.player}: self-loop ({a},{b})")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"player {self.player}: duplicate edge ({a},{b})")
            seen.add(key)

    def degree(self, vertex: int) -> int:
        return sum(1 for a, b in self.edges if vertex in (a, b))


@dataclass(frozen=True)
class StrategyGraph:
    """Cartesian product of the players' strategy graphs.

    Vertices are joint profiles; two profiles are adjacent iff they differ
    in exactly one player's coordinate and that switch is an edge of the
    player's own graph.  Product edges are stored once (tail index < head
    index) together with the player whose move they represent, plus a
    directed CSR view for neighborhood queries.
    """

    player_graphs: tuple[PlayerGraph, ...]
    shape: tuple[int, ...]
    num_vertices: int
    edge_tail: np.ndarray
    edge_head: np.ndarray
    edge_player: np.ndarray
    # directed adjacency, CSR by source vertex
    _adj_offsets: np.ndarray = field(repr=False)
    _adj_heads: np.ndarray = field(repr=False)
    _adj_players: np.ndarray = field(repr=False)
    # undirected edge id and orientation (0: tail->head) per adjacency slot
    _adj_edge: np.ndarray = field(repr=False)
    _adj_dir: np.ndarray = field(repr=False)

    @property
    def num_players(self) -> int:
        return len(self.shape)

    @property
    def num_edges(self) -> int:
        return int(self.edge_tail.size)

    @property
    def strides(self) -> np.ndarray:
        s = np.ones(len(self.shape), dtype=np.int64)
        for i in range(len(self.shape) - 2, -1, -1):
            s[i] = s[i + 1] * self.shape[i + 1]
        return s

    def neighbors(self, vertex: int) -> tuple[np.ndarray, np.ndarray]:
        """All neighbors of ``vertex`` and the player moving on each edge."""
        lo, hi = self._adj_offsets[vertex], self._adj_offsets[vertex + 1]
        return self._adj_heads[lo:hi], self._adj_players[lo:hi]

    def player_neighbors(self, vertex: int, player: int) -> np.ndarray:
        """Directional neighborhood: moves available to one player."""
        heads, players = self.neighbors(vertex)
        return heads[players == player]

    def is_connected(self) -> bool:
        if self.num_vertices == 1:
            return True
        seen = np.zeros(self.num_vertices, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            heads, _ = self.neighbors(v)
            for h in heads:
                if not seen[h]:
                    seen[h] = True
                    stack.append(int(h))
        return bool(seen.all())


def profile_index(graph: StrategyGraph, profile) -> int:
    """Mixed-radix index of a joint profile (last player fastest)."""
    shape = graph.shape
    if len(profile) != len(shape):
        raise ValueError(f"profile has {len(profile)} components, expected {len(shape)}")
    k = 0
    for x, m in zip(profile, shape):
        if not 0 <= x < m:
            raise ValueError(f"profile component {x} out of range [0, {m})")
        k = k * m + x
    return k


def index_profile(graph: StrategyGraph, index: int) -> tuple[int, ...]:
    """Inverse of :func:`profile_index`."""
    if not 0 <= index < graph.num_vertices:
        raise ValueError(f"index {index} out of range [0, {graph.num_vertices})")
    out = []
    for m in reversed(graph.shape):
        out.append(index % m)
        index //= m
    return tuple(reversed(out))


def build_product(game, edges=None) -> StrategyGraph:
    """Build the product strategy graph of ``game``.

    ``edges`` optionally gives one edge list per player; a ``None`` entry
    (or omitting the argument when the game document carried no edge lists)
    means that player may switch freely, i.e. a complete graph.
    """
    if edges is None:
        edges = getattr(game, "edges", None)
    counts = [len(s) for s in game.strategy_names]
    n_players = len(counts)
    if edges is None:
        edges = [None] * n_players
    if len(edges) != n_players:
        raise ValueError(f"expected {n_players} edge lists, got {len(edges)}")

    player_graphs = []
    for i, (m, e) in enumerate(zip(counts, edges)):
        if e is None:
            e = complete_edges(m)
        norm = tuple((min(a, b), max(a, b)) for a, b in e)
        player_graphs.append(PlayerGraph(player=i, num_strategies=m, edges=norm))

    shape = tuple(counts)
    num_vertices = int(np.prod(shape))
    strides = np.ones(n_players, dtype=np.int64)
    for i in range(n_players - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]

    all_idx = np.arange(num_vertices, dtype=np.int64)
    tails, heads, players = [], [], []
    for i, pg in enumerate(player_graphs):
        digit = (all_idx // strides[i]) % shape[i]
        for a, b in pg.edges:
            base = all_idx[digit == a]
            tails.append(base)
            heads.append(base + (b - a) * strides[i])
            players.append(np.full(base.size, i, dtype=np.int64))
    if tails:
        edge_tail = np.concatenate(tails)
        edge_head = np.concatenate(heads)
        edge_player = np.concatenate(players)
    else:
        edge_tail = np.empty(0, dtype=np.int64)
        edge_head = np.empty(0, dtype=np.int64)
        edge_player = np.empty(0, dtype=np.int64)
    # normalize so tail < head for each stored edge
    flip = edge_tail > edge_head
    edge_tail[flip], edge_head[flip] = edge_head[flip], edge_tail[flip].copy()

    n_edges = edge_tail.size
    src = np.concatenate([edge_tail, edge_head])
    dst = np.concatenate([edge_head, edge_tail])
    ply = np.concatenate([edge_player, edge_player])
    eid = np.concatenate([np.arange(n_edges), np.arange(n_edges)])
    orient = np.concatenate([np.zeros(n_edges, dtype=np.int64),
                             np.ones(n_edges, dtype=np.int64)])
    order = np.argsort(src, kind="stable")
    counts_per = np.bincount(src, minlength=num_vertices)
    offsets = np.zeros(num_vertices + 1, dtype=np.int64)
    np.cumsum(counts_per, out=offsets[1:])

    return StrategyGraph(
        player_graphs=tuple(player_graphs),
        shape=shape,
        num_vertices=num_vertices,
        edge_tail=edge_tail,
        edge_head=edge_head,
        edge_player=edge_player,
        _adj_offsets=offsets,
        _adj_heads=dst[order],
        _adj_players=ply[order],
        _adj_edge=eid[order],
        _adj_dir=orient[order],
    )
