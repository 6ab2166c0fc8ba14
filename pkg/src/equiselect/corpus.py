"""Access to the bundled example games.

The same four documents also ship as a plain ``games/`` directory at the
repository root for direct CLI use; the copies here travel with the
installed package.
"""

from __future__ import annotations

from importlib import resources

from .game import Game, game_from_document, load_game

CORPUS_GAMES = ("prisoners_dilemma", "asymmetric_2x2", "rsp", "rsp_constrained")


def corpus_names() -> tuple[str, ...]:
    return CORPUS_GAMES


def corpus_text(name: str) -> str:
    if name not in CORPUS_GAMES:
        raise KeyError(f"unknown corpus game {name!r}; available: {CORPUS_GAMES}")
    return (resources.files(__package__) / "games" / f"{name}.json").read_text()


def load_corpus_game(name: str) -> Game:
    import json

    return game_from_document(json.loads(corpus_text(name)))


__all__ = ["CORPUS_GAMES", "corpus_names", "corpus_text", "load_corpus_game", "load_game"]
