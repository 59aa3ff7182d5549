"""Concurrent reachability games with Joker moves."""
from .game import INF, ConcurrentGame, GameError, Joker, Play, random_game, validate
from .gamefile import load_fixture, load_game, save_game
from .joker import build_joker_game, play_cost, strategy_cost
from .attractor import attractor, cpre1, joker_attractor, pre
from .strategy import (
    PositionalStrategy, distance, inspired_strategy, joker_attractor_strategy, short_joker_strategy,
)
from .probabilistic import p_attr, p_joker_attractor, prob_joker_strategy, safe1
from .oracle import value_iterate

__version__ = "0.1.0"

__all__ = [
    "INF", "ConcurrentGame", "GameError", "Joker", "Play", "random_game", "validate",
    "load_fixture", "load_game", "save_game",
    "build_joker_game", "play_cost", "strategy_cost",
    "attractor", "cpre1", "joker_attractor", "pre",
    "PositionalStrategy", "distance", "inspired_strategy", "joker_attractor_strategy", "short_joker_strategy",
    "p_attr", "p_joker_attractor", "prob_joker_strategy", "safe1",
    "value_iterate",
]
