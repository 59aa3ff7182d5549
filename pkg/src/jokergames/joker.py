"""The Joker game of a concurrent game and the costs of plays and strategies.

The Joker game is a lazy view: in state ``q`` Player 1 may play any regular
action or any Joker ``(a, x, q')`` with ``q'`` in ``Moves(q, a, x)``.  A Joker
costs 1 and moves to ``q'`` whatever Player 2 does; regular actions cost 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .game import INF, Action, ConcurrentGame, GameError, Joker, Play, backward_reachable, check, win_index


@dataclass(frozen=True, eq=False)
class JokerGame:
    base: ConcurrentGame

    @property
    def goals(self) -> frozenset[str]:
        return self.base.goals

    def enabled1(self, q: str) -> list[Action]:
        """Regular actions followed by Jokers, in stable order."""
        return list(self.base.gamma1(q)) + self.base.joker_actions(q)

    def enabled2(self, q: str) -> tuple[str, ...]:
        return self.base.gamma2(q)

    def is_enabled(self, q: str, action: Action) -> bool:
        if isinstance(action, Joker):
            return (
                action.a in self.base.gamma1(q)
                and action.x in self.base.gamma2(q)
                and action.to in self.base.succ(q, action.a, action.x)
            )
        return action in self.base.gamma1(q)

    def moves(self, q: str, action: Action, x: str) -> tuple[str, ...]:
        if x not in self.base.gamma2(q):
            return ()
        if isinstance(action, Joker):
            return (action.to,) if self.is_enabled(q, action) else ()
        return self.base.succ(q, action, x)

    @staticmethod
    def cost(action: Action) -> int:
        return 1 if isinstance(action, Joker) else 0

    def successors(self, q: str, action: Action) -> list[str]:
        """Every state an action can lead to, over all Player-2 actions and resolutions."""
        if isinstance(action, Joker):
            return [action.to]
        seen: dict[str, None] = {}
        for x in self.base.gamma2(q):
            for t in self.base.succ(q, action, x):
                seen.setdefault(t)
        return list(seen)


def build_joker_game(game: ConcurrentGame) -> JokerGame:
    return JokerGame(check(game))


def play_cost(jg: JokerGame, play: Play, goals: Optional[Iterable[str]] = None) -> float:
    """Number of Jokers strictly before the winning index, or ``INF`` if the play never wins."""
    goals = jg.goals if goals is None else frozenset(goals)
    w = win_index(play, goals)
    if w == INF:
        return INF
    return play.jokers(w)


class UndefinedStrategy(GameError):
    def __init__(self, state: str):
        super().__init__(f"strategy undefined at reachable state {state!r}")
        self.state = state


def strategy_cost(
    jg: JokerGame,
    strategy: Mapping[str, Action],
    start: Optional[str] = None,
    goals: Optional[Iterable[str]] = None,
) -> float:
    """Worst-case cost of a positional strategy from ``start``.

    Explores the whole outcome graph (every Player-2 action, every
    resolution).  A cycle through non-goal states means some outcome never
    wins, so the cost is ``INF``.  States with no path to a goal cost
    ``INF`` whatever Player 1 does, so the strategy need not cover them.
    """
    goals = jg.goals if goals is None else frozenset(goals)
    start = jg.base.initial if start is None else start
    strategy = getattr(strategy, "choice", strategy)

    live = backward_reachable(jg.base, goals)
    memo: dict[str, float] = {}
    on_stack: set[str] = set()

    def worst(q: str) -> float:
        if q in goals:
            return 0
        if q in memo:
            return memo[q]
        if q in on_stack or q not in live:
            return INF
        action = strategy.get(q)
        if action is None:
            raise UndefinedStrategy(q)
        if not jg.is_enabled(q, action):
            raise GameError(f"strategy plays disabled action {action!r} in {q!r}")
        on_stack.add(q)
        c = jg.cost(action)
        value = 0
        for t in jg.successors(q, action):
            value = max(value, c + worst(t))
            if value == INF:
                break
        on_stack.discard(q)
        memo[q] = value
        return value

    return worst(start)
