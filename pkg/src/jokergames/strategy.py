"""Strategy extraction: Joker attractor, short Joker and Joker-inspired strategies."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .attractor import RankTable, WitnessTable, forcing_actions
from .game import INF, Action, ConcurrentGame, GameError, Joker

KINDS = ("attractor", "short", "inspired", "custom")


@dataclass(frozen=True)
class PositionalStrategy:
    choice: Mapping[str, Action]
    kind: str = "custom"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.choice)

    def get(self, q: str, default=None):
        return self.choice.get(q, default)

    def __getitem__(self, q: str) -> Action:
        return self.choice[q]

    def __contains__(self, q: str) -> bool:
        return q in self.choice

    def uses_jokers(self) -> bool:
        return any(isinstance(a, Joker) for a in self.choice.values())


def joker_attractor_strategy(rt: RankTable, wt: WitnessTable) -> PositionalStrategy:
    """Pick the canonical witness in every non-goal state of the Joker attractor."""
    choice: dict[str, Action] = {}
    for q in rt.states:
        k = rt.j_rank[q]
        if k == INF or q in rt.goals:
            continue
        if q in rt.joker_states:
            options = wt.joker.get(q)
        else:
            options = wt.attr.get(k, {}).get(q)
        if not options:
            raise GameError(f"no witness for state {q!r} at layer {k}")
        choice[q] = options[0]
    return PositionalStrategy(choice, "attractor")


@dataclass(frozen=True)
class DistanceTable:
    d: Mapping[str, float]
    # Player-1 actions keeping every move inside the state's layer
    gamma_j: Mapping[str, tuple[str, ...]]
    post: Mapping[str, frozenset[str]] = field(repr=False)
    layer: Mapping[str, float] = field(repr=False)
    pessimistic: bool = False


def restricted_enabling(game: ConcurrentGame, rt: RankTable) -> dict[str, tuple[str, ...]]:
    """For non-Joker states of the Joker attractor, the actions staying in their own layer.

    Rank-0 states must stay inside the attractor; a non-Joker state of rank
    k > 0 must stay inside ``layers[k] - layers[k-1]``.  Joker states and
    states outside the Joker attractor get no actions.
    """
    out: dict[str, tuple[str, ...]] = {}
    for q in rt.states:
        k = rt.j_rank[q]
        if k == INF or q in rt.joker_states:
            out[q] = ()
        elif k == 0:
            out[q] = forcing_actions(game, q, rt.attr)
        else:
            out[q] = forcing_actions(game, q, rt.layers[k] - rt.layers[k - 1])
    return out


def distance(game: ConcurrentGame, rt: RankTable, pessimistic: bool = False) -> DistanceTable:
    """Least fixed point of the distance recursion, by repeated relaxation.

    Goals are at distance 0; a Joker state of rank k+1 is one more than its
    closest successor in layer k; a non-Joker state is one more than the best
    action of its restricted enabling, where Player 2 and the resolution help
    (``min``) or, with ``pessimistic``, hinder (``max``).
    """
    gamma_j = restricted_enabling(game, rt)
    post = {q: game.post(q) for q in rt.states}
    d: dict[str, float] = {q: (0 if q in rt.goals else INF) for q in rt.states}
    inner = max if pessimistic else min

    def candidate(q: str) -> float:
        k = rt.j_rank[q]
        if q in rt.joker_states:
            lower = rt.layers[k - 1]
            return 1 + min((d[t] for t in post[q] if t in lower), default=INF)
        best = INF
        for a in gamma_j[q]:
            vals = [d[t] for x in game.gamma2(q) for t in game.succ(q, a, x)]
            best = min(best, inner(vals))
        return 1 + best

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for q in rt.states:
            if q in rt.goals or rt.j_rank[q] == INF:
                continue
            c = candidate(q)
            if c < d[q]:
                d[q] = c
                changed = True
        if rounds > len(rt.states) + 1:
            raise AssertionError("distance relaxation did not stabilise")
    return DistanceTable(d, gamma_j, post, dict(rt.j_rank), pessimistic)


def short_joker_strategy(game: ConcurrentGame, rt: RankTable, dt: DistanceTable) -> PositionalStrategy:
    """Distance-minimising choices; ties broken by the stable (a, x, q') order.

    At a Joker state of rank k the candidate Jokers are those landing in
    layer k-1, so that each Joker lowers the rank exactly as in the distance
    recursion.
    """
    inner = max if dt.pessimistic else min
    choice: dict[str, Action] = {}
    for q in rt.states:
        k = rt.j_rank[q]
        if k == INF or q in rt.goals:
            continue
        if q in rt.joker_states:
            lower = rt.layers[k - 1]
            options = [j for j in game.joker_actions(q) if j.to in lower]
            choice[q] = min(options, key=lambda j: (dt.d[j.to], game.action_key(j)))
        else:
            acts = dt.gamma_j[q]
            if not acts:
                raise GameError(f"restricted enabling empty at non-Joker state {q!r}")

            def score(a: str) -> float:
                return inner(dt.d[t] for x in game.gamma2(q) for t in game.succ(q, a, x))

            choice[q] = min(acts, key=lambda a: (score(a), game.action_key(a)))
    return PositionalStrategy(choice, "short")


def inspired_strategy(strategy: PositionalStrategy | Mapping[str, Action]) -> PositionalStrategy:
    """Replace each Joker ``(a, x, q')`` by its Player-1 action ``a``."""
    choice = getattr(strategy, "choice", strategy)
    return PositionalStrategy(
        {q: (a.a if isinstance(a, Joker) else a) for q, a in choice.items()},
        "inspired",
    )


def cooperative_play_length(
    game: ConcurrentGame,
    strategy: Mapping[str, Action],
    start: str,
    goals: Optional[Iterable[str]] = None,
) -> tuple[float, int]:
    """Shortest winning outcome of a positional strategy when Players 2 and 3 help.

    Returns ``(moves, jokers)`` of a shortest winning outcome (fewest Jokers
    among the shortest), or ``(INF, 0)`` if no outcome wins.
    """
    from collections import deque

    goals = game.goals if goals is None else frozenset(goals)
    choice = getattr(strategy, "choice", strategy)
    best: dict[str, tuple[int, int]] = {start: (0, 0)}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        n, j = best[q]
        if q in goals:
            return n, j
        a = choice.get(q)
        if a is None:
            continue
        if isinstance(a, Joker):
            succ, cost = [a.to], 1
        else:
            succ = [t for x in game.gamma2(q) for t in game.succ(q, a, x)]
            cost = 0
        for t in succ:
            cand = (n + 1, j + cost)
            if t not in best or cand < best[t]:
                best[t] = cand
                queue.append(t)
    return INF, 0
