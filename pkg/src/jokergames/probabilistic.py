"""Almost-sure reachability: safety sets, the almost-sure attractor and its Joker layering.

Randomised strategies are described by their supports only; a strategy plays
uniformly over its support.  For qualitative questions (probability one or
not) nothing else matters.  Nondeterministic resolution is adversarial: a
move only counts as progress if every resolution makes progress.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .attractor import RankTable, forcing_actions, joker_witnesses, pre
from .game import INF, Action, ConcurrentGame, Joker, OpponentScript, Play, simulate


def safe1(game: ConcurrentGame, region: Iterable[str]) -> frozenset[str]:
    """Greatest subset of ``region`` in which Player 1 can keep the play forever."""
    current = frozenset(region)
    while True:
        nxt = frozenset(q for q in current if forcing_actions(game, q, current))
        if nxt == current:
            return current
        current = nxt


def _progress(game: ConcurrentGame, q: str, safe: tuple[str, ...], target: frozenset[str]) -> bool:
    # every Player-2 action is answered by some safe action whose moves all land in target
    return all(
        any(set(game.succ(q, a, x)) <= target for a in safe)
        for x in game.gamma2(q)
    )


@dataclass(frozen=True)
class AlmostSureResult:
    target: frozenset[str]
    region: frozenset[str]
    # layer of the progress fixed point inside the final region; INF outside
    rank: Mapping[str, float]
    # actions to randomise over uniformly, for non-target states of the region
    support: Mapping[str, tuple[str, ...]]

    def rank_of(self, q: str) -> float:
        return self.rank.get(q, INF)


def p_attr(game: ConcurrentGame, target: Iterable[str]) -> AlmostSureResult:
    """States from which Player 1 reaches ``target`` with probability one.

    Outer greatest fixed point over the candidate region ``Y``, inner least
    fixed point over the progress set ``X``: a state joins ``X`` when it has
    actions keeping every move inside ``Y`` and, against every Player-2
    action, one of those actions moves surely into ``X``.
    """
    target = frozenset(target)
    y = frozenset(game.states)
    while True:
        stay = {q: forcing_actions(game, q, y) for q in y}
        x = set(target & y) | target
        rank: dict[str, float] = {q: 0 for q in target}
        k = 0
        while True:
            frozen = frozenset(x)
            new = [
                q for q in game.order(y - frozen)
                if stay[q] and _progress(game, q, stay[q], frozen)
            ]
            if not new:
                break
            k += 1
            for q in new:
                rank[q] = k
            x.update(new)
        region = frozenset(x)
        if region == y:
            break
        y = region
    support = {q: stay[q] for q in game.order(region - target)}
    return AlmostSureResult(target, region, rank, support)


@dataclass(frozen=True)
class ProbRankTable:
    """Layers of the almost-sure Joker attractor.

    Mirrors :class:`RankTable`: ``layers[0]`` is the almost-sure attractor of
    the goals and ``layers[k+1] = layers[k] | p_attr(pre(layers[k]))``.
    """

    goals: frozenset[str]
    states: tuple[str, ...]
    pa_rank: Mapping[str, float]
    pj_rank: Mapping[str, float]
    joker_states: frozenset[str]
    layers: tuple[frozenset[str], ...]
    joker_layers: Mapping[int, frozenset[str]]
    inner: Mapping[int, AlmostSureResult] = field(repr=False)
    # Joker actions of each Joker state into the previous layer, canonical first
    joker_witness: Mapping[str, tuple[Joker, ...]] = field(repr=False, default_factory=dict)

    @property
    def region(self) -> frozenset[str]:
        return self.layers[-1]

    def layer(self, k: int) -> frozenset[str]:
        """Layer ``k``, with the fixed point standing in for layers past the end."""
        return self.layers[min(k, len(self.layers) - 1)]


def p_joker_attractor(game: ConcurrentGame, goals: Optional[Iterable[str]] = None) -> ProbRankTable:
    goals = game.goals if goals is None else frozenset(goals)
    base = p_attr(game, goals)
    layers = [base.region]
    joker_layers: dict[int, frozenset[str]] = {}
    inner = {0: base}
    joker_wit: dict[str, tuple[Joker, ...]] = {}
    k = 0
    while True:
        current = layers[k]
        pre_set = pre(game, current)
        res = p_attr(game, pre_set)
        nxt = current | res.region
        if nxt == current:
            break
        for q in game.order(pre_set - current):
            joker_wit[q] = joker_witnesses(game, q, current)
        joker_layers[k + 1] = pre_set
        inner[k + 1] = res
        layers.append(nxt)
        k += 1

    pj_rank: dict[str, float] = {q: INF for q in game.states}
    for k in range(len(layers) - 1, -1, -1):
        for q in layers[k]:
            pj_rank[q] = k
    return ProbRankTable(
        goals=goals,
        states=game.states,
        pa_rank={q: base.rank_of(q) for q in game.states},
        pj_rank=pj_rank,
        joker_states=frozenset(joker_wit),
        layers=tuple(layers),
        joker_layers=joker_layers,
        inner=inner,
        joker_witness=joker_wit,
    )


@dataclass(frozen=True)
class RandomizedStrategy:
    """Per state, a support played uniformly.  Joker states have a single Joker."""

    support: Mapping[str, tuple[Action, ...]]

    def sample(self, q: str, rng: random.Random) -> Optional[Action]:
        options = self.support.get(q)
        if not options:
            return None
        return options[0] if len(options) == 1 else options[rng.randrange(len(options))]

    def uses_jokers(self) -> bool:
        return any(isinstance(a, Joker) for s in self.support.values() for a in s)


def prob_joker_strategy(table: ProbRankTable) -> RandomizedStrategy:
    """Uniform over the almost-sure support outside Joker states, the canonical Joker in them."""
    support: dict[str, tuple[Action, ...]] = {}
    for q in table.states:
        k = table.pj_rank[q]
        if k == INF or q in table.goals:
            continue
        if q in table.joker_states:
            support[q] = (table.joker_witness[q][0],)
        else:
            support[q] = tuple(table.inner[k].support[q])
    return RandomizedStrategy(support)


def simulate_randomized(
    game: ConcurrentGame,
    strategy: RandomizedStrategy,
    opponent: OpponentScript,
    rng: random.Random,
    start: Optional[str] = None,
    goals: Optional[Iterable[str]] = None,
    step_cap: Optional[int] = None,
) -> Play:
    return simulate(
        game, lambda play: strategy.sample(play.final, rng), opponent,
        start=start, goals=goals, step_cap=step_cap,
    )


@dataclass(frozen=True)
class MonteCarloSummary:
    runs: int
    wins: int
    joker_counts: frozenset[int]
    max_win_index: float

    @property
    def rate(self) -> float:
        return self.wins / self.runs if self.runs else 0.0


def monte_carlo(
    game: ConcurrentGame,
    strategy: RandomizedStrategy,
    runs: int,
    seed: int,
    start: Optional[str] = None,
    goals: Optional[Iterable[str]] = None,
    step_cap: Optional[int] = None,
    opponent_factory=None,
) -> MonteCarloSummary:
    """Simulate ``runs`` independent plays, each with its own seeded generator.

    The opponent defaults to a uniform Player 2 with uniform resolutions.
    Joker counts are collected over winning plays only.
    """
    from .game import uniform_opponent, win_index

    goals = game.goals if goals is None else frozenset(goals)
    wins = 0
    counts: set[int] = set()
    longest: float = 0
    for i in range(runs):
        rng = random.Random(f"{seed}/mc/{i}")
        opp = opponent_factory(rng) if opponent_factory else uniform_opponent(game, rng)
        play = simulate_randomized(game, strategy, opp, rng, start, goals, step_cap)
        w = win_index(play, goals)
        if w != INF:
            wins += 1
            counts.add(play.jokers(w))
            longest = max(longest, w)
    return MonteCarloSummary(runs, wins, frozenset(counts), longest)


def layers_contain(ptable: ProbRankTable, table: RankTable) -> bool:
    """Layerwise containment of the sure Joker attractor in the almost-sure one."""
    n = max(len(ptable.layers), len(table.layers))
    for k in range(n):
        sure = table.layers[min(k, len(table.layers) - 1)]
        if not sure <= ptable.layer(k):
            return False
    return all(ptable.pj_rank[q] <= table.j_rank[q] for q in table.states)
