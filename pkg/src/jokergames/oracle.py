"""Brute-force validators for the attractor and strategy computations.

Nothing here reuses the layered fixed points of :mod:`attractor`; each check
is computed from the game graph directly so that it can catch mistakes there.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .attractor import RankTable
from .game import (
    INF, Action, ConcurrentGame, GameError, Joker, OpponentScript, Play,
    backward_reachable, forward_reachable, positional_opponent, simulate, win_index,
)
from .joker import JokerGame, UndefinedStrategy, strategy_cost
from .strategy import restricted_enabling


# -- value iteration ----------------------------------------------------------


@dataclass(frozen=True)
class ValueTable:
    v: Mapping[str, float]
    iterations: int
    # v after each round, history[0] being the initial vector
    history: tuple[Mapping[str, float], ...] = field(repr=False)

    def settled_at(self, q: str) -> int:
        """First round from which ``q`` holds its final value."""
        for k, vk in enumerate(self.history):
            if vk[q] == self.v[q]:
                return k
        raise AssertionError("final value never reached")


def _action_value(jg: JokerGame, q: str, action: Action, v: Mapping[str, float]) -> float:
    c = jg.cost(action)
    worst: float = 0
    for x in jg.enabled2(q):
        for t in jg.moves(q, action, x):
            worst = max(worst, c + v[t])
    return worst


def value_iterate(jg: JokerGame, goals: Optional[Iterable[str]] = None) -> ValueTable:
    """Least fixed point of the min-max cost recursion over the Joker game.

    Values above ``|Q|`` cannot be finite and are reported as ``INF``.
    """
    game = jg.base
    goals = jg.goals if goals is None else frozenset(goals)
    cap = len(game.states)
    v: dict[str, float] = {q: (0 if q in goals else INF) for q in game.states}
    history = [dict(v)]
    while True:
        nxt: dict[str, float] = {}
        for q in game.states:
            if q in goals:
                nxt[q] = 0
                continue
            best = min(_action_value(jg, q, act, v) for act in jg.enabled1(q))
            nxt[q] = INF if best > cap else best
        history.append(nxt)
        if nxt == v:
            return ValueTable(nxt, len(history) - 1, tuple(history))
        v = nxt


def value_strategy(jg: JokerGame, vt: ValueTable, goals: Optional[Iterable[str]] = None) -> dict[str, Action]:
    """Cost-minimal positional strategy read off the value iteration.

    At ``q`` the action is an argmin of the round in which ``q`` settled,
    evaluated on the previous round's vector, which rules out zero-cost loops.
    """
    game = jg.base
    goals = jg.goals if goals is None else frozenset(goals)
    out: dict[str, Action] = {}
    for q in game.states:
        if q in goals or vt.v[q] == INF:
            continue
        k = vt.settled_at(q)
        prev = vt.history[k - 1]
        acts = sorted(jg.enabled1(q), key=game.action_key)
        out[q] = next(a for a in acts if _action_value(jg, q, a, prev) == vt.v[q])
    return out


# -- positional adversaries -----------------------------------------------------


class AdversaryBoundExceeded(GameError):
    def __init__(self, count: int, bound: int):
        super().__init__(f"{count} positional opponent pairs exceed the bound {bound}")
        self.count = count
        self.bound = bound


def count_adversaries(game: ConcurrentGame) -> int:
    """Number of positional (Player 2, Player 3) pairs: one action per state, one successor per move."""
    n = 1
    for q in game.states:
        n *= len(game.gamma2(q))
        for a in game.gamma1(q):
            for x in game.gamma2(q):
                n *= len(game.succ(q, a, x))
    return n


def enumerate_adversaries(
    game: ConcurrentGame, bound: int = 10**6
) -> Iterator[tuple[dict[str, str], dict[tuple[str, str, str], str]]]:
    """Every positional pair ``(sigma2, sigma3)``, in stable order."""
    n = count_adversaries(game)
    if n > bound:
        raise AdversaryBoundExceeded(n, bound)
    keys = [(q, a, x) for q in game.states for a in game.gamma1(q) for x in game.gamma2(q)]
    for xs in itertools.product(*(game.gamma2(q) for q in game.states)):
        sigma2 = dict(zip(game.states, xs))
        for ts in itertools.product(*(game.succ(*k) for k in keys)):
            yield sigma2, dict(zip(keys, ts))


def adversary_scripts(game: ConcurrentGame, bound: int = 10**6) -> Iterator[OpponentScript]:
    for i, (s2, s3) in enumerate(enumerate_adversaries(game, bound)):
        yield positional_opponent(game, s2, s3, name=f"positional-{i}")


def positional_outcomes(
    game: ConcurrentGame,
    strategy: Mapping[str, Action],
    start: str,
    goals: Optional[Iterable[str]] = None,
) -> Iterator[Play]:
    """Outcomes of a positional strategy against all positional opponent pairs.

    Against positional opponents a positional strategy yields a lasso, so the
    outcome is fixed by the choices on its simple prefix.  Only choices at
    visited states are branched on; a revisit closes a losing loop and is
    yielded with ``cutoff`` set.  A state where the strategy is undefined
    raises :class:`UndefinedStrategy`.
    """
    goals = game.goals if goals is None else frozenset(goals)
    choice = getattr(strategy, "choice", strategy)

    def walk(play: Play, seen: frozenset[str]) -> Iterator[Play]:
        q = play.final
        if q in goals:
            yield play
            return
        a = choice.get(q)
        if a is None:
            raise UndefinedStrategy(q)
        for x in game.gamma2(q):
            if isinstance(a, Joker):
                nexts: Sequence[str] = (a.to,) if a.to in game.succ(q, a.a, a.x) else ()
                if not nexts:
                    raise GameError(f"Joker {a} not available in {q!r}")
            else:
                nexts = game.succ(q, a, x)
                if not nexts:
                    raise GameError(f"action {a!r} not enabled in {q!r}")
            for t in nexts:
                nxt = play.extend(a, x, t)
                if t in seen and t not in goals:
                    yield Play(nxt.start, nxt.steps, nxt.final, cutoff=True)
                else:
                    yield from walk(nxt, seen | {t})

    yield from walk(Play(start), frozenset([start]))


def exact_joker_violations(
    game: ConcurrentGame,
    table: RankTable,
    strategy: Mapping[str, Action],
) -> list[str]:
    """States of the Joker attractor with an outcome that loses or uses a Joker count other than the rank."""
    bad: list[str] = []
    for q in game.order(table.region):
        k = table.j_rank[q]
        for play in positional_outcomes(game, strategy, q, table.goals):
            w = win_index(play, table.goals)
            if w == INF:
                bad.append(f"{q}: losing outcome {play.states}")
                break
            if play.jokers(w) != k:
                bad.append(f"{q}: outcome {play.states} uses {play.jokers(w)} Jokers, rank {k}")
                break
    return bad


def outcome_joker_counts(game: ConcurrentGame, strategy: Mapping[str, Action], start: str,
                         goals: Optional[Iterable[str]] = None) -> set[float]:
    """Joker counts of winning outcomes, with ``INF`` standing for a losing one."""
    goals = game.goals if goals is None else frozenset(goals)
    out: set[float] = set()
    for play in positional_outcomes(game, strategy, start, goals):
        w = win_index(play, goals)
        out.add(INF if w == INF else play.jokers(w))
    return out


# -- reachability and determinacy -------------------------------------------------


def determinacy_violations(game: ConcurrentGame, table: RankTable) -> list[str]:
    """States where finite Joker rank and graph reachability of the goals disagree."""
    bad = []
    for q in game.states:
        reaches = bool(forward_reachable(game, [q]) & table.goals)
        if (table.j_rank[q] < INF) != reaches:
            bad.append(q)
    return bad


def reach_region(game: ConcurrentGame, goals: Optional[Iterable[str]] = None) -> frozenset[str]:
    return backward_reachable(game, game.goals if goals is None else goals)


# -- shortest cooperative plays -----------------------------------------------------


def cooperative_shortest(
    game: ConcurrentGame,
    table: RankTable,
    start: str,
    budget: Optional[int] = None,
    jokers_anywhere: bool = False,
) -> float:
    """Fewest moves to a goal with Players 2 and 3 cooperating and at most ``budget`` Jokers.

    Breadth-first search over (state, Jokers spent).  Regular moves use the
    restricted enabling of non-Joker states; Jokers are taken at Joker states
    (anywhere with ``jokers_anywhere``), and only when the remaining budget
    still covers the target's rank.
    """
    budget = table.j_rank[start] if budget is None else budget
    if budget == INF:
        return INF
    gamma_j = restricted_enabling(game, table)
    seen = {(start, 0)}
    queue = deque([(start, 0, 0)])
    while queue:
        q, used, n = queue.popleft()
        if q in table.goals:
            return n
        moves: list[tuple[str, int]] = []
        for a in gamma_j[q]:
            for x in game.gamma2(q):
                moves.extend((t, used) for t in game.succ(q, a, x))
        if jokers_anywhere or q in table.joker_states:
            moves.extend((t, used + 1) for t in game.post(q))
        for t, u in moves:
            if u + table.j_rank[t] > budget or (t, u) in seen:
                continue
            seen.add((t, u))
            queue.append((t, u, n + 1))
    return INF


# -- strategy comparisons ------------------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    a_wins: frozenset[str]
    b_wins: frozenset[str]
    verdict: str

    def as_dict(self) -> dict:
        return {"a_wins": sorted(self.a_wins), "b_wins": sorted(self.b_wins), "verdict": self.verdict}


def dominance_compare(
    game: ConcurrentGame,
    sigma_a: Mapping[str, Action],
    sigma_b: Mapping[str, Action],
    opponents: Sequence[OpponentScript],
    start: Optional[str] = None,
    goals: Optional[Iterable[str]] = None,
    step_cap: Optional[int] = None,
) -> DominanceReport:
    """Compare the opponents each strategy beats within the step cap.

    Verdict is ``"A"`` or ``"B"`` when one win-set strictly contains the
    other, ``"equal"`` or ``"incomparable"`` otherwise.
    """
    goals = game.goals if goals is None else frozenset(goals)

    def wins(sigma) -> frozenset[str]:
        table = getattr(sigma, "choice", sigma)
        out = set()
        for opp in opponents:
            play = simulate(game, table, opp, start, goals, step_cap)
            if win_index(play, goals) != INF:
                out.add(opp.name)
        return frozenset(out)

    wa, wb = wins(sigma_a), wins(sigma_b)
    if wa == wb:
        verdict = "equal"
    elif wb < wa:
        verdict = "A"
    elif wa < wb:
        verdict = "B"
    else:
        verdict = "incomparable"
    return DominanceReport(wa, wb, verdict)


def global_cost_minimal_check(
    jg: JokerGame,
    strategy: Mapping[str, Action],
    goals: Optional[Iterable[str]] = None,
    values: Optional[ValueTable] = None,
) -> bool:
    """Whether the strategy is cost-minimal from every state that can reach the goals."""
    goals = jg.goals if goals is None else frozenset(goals)
    vt = value_iterate(jg, goals) if values is None else values
    for q in jg.base.order(reach_region(jg.base, goals)):
        if strategy_cost(jg, strategy, q, goals) != vt.v[q]:
            return False
    return True


def joker_strategies(jg: JokerGame, states: Iterable[str], bound: int = 10**5) -> Iterator[dict[str, Action]]:
    """Every positional Joker-game strategy on ``states``."""
    states = list(states)
    options = [jg.enabled1(q) for q in states]
    n = math.prod(len(o) for o in options)
    if n > bound:
        raise AdversaryBoundExceeded(n, bound)
    for pick in itertools.product(*options):
        yield dict(zip(states, pick))


def cost_minimal_strategies(
    jg: JokerGame, start: str, goals: Optional[Iterable[str]] = None, bound: int = 10**5
) -> Iterator[dict[str, Action]]:
    """Positional strategies whose worst-case cost from ``start`` equals the value."""
    goals = jg.goals if goals is None else frozenset(goals)
    vt = value_iterate(jg, goals)
    target = vt.v[start]
    live = [q for q in jg.base.states if q not in goals]
    for sigma in joker_strategies(jg, live, bound):
        if strategy_cost(jg, sigma, start, goals) == target:
            yield sigma


# -- almost-sure winning by enumeration ------------------------------------------------


def wins_almost_surely(
    game: ConcurrentGame,
    support: Mapping[str, Sequence[str]],
    start: str,
    goals: Optional[Iterable[str]] = None,
    bound: int = 10**6,
) -> bool:
    """Whether playing uniformly over ``support`` reaches the goals with probability one.

    Against a fixed memoryless randomised strategy the opponents face a
    Markov decision process, where positional choices are enough to keep the
    play away from the goals with positive probability.  So it suffices that,
    for every positional pair, every state reachable in the induced Markov
    chain can still reach a goal.
    """
    goals = game.goals if goals is None else frozenset(goals)
    for sigma2, sigma3 in enumerate_adversaries(game, bound):
        edges: dict[str, set[str]] = {}
        seen = {start}
        stack = [start]
        while stack:
            q = stack.pop()
            if q in goals:
                edges[q] = set()
                continue
            acts = support.get(q)
            if not acts:
                return False
            x = sigma2[q]
            edges[q] = {sigma3[(q, a, x)] for a in acts}
            for t in edges[q] - seen:
                seen.add(t)
                stack.append(t)
        good = set(goals & seen)
        changed = True
        while changed:
            changed = False
            for q in seen - good:
                if edges[q] & good:
                    good.add(q)
                    changed = True
        if good != seen:
            return False
    return True
