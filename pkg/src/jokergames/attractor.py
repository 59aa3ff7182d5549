"""Attractors and Joker attractors with ranks and witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .game import INF, ConcurrentGame, Joker


def pre(game: ConcurrentGame, target: Iterable[str]) -> frozenset[str]:
    """States with at least one move into ``target``."""
    out: set[str] = set()
    for t in target:
        out |= game.predecessors(t)
    return frozenset(out)


def forcing_actions(game: ConcurrentGame, q: str, target: frozenset[str]) -> tuple[str, ...]:
    """Player-1 actions at ``q`` whose every move, for every Player-2 action, lands in ``target``."""
    return tuple(
        a for a in game.gamma1(q)
        if all(set(game.succ(q, a, x)) <= target for x in game.gamma2(q))
    )


def cpre1(game: ConcurrentGame, target: Iterable[str]) -> frozenset[str]:
    target = frozenset(target)
    return frozenset(q for q in game.states if forcing_actions(game, q, target))


def joker_witnesses(game: ConcurrentGame, q: str, target: frozenset[str]) -> tuple[Joker, ...]:
    """Joker actions of ``q`` landing in ``target``, canonical one first."""
    return tuple(Joker(a, x, t) for a, x, t in game.edges(q) if t in target)


@dataclass(frozen=True)
class AttractorResult:
    target: frozenset[str]
    region: frozenset[str]
    rank: Mapping[str, int]
    layers: tuple[frozenset[str], ...]
    # state -> forcing actions at the layer the state entered, canonical first
    witness: Mapping[str, tuple[str, ...]]

    def rank_of(self, q: str) -> float:
        return self.rank.get(q, INF)


def attractor(game: ConcurrentGame, target: Iterable[str]) -> AttractorResult:
    """Least fixed point of ``X -> X | CPre1(X)`` from ``target``, layer by layer.

    Each (state, action) pair keeps a count of its (x, q') edges that still
    leave the current set; a pair whose count hits zero forces the set.
    """
    target = frozenset(target)
    outside: dict[tuple[str, str], int] = {}
    into: dict[str, list[tuple[tuple[str, str], int]]] = {}
    for q in game.states:
        if q in target:
            continue
        for a in game.gamma1(q):
            n = 0
            hits: dict[str, int] = {}
            for x in game.gamma2(q):
                for t in game.succ(q, a, x):
                    n += 1
                    hits[t] = hits.get(t, 0) + 1
            outside[(q, a)] = n
            for t, m in hits.items():
                into.setdefault(t, []).append(((q, a), m))

    region = set(target)
    rank = {q: 0 for q in target}
    layers = [frozenset(target)]
    witness: dict[str, tuple[str, ...]] = {}
    frontier = list(target)
    k = 0
    while frontier:
        ready: set[tuple[str, str]] = set()
        for t in frontier:
            for pair, m in into.get(t, ()):
                outside[pair] -= m
                if outside[pair] == 0 and pair[0] not in region:
                    ready.add(pair)
        # pairs forcing the previous layer but whose state entered earlier are skipped above
        new: dict[str, list[str]] = {}
        for q, a in ready:
            new.setdefault(q, []).append(a)
        k += 1
        for q, acts in new.items():
            region.add(q)
            rank[q] = k
            witness[q] = tuple(a for a in game.gamma1(q) if a in acts)
        frontier = game.order(new)
        if new:
            layers.append(frozenset(region))
    return AttractorResult(target, frozenset(region), rank, tuple(layers), witness)


@dataclass(frozen=True)
class RankTable:
    """Layers, ranks and Joker states of the Joker attractor.

    ``layers[k]`` is the k-th Joker attractor layer, ``joker_layers[k]`` (k >= 1)
    the predecessor set it was built from.  ``inner[k]`` is the attractor
    computed at layer k: to the goals for k = 0, to ``joker_layers[k]`` otherwise.
    """

    goals: frozenset[str]
    states: tuple[str, ...]
    a_rank: Mapping[str, float]
    j_rank: Mapping[str, float]
    joker_states: frozenset[str]
    layers: tuple[frozenset[str], ...]
    joker_layers: Mapping[int, frozenset[str]]
    inner: Mapping[int, AttractorResult] = field(repr=False)

    @property
    def region(self) -> frozenset[str]:
        return self.layers[-1]

    @property
    def attr(self) -> frozenset[str]:
        return self.layers[0]

    def is_joker_state(self, q: str) -> bool:
        return q in self.joker_states


@dataclass(frozen=True)
class WitnessTable:
    """Witnesses for strategy extraction.

    ``attr[k]`` maps states entering layer k's inner attractor to their
    forcing actions; ``joker[q]`` lists the Joker actions of a Joker state that
    land in the previous layer, and ``joker_layer[q]`` is the layer it entered.
    """

    attr: Mapping[int, Mapping[str, tuple[str, ...]]]
    joker: Mapping[str, tuple[Joker, ...]]
    joker_layer: Mapping[str, int]

    def attr_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((q, a) for w in self.attr.values() for q, acts in w.items() for a in acts)

    def joker_triples(self) -> frozenset[Joker]:
        return frozenset(j for js in self.joker.values() for j in js)


def joker_attractor(game: ConcurrentGame, goals: Optional[Iterable[str]] = None) -> tuple[RankTable, WitnessTable]:
    goals = game.goals if goals is None else frozenset(goals)
    base = attractor(game, goals)
    layers = [base.region]
    joker_layers: dict[int, frozenset[str]] = {}
    inner = {0: base}
    joker_wit: dict[str, tuple[Joker, ...]] = {}
    joker_layer: dict[str, int] = {}
    k = 0
    while True:
        current = layers[k]
        pre_set = pre(game, current)
        res = attractor(game, pre_set)
        nxt = current | res.region
        if nxt == current:
            break
        for q in game.order(pre_set - current):
            joker_wit[q] = joker_witnesses(game, q, current)
            joker_layer[q] = k + 1
        joker_layers[k + 1] = pre_set
        inner[k + 1] = res
        layers.append(nxt)
        k += 1

    j_rank: dict[str, float] = {q: INF for q in game.states}
    for k in range(len(layers) - 1, -1, -1):
        for q in layers[k]:
            j_rank[q] = k
    a_rank = {q: base.rank_of(q) for q in game.states}
    joker_states = frozenset(joker_wit)
    witnesses = WitnessTable(
        attr={k: res.witness for k, res in inner.items()},
        joker=joker_wit,
        joker_layer=joker_layer,
    )
    table = RankTable(
        goals=goals,
        states=game.states,
        a_rank=a_rank,
        j_rank=j_rank,
        joker_states=joker_states,
        layers=tuple(layers),
        joker_layers=joker_layers,
        inner=inner,
    )
    return table, witnesses
