"""Concurrent reachability games: the model, plays, validation and simulation.

A game is an explicit finite graph.  In every state both players pick an
action simultaneously and the pair is mapped to a set of successor states;
which successor is taken is decided by a third party ("Player 3").

States and actions are plain strings.  The order in which they are listed in
the game is the stable ordering used for all tie-breaking and output.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

INF = math.inf


class Joker(NamedTuple):
    """A Joker action: Player 1 fixes her action, the opponent's action and the successor."""

    a: str
    x: str
    to: str


# A Player-1 action in the Joker game: a regular action name or a Joker triple.
Action = Union[str, Joker]


def is_joker(action: Action) -> bool:
    return isinstance(action, Joker)


class GameError(ValueError):
    """Raised for malformed games and illegal moves."""


@dataclass(frozen=True, eq=False)
class ConcurrentGame:
    states: tuple[str, ...]
    initial: str
    act1: tuple[str, ...]
    act2: tuple[str, ...]
    enabled1: Mapping[str, tuple[str, ...]]
    enabled2: Mapping[str, tuple[str, ...]]
    # only non-empty entries are stored
    moves: Mapping[tuple[str, str, str], tuple[str, ...]]
    goals: frozenset[str] = frozenset()
    index: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {q: i for i, q in enumerate(self.states)})
        a1 = {a: i for i, a in enumerate(self.act1)}
        a2 = {x: i for i, x in enumerate(self.act2)}
        object.__setattr__(self, "_a1", a1)
        object.__setattr__(self, "_a2", a2)
        pred: dict[str, set[str]] = {}
        for (q, _a, _x), succ in self.moves.items():
            for t in succ:
                pred.setdefault(t, set()).add(q)
        object.__setattr__(self, "_pred", {t: frozenset(s) for t, s in pred.items()})

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        initial: str,
        act1: Iterable[str],
        act2: Iterable[str],
        enabled1: Mapping[str, Iterable[str]],
        enabled2: Mapping[str, Iterable[str]],
        moves: Mapping[tuple[str, str, str], Iterable[str]],
        goals: Iterable[str] = (),
    ) -> "ConcurrentGame":
        """Normalise containers and order everything by the declared orderings."""
        states = tuple(states)
        act1 = tuple(act1)
        act2 = tuple(act2)
        sidx = {q: i for i, q in enumerate(states)}
        i1 = {a: i for i, a in enumerate(act1)}
        i2 = {x: i for i, x in enumerate(act2)}

        def _order(items, idx):
            return tuple(sorted(set(items), key=lambda v: idx.get(v, len(idx))))

        norm_moves = {}
        for key, succ in moves.items():
            succ = _order(succ, sidx)
            if succ:
                norm_moves[tuple(key)] = succ
        return cls(
            states=states,
            initial=initial,
            act1=act1,
            act2=act2,
            enabled1={q: _order(v, i1) for q, v in enabled1.items()},
            enabled2={q: _order(v, i2) for q, v in enabled2.items()},
            moves=norm_moves,
            goals=frozenset(goals),
        )

    def with_goals(self, goals: Iterable[str]) -> "ConcurrentGame":
        return ConcurrentGame(
            self.states, self.initial, self.act1, self.act2,
            self.enabled1, self.enabled2, self.moves, frozenset(goals),
        )

    # -- queries -----------------------------------------------------------

    def gamma1(self, q: str) -> tuple[str, ...]:
        return self.enabled1.get(q, ())

    def gamma2(self, q: str) -> tuple[str, ...]:
        return self.enabled2.get(q, ())

    def succ(self, q: str, a: str, x: str) -> tuple[str, ...]:
        return self.moves.get((q, a, x), ())

    def post(self, q: str) -> frozenset[str]:
        """All states reachable from ``q`` in one move."""
        return frozenset(t for a in self.gamma1(q) for x in self.gamma2(q) for t in self.succ(q, a, x))

    def predecessors(self, q: str) -> frozenset[str]:
        return self._pred.get(q, frozenset())

    def edges(self, q: str) -> Iterable[tuple[str, str, str]]:
        """Yield every (a, x, q') with q' in Moves(q, a, x), in stable order."""
        for a in self.gamma1(q):
            for x in self.gamma2(q):
                for t in self.succ(q, a, x):
                    yield a, x, t

    def order(self, states: Iterable[str]) -> list[str]:
        return sorted(states, key=self.index.__getitem__)

    def action_key(self, action: Action) -> tuple:
        """Sort key for Player-1 actions: regular actions first, then Jokers by (a, x, q')."""
        if isinstance(action, Joker):
            return (1, self._a1[action.a], self._a2[action.x], self.index[action.to])
        return (0, self._a1[action], 0, 0)

    def a2_key(self, x: str) -> int:
        return self._a2[x]

    def joker_actions(self, q: str) -> list[Joker]:
        """The Joker actions enabled in ``q``, enumerated on demand."""
        return [Joker(a, x, t) for a, x, t in self.edges(q)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConcurrentGame):
            return NotImplemented
        return (
            self.states == other.states
            and self.initial == other.initial
            and self.act1 == other.act1
            and self.act2 == other.act2
            and dict(self.enabled1) == dict(other.enabled1)
            and dict(self.enabled2) == dict(other.enabled2)
            and dict(self.moves) == dict(other.moves)
            and self.goals == other.goals
        )

    __hash__ = object.__hash__


@dataclass(frozen=True)
class Violation:
    rule: str
    where: tuple
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.where}: {self.message}"


def validate(game: ConcurrentGame) -> list[Violation]:
    """Check the structural invariants of a game; an empty list means valid."""
    out: list[Violation] = []
    states = set(game.states)
    if len(states) != len(game.states):
        out.append(Violation("unique-states", (), "duplicate state identifiers"))
    if not game.act1 or not game.act2:
        out.append(Violation("nonempty-actions", (), "action alphabets must be non-empty"))
    if game.initial not in states:
        out.append(Violation("initial", (game.initial,), "initial state is not a state"))
    for g in sorted(game.goals - states):
        out.append(Violation("goals", (g,), "goal is not a state"))
    act1, act2 = set(game.act1), set(game.act2)
    for q in game.states:
        g1, g2 = game.gamma1(q), game.gamma2(q)
        if not g1:
            out.append(Violation("enabled1-nonempty", (q,), "no Player-1 action enabled"))
        if not g2:
            out.append(Violation("enabled2-nonempty", (q,), "no Player-2 action enabled"))
        for a in g1:
            if a not in act1:
                out.append(Violation("enabled1-alphabet", (q, a), "action not in Act1"))
        for x in g2:
            if x not in act2:
                out.append(Violation("enabled2-alphabet", (q, x), "action not in Act2"))
        for a in g1:
            for x in g2:
                if not game.succ(q, a, x):
                    out.append(Violation("moves-nonempty", (q, a, x), "enabled pair has no successor"))
    for q in set(game.enabled1) - states:
        out.append(Violation("enabled1-state", (q,), "enabling given for unknown state"))
    for q in set(game.enabled2) - states:
        out.append(Violation("enabled2-state", (q,), "enabling given for unknown state"))
    for (q, a, x), succ in game.moves.items():
        if q not in states:
            out.append(Violation("moves-source", (q, a, x), "source is not a state"))
            continue
        if a not in game.gamma1(q) or x not in game.gamma2(q):
            out.append(Violation("moves-enabled", (q, a, x), "move defined for a disabled action pair"))
        for t in succ:
            if t not in states:
                out.append(Violation("moves-target", (q, a, x, t), "successor is not a state"))
    return out


def check(game: ConcurrentGame) -> ConcurrentGame:
    problems = validate(game)
    if problems:
        raise GameError("invalid game: " + "; ".join(map(str, problems)))
    return game


# -- plays -------------------------------------------------------------------


class Step(NamedTuple):
    state: str
    a1: Action
    a2: str


@dataclass(frozen=True)
class Play:
    """A finite play prefix ``q0 <a0,x0> q1 ... q_n``.

    ``cutoff`` marks a simulation that was stopped by the step cap (or because
    the strategy had no move) rather than by reaching a goal.
    """

    start: str
    steps: tuple[Step, ...] = ()
    final: Optional[str] = None
    cutoff: bool = False

    def __post_init__(self) -> None:
        if self.final is None:
            object.__setattr__(self, "final", self.start)

    @property
    def states(self) -> list[str]:
        return [s.state for s in self.steps] + [self.final]

    def __len__(self) -> int:
        return len(self.steps)

    def extend(self, a1: Action, a2: str, nxt: str) -> "Play":
        return Play(self.start, self.steps + (Step(self.final, a1, a2),), nxt)

    @property
    def last_a1(self) -> Optional[Action]:
        return self.steps[-1].a1 if self.steps else None

    @property
    def last_a2(self) -> Optional[str]:
        return self.steps[-1].a2 if self.steps else None

    def jokers(self, upto: Optional[int] = None) -> int:
        """Number of Joker actions among the first ``upto`` steps."""
        steps = self.steps if upto is None else self.steps[: int(min(upto, len(self.steps)))]
        return sum(1 for s in steps if isinstance(s.a1, Joker))


def win_index(play: Play, goals: Iterable[str]) -> float:
    """Least j with the j-th state in ``goals``; ``INF`` if there is none."""
    goals = frozenset(goals)
    for j, q in enumerate(play.states):
        if q in goals:
            return j
    return INF


def check_play(game: ConcurrentGame, play: Play) -> None:
    """Raise :class:`GameError` unless every step respects enabling and moves."""
    states = play.states
    for j, s in enumerate(play.steps):
        nxt = states[j + 1]
        if s.a2 not in game.gamma2(s.state):
            raise GameError(f"step {j}: Player-2 action {s.a2!r} not enabled in {s.state!r}")
        allowed = _successors(game, s.state, s.a1, s.a2)
        if nxt not in allowed:
            raise GameError(f"step {j}: {nxt!r} not a successor of {s.state!r} under {s.a1!r},{s.a2!r}")


# -- moving ------------------------------------------------------------------

Resolver = Union[None, random.Random, Callable[[Sequence[str]], str]]


def _successors(game: ConcurrentGame, q: str, a1: Action, a2: str) -> tuple[str, ...]:
    if isinstance(a1, Joker):
        if a1.to not in game.succ(q, a1.a, a1.x):
            raise GameError(f"Joker {tuple(a1)} not enabled in {q!r}")
        return (a1.to,)
    if a1 not in game.gamma1(q):
        raise GameError(f"Player-1 action {a1!r} not enabled in {q!r}")
    return game.succ(q, a1, a2)


def step(game: ConcurrentGame, state: str, a1: Action, a2: str, resolver: Resolver = None) -> str:
    """Perform one move.

    ``a1`` may be a Joker, in which case the result is its target whatever
    ``a2`` is.  Nondeterminism is resolved by ``resolver``: a callable picking
    from the ordered successor tuple, a :class:`random.Random` (uniform
    choice), or ``None`` which only accepts a singleton move set.
    """
    if a2 not in game.gamma2(state):
        raise GameError(f"Player-2 action {a2!r} not enabled in {state!r}")
    succ = _successors(game, state, a1, a2)
    if len(succ) == 1:
        return succ[0]
    if resolver is None:
        raise GameError(f"move ({state!r},{a1!r},{a2!r}) is nondeterministic; a resolver is required")
    if isinstance(resolver, random.Random):
        return succ[resolver.randrange(len(succ))]
    chosen = resolver(succ)
    if chosen not in succ:
        raise GameError(f"resolver chose {chosen!r}, not in {succ}")
    return chosen


# -- opponents ---------------------------------------------------------------


@dataclass(frozen=True)
class OpponentScript:
    """Player-2 and Player-3 behaviour as functions of the play prefix.

    ``rule2(play)`` returns the Player-2 action for the last state of
    ``play``; ``rule3(play, a, x)`` returns the successor.  Outputs are
    checked against the game when used through :meth:`player2` and
    :meth:`player3`.
    """

    rule2: Callable[[Play], str]
    rule3: Callable[[Play, str, str], str]
    name: str = ""

    def player2(self, game: ConcurrentGame, play: Play) -> str:
        x = self.rule2(play)
        if x not in game.gamma2(play.final):
            raise GameError(f"opponent {self.name!r} chose disabled action {x!r} in {play.final!r}")
        return x

    def player3(self, game: ConcurrentGame, play: Play, a: str, x: str) -> str:
        t = self.rule3(play, a, x)
        if t not in game.succ(play.final, a, x):
            raise GameError(f"opponent {self.name!r} chose {t!r}, not in Moves{(play.final, a, x)}")
        return t


def positional_opponent(
    game: ConcurrentGame,
    sigma2: Mapping[str, str],
    sigma3: Mapping[tuple[str, str, str], str] = {},
    name: str = "",
) -> OpponentScript:
    """Opponent given by tables; missing entries fall back to the first option in stable order."""

    def rule2(play: Play) -> str:
        q = play.final
        return sigma2.get(q) or game.gamma2(q)[0]

    def rule3(play: Play, a: str, x: str) -> str:
        q = play.final
        return sigma3.get((q, a, x)) or game.succ(q, a, x)[0]

    return OpponentScript(rule2, rule3, name)


@dataclass(frozen=True)
class Rule:
    """One line of a scripted opponent: all given fields must match.

    ``round`` is the index of the decision (0 for the first move),
    ``state`` the current state, ``prev_state`` the state before it and
    ``last_a1`` the Player-1 action of the previous step.
    """

    action: str
    state: Optional[str] = None
    prev_state: Optional[str] = None
    last_a1: Optional[str] = None
    round: Optional[int] = None

    def matches(self, play: Play) -> bool:
        if self.state is not None and play.final != self.state:
            return False
        if self.round is not None and len(play) != self.round:
            return False
        if self.prev_state is not None and (not play.steps or play.steps[-1].state != self.prev_state):
            return False
        if self.last_a1 is not None:
            last = play.last_a1
            if isinstance(last, Joker):
                last = last.a
            if last != self.last_a1:
                return False
        return True


def scripted_opponent(
    game: ConcurrentGame,
    rules: Sequence[Rule],
    default: Optional[str] = None,
    sigma3: Mapping[tuple[str, str, str], str] = {},
    name: str = "",
) -> OpponentScript:
    """First matching rule wins, then ``default``.

    A chosen action that is not enabled in the current state is replaced by
    the first enabled one, so scripts written for one state stay legal in
    states with a smaller alphabet.
    """

    def rule2(play: Play) -> str:
        enabled = game.gamma2(play.final)
        for r in rules:
            if r.matches(play):
                choice = r.action
                break
        else:
            choice = default
        return choice if choice in enabled else enabled[0]

    def rule3(play: Play, a: str, x: str) -> str:
        q = play.final
        return sigma3.get((q, a, x)) or game.succ(q, a, x)[0]

    return OpponentScript(rule2, rule3, name)


def uniform_opponent(game: ConcurrentGame, rng: random.Random, name: str = "uniform") -> OpponentScript:
    """Impartial opponent: uniform over enabled actions and over successors."""

    def rule2(play: Play) -> str:
        enabled = game.gamma2(play.final)
        return enabled[rng.randrange(len(enabled))]

    def rule3(play: Play, a: str, x: str) -> str:
        succ = game.succ(play.final, a, x)
        return succ[rng.randrange(len(succ))]

    return OpponentScript(rule2, rule3, name)


def default_step_cap(game: ConcurrentGame) -> int:
    return 4 * len(game.states)


def simulate(
    game: ConcurrentGame,
    player1: Union[Mapping[str, Action], Callable[[Play], Optional[Action]]],
    opponent: OpponentScript,
    start: Optional[str] = None,
    goals: Optional[Iterable[str]] = None,
    step_cap: Optional[int] = None,
) -> Play:
    """Play Player 1 against ``opponent`` until a goal, the step cap, or an undefined choice.

    ``player1`` is either a positional table (state -> action) or a callable
    on the play prefix returning an action or ``None``.
    """
    goals = game.goals if goals is None else frozenset(goals)
    cap = default_step_cap(game) if step_cap is None else step_cap
    play = Play(game.initial if start is None else start)
    choose = player1 if callable(player1) else (lambda p: player1.get(p.final))
    while play.final not in goals:
        if len(play) >= cap:
            return Play(play.start, play.steps, play.final, cutoff=True)
        a1 = choose(play)
        if a1 is None:
            return Play(play.start, play.steps, play.final, cutoff=True)
        x = opponent.player2(game, play)
        if isinstance(a1, Joker):
            _successors(game, play.final, a1, x)
            nxt = a1.to
        else:
            if a1 not in game.gamma1(play.final):
                raise GameError(f"Player-1 action {a1!r} not enabled in {play.final!r}")
            nxt = opponent.player3(game, play, a1, x)
        play = play.extend(a1, x, nxt)
    return play


# -- reachability helpers -----------------------------------------------------


def backward_reachable(game: ConcurrentGame, targets: Iterable[str]) -> frozenset[str]:
    """States with some path (any actions, any resolution) into ``targets``."""
    seen = set(targets)
    stack = list(seen)
    while stack:
        t = stack.pop()
        for p in game.predecessors(t):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def forward_reachable(game: ConcurrentGame, sources: Iterable[str]) -> frozenset[str]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for t in game.post(q):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


# -- random games -----------------------------------------------------------


def random_game(
    n_states: int,
    n_act1: int = 2,
    n_act2: int = 2,
    branching: int = 2,
    seed: int = 0,
    n_goals: int = 1,
) -> ConcurrentGame:
    """A random valid game; every enabled pair gets 1..``branching`` successors."""
    rng = random.Random(seed)
    states = [f"q{i}" for i in range(n_states)]
    act1 = [f"a{i}" for i in range(n_act1)]
    act2 = [f"x{i}" for i in range(n_act2)]
    enabled1, enabled2, moves = {}, {}, {}
    for q in states:
        enabled1[q] = rng.sample(act1, rng.randint(1, n_act1))
        enabled2[q] = rng.sample(act2, rng.randint(1, n_act2))
        for a in enabled1[q]:
            for x in enabled2[q]:
                moves[(q, a, x)] = rng.sample(states, rng.randint(1, min(branching, n_states)))
    goals = rng.sample(states, min(n_goals, n_states))
    return ConcurrentGame.build(states, states[0], act1, act2, enabled1, enabled2, moves, goals)
