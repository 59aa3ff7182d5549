"""Model-based testing as a game between a tester and a system under test.

An input/output LTS becomes a concurrent game.  The tester (Player 1) may
send an enabled input, observe, or stop; the SUT (Player 2) may produce an
enabled output or do nothing.  When an input and an output happen together
either may be processed, which is modelled as a nondeterministic move.

Experiments pit a tester following a Joker-inspired strategy against a
uniformly random tester, both facing an impartial SUT that picks uniformly
among its options.
"""
from __future__ import annotations

import csv
import io
import random
import re
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Iterable, Optional, Sequence, Union

from .attractor import joker_attractor
from .game import INF, ConcurrentGame, GameError, check
from .strategy import PositionalStrategy, inspired_strategy, joker_attractor_strategy

OBSERVE = "observe"
STOP = "stop"
NOTHING = "nothing"
INPUT, OUTPUT = "input", "output"


@dataclass(frozen=True)
class LTS:
    states: tuple[str, ...]
    initial: str
    transitions: tuple[tuple[str, str, str], ...]

    @staticmethod
    def label_kind(label: str) -> str:
        if label.endswith("?"):
            return INPUT
        if label.endswith("!"):
            return OUTPUT
        raise GameError(f"label {label!r} is neither an input (?) nor an output (!)")

    @property
    def inputs(self) -> list[str]:
        return sorted({l for _, l, _ in self.transitions if self.label_kind(l) == INPUT})

    @property
    def outputs(self) -> list[str]:
        return sorted({l for _, l, _ in self.transitions if self.label_kind(l) == OUTPUT})

    def validate(self) -> None:
        known = set(self.states)
        if len(known) != len(self.states):
            raise GameError("duplicate LTS states")
        if self.initial not in known:
            raise GameError(f"initial state {self.initial!r} unknown")
        for src, label, dst in self.transitions:
            if src not in known or dst not in known:
                raise GameError(f"transition ({src}, {label}, {dst}) uses an unknown state")
            self.label_kind(label)


_HEADER = re.compile(r"^\s*des\s*\(\s*(\S+?)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_TRANS = re.compile(r'^\s*\(\s*([^,\s]+)\s*,\s*"([^"]*)"\s*,\s*([^,\s)]+)\s*\)\s*$')


def parse_aut(text: str) -> LTS:
    """Parse the Aldebaran format; states are numbered ``0 .. nstates-1``."""
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        raise GameError("empty .aut file")
    m = _HEADER.match(lines[0])
    if not m:
        raise GameError(f"bad .aut header: {lines[0]!r}")
    init, ntrans, nstates = m.group(1), int(m.group(2)), int(m.group(3))
    trans = []
    for lineno, line in enumerate(lines[1:], start=2):
        t = _TRANS.match(line)
        if not t:
            raise GameError(f"line {lineno}: bad transition {line!r}")
        trans.append((t.group(1), t.group(2), t.group(3)))
    if len(trans) != ntrans:
        raise GameError(f"header announces {ntrans} transitions, found {len(trans)}")
    lts = LTS(tuple(str(i) for i in range(nstates)), init, tuple(trans))
    lts.validate()
    return lts


def read_aut(path: Union[str, Path]) -> LTS:
    return parse_aut(Path(path).read_text(encoding="utf-8"))


def format_aut(lts: LTS) -> str:
    index = {s: i for i, s in enumerate(lts.states)}
    out = [f"des ({index[lts.initial]}, {len(lts.transitions)}, {len(lts.states)})"]
    out += [f'({index[s]}, "{l}", {index[d]})' for s, l, d in lts.transitions]
    return "\n".join(out) + "\n"


def sink_name(lts: LTS) -> str:
    name = STOP
    while name in lts.states:
        name += "_"
    return name


def lts_to_game(lts: LTS, goals: Iterable[str] = ()) -> ConcurrentGame:
    """Translate an LTS into the tester-versus-SUT game (nondeterministic regime).

    An extra sink state absorbs the ``stop`` action.  Observing while the SUT
    does nothing leaves the state unchanged.
    """
    lts.validate()
    sink = sink_name(lts)
    succ: dict[tuple[str, str], list[str]] = {}
    for s, l, d in lts.transitions:
        succ.setdefault((s, l), []).append(d)
    enabled1: dict[str, list[str]] = {}
    enabled2: dict[str, list[str]] = {}
    moves: dict[tuple[str, str, str], list[str]] = {}
    for s in lts.states:
        ins = sorted(l for (q, l) in succ if q == s and lts.label_kind(l) == INPUT)
        outs = sorted(l for (q, l) in succ if q == s and lts.label_kind(l) == OUTPUT)
        enabled1[s] = ins + [OBSERVE, STOP]
        enabled2[s] = outs + [NOTHING]
        for x in enabled2[s]:
            moves[(s, STOP, x)] = [sink]
        for i in ins:
            moves[(s, i, NOTHING)] = succ[(s, i)]
            for o in outs:
                moves[(s, i, o)] = succ[(s, i)] + succ[(s, o)]
        for o in outs:
            moves[(s, OBSERVE, o)] = succ[(s, o)]
        moves[(s, OBSERVE, NOTHING)] = [s]
    enabled1[sink] = [OBSERVE, STOP]
    enabled2[sink] = [NOTHING]
    moves[(sink, OBSERVE, NOTHING)] = [sink]
    moves[(sink, STOP, NOTHING)] = [sink]
    game = ConcurrentGame.build(
        list(lts.states) + [sink], lts.initial,
        lts.inputs + [OBSERVE, STOP], lts.outputs + [NOTHING],
        enabled1, enabled2, moves, goals,
    )
    return check(game)


def derive_test_strategy(game: ConcurrentGame, goal: str) -> PositionalStrategy:
    """Joker-inspired Joker attractor strategy towards ``goal``, defined wherever the goal is reachable."""
    table, witnesses = joker_attractor(game, {goal})
    if table.j_rank[game.initial] == INF:
        raise GameError(f"goal {goal!r} is unreachable from {game.initial!r}")
    return inspired_strategy(joker_attractor_strategy(table, witnesses))


@dataclass(frozen=True)
class ExperimentStats:
    goal: str
    kind: str
    runs: int
    reached: int
    mean_steps: Optional[float]
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.reached <= self.runs:
            raise ValueError("reached must lie between 0 and runs")
        if (self.mean_steps is None) != (self.reached == 0):
            raise ValueError("mean_steps is defined exactly when some run reached the goal")


def _run(game, goal, choose, rng, cap, live) -> Optional[int]:
    # one tester-versus-SUT run; returns the steps to the goal or None
    q = game.initial
    for n in range(cap + 1):
        if q == goal:
            return n
        if n == cap or q not in live:
            return None
        a = choose(q, rng)
        if a is None:
            return None
        xs = game.gamma2(q)
        x = xs[rng.randrange(len(xs))]
        succ = game.succ(q, a, x)
        q = succ[rng.randrange(len(succ))] if len(succ) > 1 else succ[0]
    return None


def run_experiment(
    game: ConcurrentGame,
    goal: str,
    runs: int,
    seed: int,
    step_cap: Optional[int] = None,
) -> tuple[ExperimentStats, ExperimentStats]:
    """Simulate ``runs`` Joker-inspired and ``runs`` random test runs against an impartial SUT.

    A run stops at the goal, at the step cap, or as soon as it enters a
    state from which the goal cannot be reached.  Each run draws from its own
    generator seeded by (seed, kind, run index).
    """
    if runs < 1:
        raise ValueError("runs must be positive")
    cap = 10 * len(game.states) if step_cap is None else step_cap
    table, witnesses = joker_attractor(game, {goal})
    live = table.region
    strategy = inspired_strategy(joker_attractor_strategy(table, witnesses)) if game.initial in live else None

    def joker_choice(q, rng):
        return strategy.get(q) if strategy else None

    productive = {q: [a for a in game.gamma1(q) if a != STOP] or list(game.gamma1(q)) for q in game.states}

    def random_choice(q, rng):
        acts = productive[q]
        return acts[rng.randrange(len(acts))]

    out = []
    for kind, choose in (("joker", joker_choice), ("random", random_choice)):
        steps = []
        for i in range(runs):
            rng = random.Random(f"{seed}/{kind}/{i}")
            n = _run(game, goal, choose, rng, cap, live)
            if n is not None:
                steps.append(n)
        out.append(ExperimentStats(goal, kind, runs, len(steps), fmean(steps) if steps else None, seed))
    return out[0], out[1]


SUMMARY_COLUMNS = ("goal", "joker_reached", "random_reached", "joker_mean_steps", "random_mean_steps", "step_ratio")
CSV_COLUMNS = ("goal", "kind", "runs", "reached", "mean_steps", "seed")


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float):
        return "inf" if v == INF else f"{v:.3f}"
    return str(v)


def summarize(stats: Sequence[ExperimentStats]) -> list[dict]:
    """One row per goal comparing the Joker and random testers.

    ``step_ratio`` is random over Joker mean steps: ``inf`` when only the
    Joker tester reached the goal, ``None`` when the Joker tester never did.
    """
    by_goal: dict[str, dict[str, ExperimentStats]] = {}
    for s in stats:
        by_goal.setdefault(s.goal, {})[s.kind] = s
    rows = []
    for goal, kinds in by_goal.items():
        j, r = kinds.get("joker"), kinds.get("random")
        jm = j.mean_steps if j else None
        rm = r.mean_steps if r else None
        if not jm:
            ratio = None if jm is None else (INF if rm else None)
        else:
            ratio = INF if rm is None else rm / jm
        rows.append({
            "goal": goal,
            "joker_reached": j.reached if j else 0,
            "random_reached": r.reached if r else 0,
            "joker_mean_steps": jm,
            "random_mean_steps": rm,
            "step_ratio": ratio,
        })
    return rows


def stats_csv(stats: Sequence[ExperimentStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in stats:
        w.writerow([s.goal, s.kind, s.runs, s.reached, _fmt(s.mean_steps), s.seed])
    return buf.getvalue()


def summary_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def summary_table(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    cells = [list(SUMMARY_COLUMNS)] + [[_fmt(r[c]) for c in SUMMARY_COLUMNS] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(SUMMARY_COLUMNS))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells) + "\n"


def random_lts(
    n_states: int,
    seed: int,
    n_inputs: int = 3,
    n_outputs: int = 2,
    output_prob: float = 0.3,
    trap_prob: float = 0.05,
) -> LTS:
    """A seeded LTS shaped like a protocol: a forward spine with resets and deadlocks.

    Non-trap states form a spine: at each one some input moves to the next
    spine state.  The other inputs mostly fall back to an earlier state,
    sometimes skip ahead and sometimes lead into a deadlock (a trap state
    without transitions).  Some states also emit outputs that move forward
    or back.  Every state is reachable from state 0.
    """
    rng = random.Random(seed)
    states = [str(i) for i in range(n_states)]
    inputs = [f"i{k}?" for k in range(n_inputs)]
    outputs = [f"o{k}!" for k in range(n_outputs)]
    traps = {i for i in range(2, n_states) if rng.random() < trap_prob}
    spine = [i for i in range(n_states) if i not in traps]
    trans: list[tuple[str, str, str]] = []

    for pos, i in enumerate(spine):
        nxt = spine[pos + 1] if pos + 1 < len(spine) else spine[0]
        labels = rng.sample(inputs, rng.randint(1, n_inputs))
        trans.append((states[i], labels[0], states[nxt]))
        for label in labels[1:]:
            r = rng.random()
            if r < 0.6:
                dst = 0 if rng.random() < 0.5 else spine[rng.randint(0, pos)]
            elif r < 0.8 and traps:
                dst = rng.choice(sorted(traps))
            else:
                dst = spine[min(len(spine) - 1, pos + rng.randint(1, 3))]
            trans.append((states[i], label, states[dst]))
        if rng.random() < output_prob:
            label = rng.choice(outputs)
            fwd = spine[min(len(spine) - 1, pos + 1)]
            dst = fwd if rng.random() < 0.5 else spine[rng.randint(0, pos)]
            trans.append((states[i], label, states[dst]))
    # hang traps nobody points at off a random spine state so they stay reachable
    targeted = {d for _, _, d in trans}
    for t in sorted(traps):
        if states[t] not in targeted:
            i = rng.choice(spine)
            trans.append((states[i], rng.choice(inputs), states[t]))
    return LTS(tuple(states), states[0], tuple(trans))


def pick_goals(game: ConcurrentGame, count: int, seed: int, exclude: Iterable[str] = ()) -> list[str]:
    """``count`` distinct states reachable from the initial state, other than it and ``exclude``."""
    from .game import forward_reachable

    reach = forward_reachable(game, [game.initial])
    skip = set(exclude) | {game.initial}
    pool = [q for q in game.states if q in reach and q not in skip]
    rng = random.Random(seed)
    return sorted(rng.sample(pool, min(count, len(pool))), key=game.index.__getitem__)
