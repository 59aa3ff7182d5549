"""Command line entry point: ``jokergames <subcommand> ...``.

Exit codes: 0 on success, 1 when an oracle check finds a violation, 2 on
bad input (unreadable or malformed files, unknown states, bad flags).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .attractor import joker_attractor
from .game import INF, GameError, Rule, scripted_opponent, uniform_opponent, validate, win_index
from .gamefile import action_from_json, action_to_json, load_game, save_game
from .joker import build_joker_game
from .mbt import (
    format_aut, lts_to_game, random_lts, read_aut, run_experiment, stats_csv, summarize, summary_table,
)
from .oracle import (
    adversary_scripts, cooperative_shortest, determinacy_violations, dominance_compare,
    exact_joker_violations, value_iterate,
)
from .probabilistic import monte_carlo, p_joker_attractor, prob_joker_strategy
from .strategy import (
    PositionalStrategy, distance, inspired_strategy, joker_attractor_strategy, short_joker_strategy,
)

REPORT_VERSION = 1


class InputError(Exception):
    pass


def _num(v):
    return "inf" if v == INF else v


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _load(args):
    try:
        game = load_game(args.game, validate=False)
    except OSError as exc:
        raise InputError(f"cannot read {args.game}: {exc.strerror}") from None
    except GameError as exc:
        raise InputError(str(exc)) from None
    problems = validate(game)
    if problems:
        raise InputError(f"{args.game}: invalid game: " + "; ".join(map(str, problems)))
    goals = getattr(args, "goals", None)
    if goals:
        chosen = [g for g in goals.split(",") if g]
        unknown = [g for g in chosen if g not in game.index]
        if unknown:
            raise InputError(f"unknown goal states: {', '.join(unknown)}")
        game = game.with_goals(chosen)
    return game


# -- subcommands --------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        game = load_game(args.game, validate=False)
    except OSError as exc:
        raise InputError(f"cannot read {args.game}: {exc.strerror}") from None
    except GameError as exc:
        raise InputError(str(exc)) from None
    problems = validate(game)
    for p in problems:
        print(p)
    if problems:
        return 2
    print(f"ok: {len(game.states)} states")
    return 0


def _rank_rows(game, almost_sure: bool) -> list[dict]:
    table, _ = joker_attractor(game)
    ptable = p_joker_attractor(game) if almost_sure else None
    rows = []
    for q in game.states:
        row = {
            "state": q,
            "aRank": _num(table.a_rank[q]),
            "jRank": _num(table.j_rank[q]),
            "jokerState": q in table.joker_states,
        }
        if ptable is not None:
            row["pJRank"] = _num(ptable.pj_rank[q])
            row["pJokerState"] = q in ptable.joker_states
        rows.append(row)
    return rows


def cmd_solve(args) -> int:
    game = _load(args)
    rows = _rank_rows(game, args.almost_sure)
    cols = list(rows[0])
    if args.format == "json":
        _emit({"schema_version": REPORT_VERSION, "goals": game.order(game.goals), "ranks": rows})
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in r.items()})
        sys.stdout.write(buf.getvalue())
    else:
        cells = [cols] + [[("yes" if v else "no") if isinstance(v, bool) else str(v) for v in r.values()] for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(cols))]
        for c in cells:
            print("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip())
    return 0


def _strategy(game, kind: str, pessimistic: bool = False) -> PositionalStrategy:
    table, witnesses = joker_attractor(game)
    if kind == "attractor":
        return joker_attractor_strategy(table, witnesses)
    if kind == "short":
        return short_joker_strategy(game, table, distance(game, table, pessimistic))
    if kind == "inspired":
        return inspired_strategy(joker_attractor_strategy(table, witnesses))
    raise InputError(f"unknown strategy kind {kind!r}")


def strategy_to_json(strategy: PositionalStrategy, game) -> dict:
    return {
        "schema_version": REPORT_VERSION,
        "kind": strategy.kind,
        "strategy": {q: action_to_json(strategy.choice[q]) for q in game.order(strategy.choice)},
    }


def load_strategy(path: str, game) -> PositionalStrategy:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        raw = data["strategy"] if "strategy" in data else data
        choice = {q: action_from_json(a) for q, a in raw.items()}
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"{path}: not a strategy file ({exc})") from None
    jg = build_joker_game(game)
    for q, a in choice.items():
        if q not in game.index or not jg.is_enabled(q, a):
            raise InputError(f"{path}: action {a!r} not available in state {q!r}")
    return PositionalStrategy(choice, "custom")


def cmd_strategy(args) -> int:
    game = _load(args)
    _emit(strategy_to_json(_strategy(game, args.kind, args.pessimistic), game))
    return 0


def load_opponents(path: str, game) -> list:
    """Opponent file: a list of ``{"name", "rules": [{"action", "state"?, "prev_state"?, "last_a1"?, "round"?}], "default"?}``."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return [
            scripted_opponent(game, [Rule(**r) for r in spec.get("rules", [])], spec.get("default"),
                              name=spec.get("name", f"opponent-{i}"))
            for i, spec in enumerate(data)
        ]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, TypeError, AttributeError) as exc:
        raise InputError(f"{path}: not an opponent file ({exc})") from None


def cmd_oracle(args) -> int:
    game = _load(args)
    table, witnesses = joker_attractor(game)
    jg = build_joker_game(game)
    details: dict = {}
    ok = True
    if args.check == "value":
        vt = value_iterate(jg)
        diff = [q for q in game.states if vt.v[q] != table.j_rank[q]]
        ok = not diff
        details = {
            "iterations": vt.iterations,
            "value": {q: _num(vt.v[q]) for q in game.states},
            "jRank": {q: _num(table.j_rank[q]) for q in game.states},
            "mismatches": diff,
        }
    elif args.check == "exact-jokers":
        bad = exact_joker_violations(game, table, joker_attractor_strategy(table, witnesses))
        ok = not bad
        details = {"violations": bad}
    elif args.check == "determinacy":
        bad = determinacy_violations(game, table)
        ok = not bad
        details = {"violations": bad}
    elif args.check == "shortest":
        d = distance(game, table)
        rows = {q: {"distance": _num(d.d[q]), "search": _num(cooperative_shortest(game, table, q))}
                for q in game.states}
        bad = [q for q, r in rows.items() if r["distance"] != r["search"]]
        ok = not bad
        details = {"states": rows, "mismatches": bad}
    elif args.check == "dominance":
        if not (args.strategy_a and args.strategy_b):
            raise InputError("--check dominance needs --strategy-a and --strategy-b")
        sa = load_strategy(args.strategy_a, game)
        sb = load_strategy(args.strategy_b, game)
        if args.opponents:
            opps = load_opponents(args.opponents, game)
        else:
            try:
                opps = list(adversary_scripts(game, args.bound))
            except GameError as exc:
                raise InputError(str(exc)) from None
        report = dominance_compare(game, sa, sb, opps, step_cap=args.step_cap)
        details = report.as_dict()
        ok = True
    _emit({"schema_version": REPORT_VERSION, "check": args.check, "ok": ok, "details": details})
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    game = _load(args)
    cap = args.step_cap
    if args.almost_sure:
        strat = prob_joker_strategy(p_joker_attractor(game))
        s = monte_carlo(game, strat, args.runs, args.seed, step_cap=cap)
        report = {"runs": s.runs, "wins": s.wins, "joker_counts": sorted(s.joker_counts)}
    else:
        if args.strategy in ("attractor", "short", "inspired"):
            table = _strategy(game, args.strategy).choice
        else:
            table = load_strategy(args.strategy, game).choice
        from .game import simulate

        wins, counts = 0, set()
        for i in range(args.runs):
            rng = random.Random(f"{args.seed}/sim/{i}")
            play = simulate(game, table, uniform_opponent(game, rng), step_cap=cap)
            w = win_index(play, game.goals)
            if w != INF:
                wins += 1
                counts.add(play.jokers(w))
        report = {"runs": args.runs, "wins": wins, "joker_counts": sorted(counts)}
    _emit({"schema_version": REPORT_VERSION, "seed": args.seed, **report})
    return 0


def cmd_mbt_gen(args) -> int:
    try:
        lts = read_aut(args.lts)
    except OSError as exc:
        raise InputError(f"cannot read {args.lts}: {exc.strerror}") from None
    except GameError as exc:
        raise InputError(f"{args.lts}: {exc}") from None
    game = lts_to_game(lts)
    save_game(game, args.out)
    print(f"wrote {args.out}: {len(game.states)} states")
    return 0


def cmd_mbt_lts(args) -> int:
    Path(args.out).write_text(format_aut(random_lts(args.states, args.seed)), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_mbt_run(args) -> int:
    game = _load(args)
    goals = [g for g in args.goal.split(",") if g]
    unknown = [g for g in goals if g not in game.index]
    if unknown:
        raise InputError(f"unknown goal states: {', '.join(unknown)}")
    stats = []
    for goal in goals:
        stats.extend(run_experiment(game, goal, args.runs, args.seed, args.step_cap))
    if args.csv:
        Path(args.csv).write_text(stats_csv(stats), encoding="utf-8")
    sys.stdout.write(summary_table(summarize(stats)))
    return 0


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jokergames", description="Joker games: solving, strategies, oracles, testing.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def game_args(sp, goals=True):
        sp.add_argument("--game", required=True, help="game file (JSON)")
        if goals:
            sp.add_argument("--goals", help="comma-separated goal states (default: the file's goals)")

    sp = sub.add_parser("validate", help="check a game file")
    game_args(sp, goals=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("solve", help="attractor and Joker ranks per state")
    game_args(sp)
    sp.add_argument("--almost-sure", action="store_true", help="add almost-sure Joker ranks")
    sp.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("strategy", help="synthesise a positional strategy as JSON")
    game_args(sp)
    sp.add_argument("--kind", choices=("attractor", "short", "inspired"), default="attractor")
    sp.add_argument("--pessimistic", action="store_true",
                    help="short strategy: rank actions by worst instead of best successor distance")
    sp.set_defaults(func=cmd_strategy)

    sp = sub.add_parser("oracle", help="cross-check results against brute force")
    game_args(sp)
    sp.add_argument("--check", required=True,
                    choices=("value", "exact-jokers", "determinacy", "shortest", "dominance"))
    sp.add_argument("--strategy-a", help="dominance: first strategy file")
    sp.add_argument("--strategy-b", help="dominance: second strategy file")
    sp.add_argument("--opponents", help="dominance: scripted opponents file (default: all positional)")
    sp.add_argument("--bound", type=int, default=10**6, help="limit on enumerated opponent pairs")
    sp.add_argument("--step-cap", type=int, help="dominance: simulation length limit")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("simulate", help="simulate a strategy against a uniform opponent")
    game_args(sp)
    sp.add_argument("--strategy", default="attractor",
                    help="attractor, short, inspired or a strategy file")
    sp.add_argument("--almost-sure", action="store_true", help="use the randomised almost-sure strategy")
    sp.add_argument("--runs", type=int, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--step-cap", type=int)
    sp.set_defaults(func=cmd_simulate)

    mbt = sub.add_parser("mbt", help="model-based testing")
    msub = mbt.add_subparsers(dest="mbt_command", required=True)
    sp = msub.add_parser("gen", help="translate an .aut LTS into a game")
    sp.add_argument("--lts", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_mbt_gen)
    sp = msub.add_parser("lts", help="write a random LTS in .aut format")
    sp.add_argument("--states", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_mbt_lts)
    sp = msub.add_parser("run", help="compare Joker-inspired and random testers")
    sp.add_argument("--game", required=True)
    sp.add_argument("--goal", required=True, help="goal state, or several separated by commas")
    sp.add_argument("--runs", type=int, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--step-cap", type=int)
    sp.add_argument("--csv", help="write per-kind statistics to this file")
    sp.set_defaults(func=cmd_mbt_run)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
