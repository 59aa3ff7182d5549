"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""
import sys
import time

import pytest

from jokergames.attractor import joker_attractor
from jokergames.game import INF, Joker, Rule, backward_reachable, default_step_cap, forward_reachable, scripted_opponent, win_index
from jokergames.gamefile import FIXTURES, load_fixture
from jokergames.joker import build_joker_game
from jokergames.mbt import lts_to_game, pick_goals, random_lts, run_experiment, sink_name
from jokergames.oracle import (
    cost_minimal_strategies, determinacy_violations, dominance_compare, exact_joker_violations,
    outcome_joker_counts, positional_outcomes, value_iterate,
)
from jokergames.probabilistic import layers_contain, monte_carlo, p_joker_attractor, prob_joker_strategy
from jokergames.strategy import (
    cooperative_play_length, distance, inspired_strategy, joker_attractor_strategy, short_joker_strategy,
)

from conftest import seeded_games

CORE_FIXTURES = ("g_avb", "costless", "g_cost", "penny")
RANDOM_500 = seeded_games(500, max_states=8, max_actions=3, branching=2)
RANDOM_100 = seeded_games(100, max_states=6, max_actions=3, branching=2, offset=10_000)


def criterion(number, title):
    def wrap(fn):
        # a plain wrapper so that pytest sees the request fixture in the signature
        def run(request):
            reporter = request.config.pluginmanager.get_plugin("terminalreporter")
            start = time.perf_counter()
            try:
                note = fn()
            except BaseException as exc:
                line = f"criterion {number:2d} FAIL  {title}: {exc}".splitlines()[0]
                _say(reporter, line)
                raise
            line = f"criterion {number:2d} PASS  {title} ({time.perf_counter() - start:.2f}s)"
            if note:
                line += f" [{note}]"
            _say(reporter, line)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _say(reporter, line):
    if reporter is not None:
        reporter.write_line("")
        reporter.write_line(line)
    else:
        print(line, file=sys.stderr)


# -- 1 ----------------------------------------------------------------------------


@criterion(1, "joker ranks, joker states and layers of the two-goal example")
def test_criterion_01_example_ranks():
    game = load_fixture("g_avb").with_goals({"smiley"})
    joker_attractor(game)  # warm up
    best = INF
    for _ in range(20):
        t = time.perf_counter()
        rt, _ = joker_attractor(game)
        best = min(best, time.perf_counter() - t)
    assert dict(rt.j_rank) == {"1": 1, "2": 1, "3": 2, "4": 1, "smiley": 0, "frownie": INF}
    assert rt.joker_states == {"1", "2", "3"}
    assert rt.layers == (
        {"smiley"},
        {"1", "2", "4", "smiley"},
        {"1", "2", "3", "4", "smiley"},
    )
    assert best < 1e-3, f"solve took {best * 1e3:.3f} ms"
    return f"{best * 1e6:.0f} us"


# -- 2 ----------------------------------------------------------------------------


@criterion(2, "value iteration equals joker rank on fixtures and 500 random games")
def test_criterion_02_value_iteration():
    start = time.perf_counter()
    games = [load_fixture(n) for n in CORE_FIXTURES] + RANDOM_500
    for i, game in enumerate(games):
        rt, _ = joker_attractor(game)
        vt = value_iterate(build_joker_game(game))
        assert dict(vt.v) == dict(rt.j_rank), f"game {i}"
    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"{elapsed:.1f}s"


# -- 3 ----------------------------------------------------------------------------


@criterion(3, "joker attractor strategy uses exactly jRank Jokers against every positional opponent")
def test_criterion_03_exact_jokers():
    start = time.perf_counter()
    games = [load_fixture(n) for n in FIXTURES] + RANDOM_100
    outcomes = 0
    for i, game in enumerate(games):
        rt, wt = joker_attractor(game)
        sigma = joker_attractor_strategy(rt, wt)
        assert exact_joker_violations(game, rt, sigma) == [], f"game {i}"
        outcomes += sum(1 for q in rt.region for _ in positional_outcomes(game, sigma, q))
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"{elapsed:.1f}s"
    return f"{outcomes} outcomes"


# -- 4 ----------------------------------------------------------------------------


@criterion(4, "joker attractor equals backward reachability; determinacy dichotomy")
def test_criterion_04_reachability_and_determinacy():
    games = [load_fixture(n) for n in FIXTURES] + RANDOM_500 + RANDOM_100
    for i, game in enumerate(games):
        rt, _ = joker_attractor(game)
        assert rt.region == backward_reachable(game, game.goals), f"game {i}"
        assert determinacy_violations(game, rt) == [], f"game {i}"
        for q in set(game.states) - rt.region:
            assert not forward_reachable(game, [q]) & game.goals


# -- 5 ----------------------------------------------------------------------------


@criterion(5, "short strategy wins in 3 moves, attractor strategy in 4, both with 1 Joker")
def test_criterion_05_short_strategy():
    game = load_fixture("g_cost")
    rt, wt = joker_attractor(game)
    dt = distance(game, rt)
    assert dt.d["1"] == 3
    short = short_joker_strategy(game, rt, dt)
    assert cooperative_play_length(game, short, "1") == (3, 1)
    attr = joker_attractor_strategy(rt, wt)
    results = set()
    for play in positional_outcomes(game, attr, "1"):
        w = win_index(play, game.goals)
        results.add((w, play.jokers(w) if w != INF else None))
    assert results == {(4, 1)}


# -- 6 ----------------------------------------------------------------------------


@criterion(6, "a cost-minimal strategy can win without Jokers while the attractor strategy always uses 1")
def test_criterion_06_costless_phenomenon():
    game = load_fixture("costless")
    rt, wt = joker_attractor(game)
    assert rt.j_rank["1"] == 1
    jg = build_joker_game(game)
    witness = [s for s in cost_minimal_strategies(jg, "1") if 0 in outcome_joker_counts(game, s, "1")]
    assert witness
    assert outcome_joker_counts(game, joker_attractor_strategy(rt, wt), "1") == {1}
    return f"{len(witness)} such strategies"


# -- 7 ----------------------------------------------------------------------------


@criterion(7, "matching pennies: jRank 1, almost-sure rank 0, 10^4 runs all win at the default cap")
def test_criterion_07_penny():
    game = load_fixture("penny")
    rt, _ = joker_attractor(game)
    pt = p_joker_attractor(game)
    assert rt.j_rank["1"] == 1
    assert pt.pj_rank["1"] == 0
    strat = prob_joker_strategy(pt)
    assert strat.support["1"] == ("H", "T")
    s = monte_carlo(game, strat, 10_000, seed=2024)
    assert s.joker_counts <= {0}
    assert s.wins == s.runs, (
        f"{s.wins}/{s.runs} runs won within the default cap of {default_step_cap(game)} steps"
    )


# -- 8 ----------------------------------------------------------------------------


@criterion(8, "scripted opponents separate the Joker-inspired strategies")
def test_criterion_08_dominance():
    middle = load_fixture("adm_middle")
    rt, wt = joker_attractor(middle)
    one_joker = inspired_strategy(joker_attractor_strategy(rt, wt))
    two_jokers = inspired_strategy({"1": "a", "2": Joker("a", "h", "3"), "3": Joker("a", "h", "smiley")})
    sigma_a = scripted_opponent(middle, [Rule("u", last_a1="b")], default="h", name="sigma_a")
    rep = dominance_compare(middle, two_jokers, one_joker, [sigma_a])
    assert rep.a_wins == {"sigma_a"} and not rep.b_wins

    right = load_fixture("adm_right")
    dotted = inspired_strategy({"1": Joker("a", "h", "smiley")})
    dashed = inspired_strategy({"1": Joker("b", "h", "smiley")})
    sigma_uh = scripted_opponent(right, [Rule("u", round=0)], default="h", name="sigma_uh")
    rep = dominance_compare(right, dashed, dotted, [sigma_uh])
    assert rep.a_wins == {"sigma_uh"} and not rep.b_wins


# -- 9 ----------------------------------------------------------------------------


@criterion(9, "Joker-inspired testing beats random testing on generated models")
def test_criterion_09_mbt():
    start = time.perf_counter()
    best_gap = 0
    rows = 0
    for n, seed in ((50, 1), (120, 2), (300, 3)):
        lts = random_lts(n, seed)
        game = lts_to_game(lts)
        goals = pick_goals(game, 5, seed, exclude=[sink_name(lts)])
        assert len(goals) == 5
        for goal in goals:
            j, r = run_experiment(game, goal, 1000, seed)
            assert j.reached >= r.reached, f"{n}/{goal}: {j.reached} < {r.reached}"
            if j.reached and r.reached:
                assert j.mean_steps <= r.mean_steps, f"{n}/{goal}: {j.mean_steps} > {r.mean_steps}"
            best_gap = max(best_gap, j.reached - r.reached)
            rows += 1
    assert best_gap >= 200, f"largest gap {best_gap} runs"
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"{elapsed:.1f}s"
    return f"{rows} goals, largest gap {best_gap}/1000"


# -- 10 ---------------------------------------------------------------------------


@criterion(10, "almost-sure Joker layers contain the sure ones")
def test_criterion_10_layer_containment():
    games = [load_fixture(n) for n in FIXTURES] + RANDOM_500 + RANDOM_100
    for i, game in enumerate(games):
        rt, _ = joker_attractor(game)
        assert layers_contain(p_joker_attractor(game), rt), f"game {i}"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
