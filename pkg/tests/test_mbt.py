import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jokergames.attractor import joker_attractor
from jokergames.game import INF, GameError, Joker, backward_reachable, validate
from jokergames.gamefile import load_fixture
from jokergames.mbt import (
    LTS, NOTHING, OBSERVE, STOP, ExperimentStats, derive_test_strategy, format_aut, lts_to_game,
    parse_aut, pick_goals, random_lts, run_experiment, sink_name, stats_csv, summarize,
    summary_csv, summary_table,
)


def test_smallest_translation():
    lts = LTS(("0",), "0", (("0", "a?", "0"),))
    g = lts_to_game(lts)
    assert g.states == ("0", "stop")
    assert set(g.gamma1("0")) == {"a?", OBSERVE, STOP}
    assert g.gamma2("0") == (NOTHING,)
    assert g.succ("0", OBSERVE, NOTHING) == ("0",)
    assert g.succ("0", STOP, NOTHING) == ("stop",)


def test_input_output_race_is_nondeterministic():
    lts = LTS(("s0", "s1", "s2"), "s0", (("s0", "a?", "s1"), ("s0", "b!", "s2")))
    g = lts_to_game(lts)
    assert set(g.succ("s0", "a?", "b!")) == {"s1", "s2"}
    assert g.succ("s0", "a?", NOTHING) == ("s1",)
    assert g.succ("s0", OBSERVE, "b!") == ("s2",)
    # a deadlock still has observe and nothing
    assert g.gamma1("s1") == (OBSERVE, STOP)
    assert g.gamma2("s1") == (NOTHING,)


def test_sink_name_avoids_clash():
    lts = LTS(("stop",), "stop", ())
    assert sink_name(lts) == "stop_"
    assert lts_to_game(lts).states == ("stop", "stop_")


def test_generated_fixture_translates():
    lts = random_lts(50, seed=1)
    g = lts_to_game(lts)
    assert validate(g) == []
    assert len(g.states) == len(lts.states) + 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 80), st.integers(0, 10_000))
def test_translation_always_valid(n, seed):
    assert validate(lts_to_game(random_lts(n, seed))) == []


def test_aut_round_trip():
    lts = random_lts(20, seed=4)
    assert parse_aut(format_aut(lts)) == lts


@pytest.mark.parametrize("text, match", [
    ("", "empty"),
    ("hello\n", "header"),
    ('des (0, 2, 1)\n(0, "a?", 0)\n', "announces"),
    ('des (0, 1, 1)\n(0, "a", 0)\n', "neither"),
    ('des (0, 1, 1)\n(0, "a?", 3)\n', "unknown"),
    ('des (0, 1, 1)\n0 a? 0\n', "line 2"),
])
def test_aut_errors(text, match):
    with pytest.raises(GameError, match=match):
        parse_aut(text)


def test_derived_strategy_on_g_avb():
    g = load_fixture("g_avb")
    sigma = derive_test_strategy(g, "smiley")
    assert not sigma.uses_jokers()
    assert dict(sigma.choice) == {"1": "a", "2": "a", "3": "a", "4": "a"}


def test_derived_strategy_covers_reach():
    lts = random_lts(60, seed=7)
    g = lts_to_game(lts)
    (goal,) = pick_goals(g, 1, seed=3, exclude=[sink_name(lts)])
    sigma = derive_test_strategy(g, goal)
    assert sigma.domain == backward_reachable(g, {goal}) - {goal}


def test_unreachable_goal_rejected():
    lts = LTS(("0", "1"), "0", (("1", "a?", "0"),))
    with pytest.raises(GameError, match="unreachable"):
        derive_test_strategy(lts_to_game(lts), "1")


def test_goal_is_initial():
    g = lts_to_game(random_lts(10, seed=2))
    assert g.initial not in derive_test_strategy(g, g.initial).domain
    j, r = run_experiment(g, g.initial, 20, seed=1)
    assert (j.reached, j.mean_steps, r.reached, r.mean_steps) == (20, 0, 20, 0)


def test_sure_win_needs_only_attractor_steps():
    lts = LTS(("0", "1", "2"), "0", (("0", "i?", "1"), ("1", "i?", "2"), ("1", "j?", "0")))
    g = lts_to_game(lts)
    rt, _ = joker_attractor(g, {"2"})
    assert rt.j_rank["0"] == 0
    j, _ = run_experiment(g, "2", 100, seed=5)
    assert j.reached == 100
    assert j.mean_steps == rt.a_rank["0"] == 2


def test_unreachable_goal_never_reached():
    lts = LTS(("0", "1"), "0", (("1", "a?", "0"), ("0", "b?", "0")))
    j, r = run_experiment(lts_to_game(lts), "1", 50, seed=0)
    assert j.reached == r.reached == 0
    assert j.mean_steps is r.mean_steps is None


def test_joker_tester_beats_random_on_deep_goal():
    lts = random_lts(50, seed=1)
    g = lts_to_game(lts)
    j, r = run_experiment(g, "17", 1000, seed=1)
    assert j.reached >= r.reached
    assert j.reached > 0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_joker_tester_reaches_reachable_goals(seed):
    lts = random_lts(40, seed)
    g = lts_to_game(lts)
    for goal in pick_goals(g, 3, seed, exclude=[sink_name(lts)]):
        j, _ = run_experiment(g, goal, 200, seed)
        assert j.reached > 0


def test_experiments_are_reproducible():
    g = lts_to_game(random_lts(30, seed=9))
    assert run_experiment(g, "12", 200, seed=4) == run_experiment(g, "12", 200, seed=4)
    with pytest.raises(ValueError):
        run_experiment(g, "12", 0, seed=4)


def test_stats_invariants():
    with pytest.raises(ValueError):
        ExperimentStats("g", "joker", 10, 11, 1.0, 0)
    with pytest.raises(ValueError):
        ExperimentStats("g", "joker", 10, 0, 1.0, 0)
    with pytest.raises(ValueError):
        ExperimentStats("g", "joker", 10, 3, None, 0)


def test_summaries():
    both = [ExperimentStats("g", "joker", 10, 10, 2.0, 0), ExperimentStats("g", "random", 10, 4, 5.0, 0)]
    (row,) = summarize(both)
    assert row["step_ratio"] == 2.5
    never = [ExperimentStats("h", "joker", 10, 3, 4.0, 0), ExperimentStats("h", "random", 10, 0, None, 0)]
    assert summarize(never)[0]["step_ratio"] == INF
    nojoker = [ExperimentStats("k", "joker", 10, 0, None, 0), ExperimentStats("k", "random", 10, 1, 9.0, 0)]
    assert summarize(nojoker)[0]["step_ratio"] is None
    assert summarize([]) == []
    assert summary_table([]) == ""
    text = summary_csv(summarize(both + never + nojoker))
    assert text.splitlines()[2].endswith(",inf")
    assert text.splitlines()[3].endswith(",NA")
    assert stats_csv(both).splitlines()[0] == "goal,kind,runs,reached,mean_steps,seed"
    assert "step_ratio" in summary_table(summarize(both))
