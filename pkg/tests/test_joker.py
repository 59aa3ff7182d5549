import pytest
from hypothesis import given

from jokergames.game import INF, GameError, Joker, Play, ConcurrentGame
from jokergames.gamefile import load_fixture
from jokergames.joker import UndefinedStrategy, build_joker_game, play_cost, strategy_cost

from conftest import games


def test_jokers_at_state_1(g_avb):
    jg = build_joker_game(g_avb)
    jokers = [a for a in jg.enabled1("1") if isinstance(a, Joker)]
    assert {Joker("a", "x", "smiley"), Joker("a", "y", "frownie"), Joker("b", "x", "2")} <= set(jokers)
    assert jg.enabled1("1")[:2] == ["a", "b"]


def test_nondeterministic_edges_give_distinct_jokers(g_avb):
    jokers = build_joker_game(g_avb).base.joker_actions("2")
    assert jokers == [Joker("a", "x", "smiley"), Joker("a", "x", "frownie")]


def test_single_edge_state_has_one_joker():
    g = ConcurrentGame.build(["s"], "s", ["a"], ["x"], {"s": ["a"]}, {"s": ["x"]}, {("s", "a", "x"): ["s"]})
    assert build_joker_game(g).base.joker_actions("s") == [Joker("a", "x", "s")]


def test_invalid_base_game_rejected():
    g = ConcurrentGame.build(["s"], "s", ["a"], ["x"], {"s": ["a"]}, {"s": []}, {})
    with pytest.raises(GameError):
        build_joker_game(g)


@given(games())
def test_joker_moves_ignore_player2(game):
    jg = build_joker_game(game)
    for q in game.states:
        for act in jg.enabled1(q):
            assert jg.is_enabled(q, act)
            for x in game.gamma2(q):
                if isinstance(act, Joker):
                    assert jg.moves(q, act, x) == (act.to,)
                    assert jg.cost(act) == 1
                else:
                    assert jg.moves(q, act, x) == game.succ(q, act, x)
                    assert jg.cost(act) == 0


def test_play_costs(g_avb):
    jg = build_joker_game(g_avb)
    p = Play("4").extend(Joker("a", "x", "1"), "x", "1").extend(Joker("a", "x", "smiley"), "y", "smiley")
    assert play_cost(jg, p) == 2
    assert play_cost(jg, Play("4").extend("a", "x", "1")) == INF
    # steps after the win do not count
    assert play_cost(jg, p.extend(Joker("a", "x", "smiley"), "x", "smiley")) == 2
    costless = build_joker_game(load_fixture("costless"))
    assert play_cost(costless, Play("1").extend(Joker("a", "x", "smiley"), "y", "smiley")) == 1


def test_strategy_cost_examples():
    jg = build_joker_game(load_fixture("costless"))
    dashed = {"1": "a", "2": Joker("a", "x", "smiley")}
    assert strategy_cost(jg, dashed, "1") == 1
    assert strategy_cost(jg, {"1": "a", "2": "a"}, "1") == INF
    with pytest.raises(UndefinedStrategy) as info:
        strategy_cost(jg, {"1": "a"}, "1")
    assert info.value.state == "2"


@given(games(max_states=6))
def test_regular_strategies_cost_zero_or_inf(game):
    jg = build_joker_game(game)
    sigma = {q: game.gamma1(q)[0] for q in game.states}
    assert strategy_cost(jg, sigma) in (0, INF)
