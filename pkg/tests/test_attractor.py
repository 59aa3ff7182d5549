from hypothesis import given

from jokergames.attractor import attractor, cpre1, forcing_actions, joker_attractor, pre
from jokergames.game import INF, backward_reachable
from jokergames.gamefile import load_fixture

from conftest import games


# -- naive definitions used as oracles ---------------------------------------


def naive_pre(game, target):
    return {q for q in game.states for a in game.gamma1(q) for x in game.gamma2(q)
            if set(game.succ(q, a, x)) & set(target)}


def naive_cpre(game, target):
    return {q for q in game.states
            if any(all(set(game.succ(q, a, x)) <= set(target) for x in game.gamma2(q)) for a in game.gamma1(q))}


def naive_attr(game, target):
    layers = [set(target)]
    while True:
        nxt = layers[-1] | naive_cpre(game, layers[-1])
        if nxt == layers[-1]:
            return layers
        layers.append(nxt)


def naive_jattr(game, goals):
    layers = [naive_attr(game, goals)[-1]]
    while True:
        nxt = layers[-1] | naive_attr(game, naive_pre(game, layers[-1]))[-1]
        if nxt == layers[-1]:
            return layers
        layers.append(nxt)


# -- examples -------------------------------------------------------------------


def test_pre_examples(g_avb):
    assert pre(g_avb, {"smiley"}) == {"1", "2", "smiley"}
    assert pre(g_avb, set()) == frozenset()
    assert pre(g_avb, g_avb.states) == {q for q in g_avb.states if g_avb.post(q)}


def test_cpre_examples(g_avb, g_cost):
    assert cpre1(g_avb, {"smiley"}) == {"smiley"}
    assert cpre1(g_avb, g_avb.states) == set(g_avb.states)
    assert "6" in cpre1(g_cost, {"smiley"})
    assert attractor(g_avb, {"smiley"}).region == {"smiley"}


def test_attractor_of_all_states(g_avb):
    res = attractor(g_avb, g_avb.states)
    assert res.region == set(g_avb.states)
    assert set(res.rank.values()) == {0}


def test_attractor_of_g_cost(g_cost):
    res = attractor(g_cost, {"smiley"})
    assert res.region == {"smiley", "6", "5"}
    assert res.rank == {"smiley": 0, "6": 1, "5": 2}


def test_joker_attractor_of_g_avb(g_avb):
    rt, wt = joker_attractor(g_avb)
    assert dict(rt.j_rank) == {"1": 1, "2": 1, "3": 2, "4": 1, "smiley": 0, "frownie": INF}
    assert rt.joker_states == {"1", "2", "3"}
    assert rt.layers == ({"smiley"}, {"1", "2", "4", "smiley"}, {"1", "2", "3", "4", "smiley"})
    assert rt.joker_layers[1] == {"1", "2", "smiley"}


def test_canonical_witnesses_of_g_avb(g_avb):
    _, wt = joker_attractor(g_avb)
    assert {q: js[0] for q, js in wt.joker.items()} == {
        "1": ("a", "x", "smiley"), "2": ("a", "x", "smiley"), "3": ("a", "y", "2"),
    }
    assert wt.attr[1] == {"4": ("a",)}


def test_all_goal_states():
    g = load_fixture("g_avb")
    rt, _ = joker_attractor(g, g.states)
    assert set(rt.j_rank.values()) == {0}
    assert not rt.joker_states


def test_costless_ranks():
    rt, _ = joker_attractor(load_fixture("costless"))
    assert rt.j_rank["1"] == rt.j_rank["2"] == 1


# -- properties -------------------------------------------------------------------


@given(games())
def test_operators_match_naive_definitions(game):
    target = set(game.goals)
    assert pre(game, target) == naive_pre(game, target)
    assert cpre1(game, target) == naive_cpre(game, target)
    res = attractor(game, target)
    assert [set(l) for l in res.layers] == naive_attr(game, target)


@given(games())
def test_joker_attractor_matches_naive_layers(game):
    rt, _ = joker_attractor(game)
    assert [set(l) for l in rt.layers] == naive_jattr(game, game.goals)
    assert len(rt.layers) <= len(game.states) + 1


@given(games())
def test_rank_table_invariants(game):
    rt, _ = joker_attractor(game)
    attr = attractor(game, game.goals).region
    for q in game.states:
        assert (rt.a_rank[q] == 0) == (q in game.goals)
        assert (rt.j_rank[q] == 0) == (q in attr)
    for lo, hi in zip(rt.layers, rt.layers[1:]):
        assert lo < hi
    expected = set()
    for k in range(len(rt.layers) - 1):
        expected |= rt.joker_layers[k + 1] - rt.layers[k]
    assert rt.joker_states == expected


@given(games())
def test_joker_attractor_is_backward_reachability(game):
    rt, _ = joker_attractor(game)
    assert rt.region == backward_reachable(game, game.goals)


@given(games())
def test_witness_soundness(game):
    rt, wt = joker_attractor(game)
    for q, jokers in wt.joker.items():
        k = wt.joker_layer[q]
        assert jokers
        for j in jokers:
            assert j.to in game.succ(q, j.a, j.x)
            assert j.to in rt.layers[k - 1]
    for k, table in wt.attr.items():
        res = rt.inner[k]
        for q, acts in table.items():
            assert acts
            for a in acts:
                # one move under a witness lands in the previous attractor layer
                assert a in forcing_actions(game, q, res.layers[res.rank[q] - 1])
