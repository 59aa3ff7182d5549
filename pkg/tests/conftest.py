import pytest
from hypothesis import strategies as st

from jokergames.game import random_game
from jokergames.gamefile import FIXTURES, load_fixture


@st.composite
def games(draw, max_states=8, max_actions=3, branching=2):
    n = draw(st.integers(1, max_states))
    return random_game(
        n,
        n_act1=draw(st.integers(1, max_actions)),
        n_act2=draw(st.integers(1, max_actions)),
        branching=branching,
        seed=draw(st.integers(0, 2**32 - 1)),
        n_goals=draw(st.integers(1, max(1, n // 2))),
    )


def seeded_games(count, max_states=8, max_actions=3, branching=2, offset=0):
    """Deterministic family of random games with varied shapes."""
    out = []
    for s in range(count):
        n = 1 + s % max_states
        out.append(random_game(
            n,
            n_act1=1 + s % max_actions,
            n_act2=1 + (s // max_actions) % max_actions,
            branching=branching,
            seed=offset + s,
            n_goals=1 + (s // 7) % max(1, n // 2),
        ))
    return out


@pytest.fixture(params=FIXTURES)
def fixture_game(request):
    return load_fixture(request.param)


@pytest.fixture
def g_avb():
    return load_fixture("g_avb")


@pytest.fixture
def g_cost():
    return load_fixture("g_cost")
