import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightedpoa.equilibria import (
    instance_poa,
    is_nash,
    nash_equilibria,
    parse_mode,
    spe_outcomes,
)
from weightedpoa.game import ActionProfile, GameInstance, Resource, from_network, player_cost, social_cost

coef = st.integers(min_value=0, max_value=4).map(Fraction)


@st.composite
def small_games(draw):
    n_res = draw(st.integers(2, 4))
    res = tuple(Resource(f"r{i}", draw(coef), draw(coef)) for i in range(n_res))
    ids = [r.id for r in res]
    subsets = st.sets(st.sampled_from(ids), min_size=1).map(frozenset)
    a1 = draw(st.lists(subsets, min_size=1, max_size=3, unique=True))
    a2 = draw(st.lists(subsets, min_size=1, max_size=3, unique=True))
    w1 = Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 3)))
    w2 = Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 3)))
    return GameInstance(res, a1, a2, w1, w2, draw(st.sampled_from(["uniform", "proportional"])))


def naive_nash(g):
    out = []
    for p in g.profiles():
        ok1 = all(player_cost(g, p, 1) <= player_cost(g, ActionProfile(k, p.a2), 1) for k in range(len(g.actions1)))
        ok2 = all(player_cost(g, p, 2) <= player_cost(g, ActionProfile(p.a1, k), 2) for k in range(len(g.actions2)))
        if ok1 and ok2:
            out.append(p)
    return out


def spe_by_selection_functions(g):
    """Backward induction over every follower tie-breaking rule, leader 1."""
    n1, n2 = len(g.actions1), len(g.actions2)
    br = []
    for a in range(n1):
        costs = [player_cost(g, ActionProfile(a, b), 2) for b in range(n2)]
        br.append([b for b in range(n2) if costs[b] == min(costs)])
    outcomes = set()
    for selection in itertools.product(*br):
        lc = [player_cost(g, ActionProfile(a, selection[a]), 1) for a in range(n1)]
        for a in range(n1):
            if lc[a] == min(lc):
                outcomes.add(ActionProfile(a, selection[a]))
    return sorted(outcomes)


@settings(max_examples=150, deadline=None)
@given(small_games())
def test_nash_enumeration_matches_double_loop(g):
    assert nash_equilibria(g) == naive_nash(g)
    assert all(is_nash(g, p) for p in nash_equilibria(g))


@settings(max_examples=150, deadline=None)
@given(small_games())
def test_spe_characterization_matches_selection_enumeration(g):
    assert sorted(spe_outcomes(g, 1)) == spe_by_selection_functions(g)


@settings(max_examples=100, deadline=None)
@given(small_games())
def test_leader_two_equals_swapped_game(g):
    swapped = sorted(ActionProfile(p.a2, p.a1) for p in spe_outcomes(g.swap_players(), 1))
    assert sorted(spe_outcomes(g, 2)) == swapped


@settings(max_examples=100, deadline=None)
@given(small_games())
def test_poa_is_at_least_one(g):
    rep = instance_poa(g, "sequential:1")
    assert rep.poa >= 1
    assert rep.worst_equilibrium_cost == max(social_cost(g, p) for p in rep.equilibrium_profiles)


def test_fig2_nash_poa_equals_oracle(frozen):
    w1, w2 = Fraction(2), Fraction(1)
    arcs = [
        ("a", "b", 0, w1 * w2 + w2**2),
        ("a", "c", 0, w1 * w2),
        ("b", "d", 0, 0),
        ("b", "e", 0, 0),
        ("c", "d", 0, 0),
        ("c", "e", 0, w1**2 + w1 * w2 + w2**2),
    ]
    for cm, key in (("uniform", "fig2_uniform_2_1"), ("proportional", "fig2_proportional_2_1")):
        g = from_network("abcde", arcs, ("a", "d"), ("a", "e"), w1, w2, cm)
        rep = instance_poa(g)
        assert rep.poa == Fraction(frozen[key]["poa"])
        assert rep.optimum_cost == Fraction(frozen[key]["optimum_cost"])
        assert rep.to_dict(g)["worst_equilibrium"] == ["a-b-d", "a-c-e"]


def test_fig9a_sequential_poa_equals_oracle(frozen):
    arcs = [("a", "c", 0, 1), ("b", "d", 0, 3), ("a", "b", 0, 0), ("b", "c", 0, 1), ("c", "d", 0, 0)]
    g = from_network("abcd", arcs, ("a", "c"), ("b", "d"), 2, 1)
    assert instance_poa(g, "sequential:1").poa == Fraction(frozen["fig9a_uniform_2_1"]["poa"])


def test_weak_inequality_counts_indifference_as_equilibrium():
    res = (Resource("x", 1, 0), Resource("y", 1, 0))
    g = GameInstance(res, [{"x"}, {"y"}], [{"x"}], 1, 1)
    assert nash_equilibria(g) == [ActionProfile(0, 0), ActionProfile(1, 0)]


@settings(max_examples=100, deadline=None)
@given(small_games())
def test_pure_nash_exists_and_ignores_cost_model(g):
    eqs = nash_equilibria(g)
    assert eqs
    assert nash_equilibria(g.with_cost_model("proportional")) == nash_equilibria(g.with_cost_model("uniform"))


def test_zero_optimum_conventions():
    zero = GameInstance((Resource("x"),), [{"x"}], [{"x"}], 1, 1)
    rep = instance_poa(zero)
    assert rep.poa == 1 and rep.degenerate
    res = (Resource("x", 0, 0), Resource("y", 1, 0))
    g = GameInstance(res, [{"x"}, {"y"}], [{"x"}], 1, 1)
    assert instance_poa(g).poa == 1


def test_parse_mode():
    assert parse_mode("sequential") == ("sequential", 1)
    assert parse_mode("sequential:2") == ("sequential", 2)
    with pytest.raises(ValueError):
        parse_mode("sequential:3")
