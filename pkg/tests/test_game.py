import logging
from fractions import Fraction

import pytest

from weightedpoa.game import (
    ActionProfile,
    Arc,
    CostModel,
    GameError,
    GameInstance,
    Resource,
    from_network,
    loads,
    player_cost,
    simple_paths,
    social_cost,
)


def two_resource_game(cost_model=CostModel.UNIFORM):
    res = (Resource("x", 1, 2), Resource("y", 0, 3))
    acts = (frozenset({"x"}), frozenset({"x", "y"}))
    return GameInstance(res, acts, acts, 2, 1, cost_model)


def test_uniform_and_proportional_costs():
    g = two_resource_game()
    p = ActionProfile(0, 1)  # both on x, player 2 also on y
    assert loads(g, p) == {"x": 3, "y": 1}
    assert player_cost(g, p, 1) == 1 + 2 * 3
    assert player_cost(g, p, 2) == (1 + 2 * 3) + 3 * 1
    gp = g.with_cost_model("prop")
    assert player_cost(gp, p, 1) == 2 * 7
    assert player_cost(gp, p, 2) == 1 * 10
    assert social_cost(gp, p) == 24


def test_all_zero_coefficients_cost_nothing():
    res = (Resource("x"), Resource("y"))
    g = GameInstance(res, [{"x"}], [{"x", "y"}], 1, 1)
    assert social_cost(g, ActionProfile(0, 0)) == 0


def test_validation_errors():
    with pytest.raises(GameError):
        Resource("x", -1, 0)
    with pytest.raises(GameError):
        GameInstance((Resource("x"),), [{"x"}], [{"z"}], 1, 1)
    with pytest.raises(GameError):
        GameInstance((Resource("x"),), [{"x"}], [{"x"}], 0, 0)
    with pytest.raises(GameError):
        GameInstance((Resource("x"),), [], [{"x"}], 1, 1)
    with pytest.raises(GameError):
        CostModel.parse("quadratic")


def test_duplicate_actions_are_dropped_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        g = GameInstance((Resource("x"),), [{"x"}, {"x"}], [{"x"}], 1, 1, names1=("a", "b"))
    assert len(g.actions1) == 1 and g.names1 == ("a",)
    assert "duplicate" in caplog.text


def test_simple_paths_in_input_order():
    arcs = [Arc("sa", "s", "a"), Arc("st", "s", "t"), Arc("at", "a", "t"), Arc("ta", "t", "a")]
    paths = simple_paths(arcs, "s", "t")
    assert [[a.id for a in p] for p in paths] == [["sa", "at"], ["st"]]


def test_fig2_network_costs(frozen):
    w1, w2 = Fraction(2), Fraction(1)
    arcs = [
        ("a", "b", 0, w1 * w2 + w2**2),
        ("a", "c", 0, w1 * w2),
        ("b", "d", 0, 0),
        ("b", "e", 0, 0),
        ("c", "d", 0, 0),
        ("c", "e", 0, w1**2 + w1 * w2 + w2**2),
    ]
    g = from_network("abcde", arcs, ("a", "d"), ("a", "e"), w1, w2)
    assert g.names1 == ("a-b-d", "a-c-d") and g.names2 == ("a-b-e", "a-c-e")
    assert g.resource_map["c-e"].beta == 7
    opt = g.profile("a-c-d", "a-b-e")
    assert social_cost(g, opt) == Fraction(frozen["fig2_uniform_2_1"]["optimum_cost"])


def test_fig9a_network_cost(frozen):
    arcs = [("a", "c", 0, 1), ("b", "d", 0, 3), ("a", "b", 0, 0), ("b", "c", 0, 1), ("c", "d", 0, 0)]
    g = from_network("abcd", arcs, ("a", "c"), ("b", "d"), 2, 1)
    assert social_cost(g, g.profile("a-c", "b-c-d")) == Fraction(frozen["fig9a_uniform_2_1"]["optimum_cost"])


def test_network_errors():
    with pytest.raises(GameError):
        from_network("ab", [("a", "b", 0, 1)], ("b", "a"), ("a", "b"), 1, 1)
    with pytest.raises(GameError):
        from_network("ab", [("a", "c", 0, 1)], ("a", "b"), ("a", "b"), 1, 1)


def test_swap_players_exchanges_roles():
    g = two_resource_game()
    h = g.swap_players()
    assert (h.w1, h.w2) == (g.w2, g.w1)
    for p in g.profiles():
        q = ActionProfile(p.a2, p.a1)
        assert player_cost(g, p, 1) == player_cost(h, q, 2)
        assert player_cost(g, p, 2) == player_cost(h, q, 1)
