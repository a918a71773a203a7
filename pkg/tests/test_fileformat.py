import json

import pytest

from weightedpoa.catalog import build_instance
from weightedpoa.equilibria import instance_poa
from weightedpoa.fileformat import dumps_game, game_to_dict, load_game, loads_game, save_game
from weightedpoa.game import GameError


def test_round_trip_preserves_poa(tmp_path):
    g = build_instance("fig2", 2, 1).game
    path = tmp_path / "g.json"
    save_game(g, path)
    again = load_game(path)
    assert game_to_dict(again) == game_to_dict(g)
    assert str(instance_poa(again).poa) == "15/7"


def test_numbers_are_rational_strings():
    data = game_to_dict(build_instance("fig3", 3, 2).game)
    assert data["weights"] == ["3", "2"]
    assert all(isinstance(r["beta"], str) for r in data["resources"])


def test_network_layout_is_accepted():
    text = json.dumps({
        "cost_model": "proportional",
        "weights": ["1", "1/2"],
        "network": {
            "nodes": ["s", "m", "t"],
            "arcs": [
                {"tail": "s", "head": "t", "alpha": "1", "beta": "0"},
                {"tail": "s", "head": "m", "beta": "1/2"},
                {"tail": "m", "head": "t", "beta": "1/2"},
            ],
            "terminals": [["s", "t"], ["s", "t"]],
        },
    })
    g = loads_game(text)
    assert g.names1 == ("s-t", "s-m-t")  # arc input order
    assert g.w2 == 0.5 and g.cost_model.value == "proportional"


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        json.dumps({"weights": ["1"], "resources": [], "actions": [[], []]}),
        json.dumps({"weights": ["1", "1"], "resources": [{"id": "x", "beta": "1.5"}], "actions": [[], []]}),
        json.dumps({"weights": ["1", "1"], "resources": [{"id": "x"}],
                    "actions": [[{"resources": ["x"]}]]}),
    ],
)
def test_malformed_files_raise_game_error(text):
    with pytest.raises(GameError):
        loads_game(text)


def test_dump_is_deterministic():
    g = build_instance("fig9b", 2, 3).game
    assert dumps_game(g) == dumps_game(loads_game(dumps_game(g)))
