"""JSON files for game instances. All numbers are rational strings such as ``"3/2"``.

Two layouts are accepted.

Congestion layout::

    {"cost_model": "uniform", "weights": ["2", "1"],
     "resources": [{"id": "r1", "alpha": "0", "beta": "3"}, ...],
     "actions": [[{"name": "x", "resources": ["r1", "r2"]}, ...],   # player 1
                 [...]]}                                            # player 2

Network layout (actions are the simple source-sink paths)::

    {"cost_model": "proportional", "weights": ["1", "1"],
     "network": {"nodes": ["s", "t"],
                 "arcs": [{"tail": "s", "head": "t", "alpha": "0", "beta": "1"}],
                 "terminals": [["s", "t"], ["s", "t"]]}}

Writing always produces the congestion layout.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .exactmath import format_rational, parse_rational
from .game import Arc, GameError, GameInstance, Resource, from_network


def game_to_dict(g: GameInstance) -> dict[str, Any]:
    def actions(player: int) -> list[dict[str, Any]]:
        return [
            {"name": g.action_name(player, k), "resources": sorted(a)}
            for k, a in enumerate(g.actions(player))
        ]

    return {
        "cost_model": g.cost_model.value,
        "weights": [format_rational(g.w1), format_rational(g.w2)],
        "resources": [
            {"id": r.id, "alpha": format_rational(r.alpha), "beta": format_rational(r.beta)}
            for r in g.resources
        ],
        "actions": [actions(1), actions(2)],
    }


def game_from_dict(data: dict[str, Any]) -> GameInstance:
    try:
        w1, w2 = (parse_rational(str(w)) for w in data["weights"])
        cost_model = data.get("cost_model", "uniform")
        if "network" in data:
            net = data["network"]
            arcs = [
                Arc(
                    a.get("id", f"{a['tail']}-{a['head']}"),
                    a["tail"],
                    a["head"],
                    parse_rational(str(a.get("alpha", "0"))),
                    parse_rational(str(a.get("beta", "0"))),
                )
                for a in net["arcs"]
            ]
            t1, t2 = (tuple(t) for t in net["terminals"])
            return from_network(net["nodes"], arcs, t1, t2, w1, w2, cost_model)
        resources = tuple(
            Resource(
                str(r["id"]),
                parse_rational(str(r.get("alpha", "0"))),
                parse_rational(str(r.get("beta", "0"))),
            )
            for r in data["resources"]
        )
        acts, names = [], []
        for player_actions in data["actions"]:
            acts.append(tuple(frozenset(map(str, a["resources"])) for a in player_actions))
            if all("name" in a for a in player_actions):
                names.append(tuple(str(a["name"]) for a in player_actions))
            else:
                names.append(None)
        if len(acts) != 2:
            raise GameError("expected action lists for exactly two players")
        return GameInstance(resources, acts[0], acts[1], w1, w2, cost_model, names[0], names[1])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GameError):
            raise
        raise GameError(f"malformed game file: {exc}") from exc


def dumps_game(g: GameInstance) -> str:
    return json.dumps(game_to_dict(g), indent=2) + "\n"


def loads_game(text: str) -> GameInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"game file is not valid JSON: {exc}") from exc
    return game_from_dict(data)


def save_game(g: GameInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_game(g))


def load_game(path: str | Path) -> GameInstance:
    return loads_game(Path(path).read_text())
