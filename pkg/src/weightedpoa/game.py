"""Weighted two-player affine congestion games and their exact cost evaluation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .exactmath import RationalLike, parse_rational

logger = logging.getLogger(__name__)


class GameError(ValueError):
    """Malformed game description."""


class CostModel(str, Enum):
    UNIFORM = "uniform"
    PROPORTIONAL = "proportional"

    @classmethod
    def parse(cls, text: str | CostModel) -> CostModel:
        if isinstance(text, CostModel):
            return text
        aliases = {"uni": cls.UNIFORM, "prop": cls.PROPORTIONAL}
        try:
            return aliases.get(text) or cls(text)
        except ValueError:
            raise GameError(f"unknown cost model {text!r}") from None


@dataclass(frozen=True)
class Resource:
    id: str
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", parse_rational(self.alpha))
        object.__setattr__(self, "beta", parse_rational(self.beta))
        if self.alpha < 0 or self.beta < 0:
            raise GameError(f"resource {self.id!r} has a negative coefficient")


class ActionProfile(NamedTuple):
    a1: int
    a2: int


def _as_action(ids: Iterable[str]) -> frozenset[str]:
    return frozenset(str(r) for r in ids)


@dataclass(frozen=True)
class GameInstance:
    """Resources, per-player action sets, weights and cost model.

    Actions are frozensets of resource ids. Duplicate actions of a player are
    dropped on construction (first occurrence kept, a warning is logged).
    ``names1``/``names2`` optionally carry a display name per action.
    """

    resources: tuple[Resource, ...]
    actions1: tuple[frozenset[str], ...]
    actions2: tuple[frozenset[str], ...]
    w1: Fraction
    w2: Fraction
    cost_model: CostModel = CostModel.UNIFORM
    names1: tuple[str, ...] | None = None
    names2: tuple[str, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "resources", tuple(self.resources))
        set_(self, "w1", parse_rational(self.w1))
        set_(self, "w2", parse_rational(self.w2))
        set_(self, "cost_model", CostModel.parse(self.cost_model))
        if self.w1 < 0 or self.w2 < 0 or self.w1 + self.w2 <= 0:
            raise GameError(f"need w1, w2 >= 0 with w1 + w2 > 0, got ({self.w1}, {self.w2})")
        ids = [r.id for r in self.resources]
        if len(set(ids)) != len(ids):
            raise GameError("duplicate resource ids")
        known = set(ids)
        for player, attr, names_attr in ((1, "actions1", "names1"), (2, "actions2", "names2")):
            actions = [_as_action(a) for a in getattr(self, attr)]
            names = getattr(self, names_attr)
            if not actions:
                raise GameError(f"player {player} has no actions")
            if names is not None and len(names) != len(actions):
                raise GameError(f"player {player}: {len(names)} names for {len(actions)} actions")
            for a in actions:
                missing = a - known
                if missing:
                    raise GameError(f"player {player} action references unknown resources {sorted(missing)}")
            kept: list[frozenset[str]] = []
            kept_names: list[str] = []
            for i, a in enumerate(actions):
                if a in kept:
                    logger.warning("player %d: dropping duplicate action %s", player, sorted(a))
                    continue
                kept.append(a)
                if names is not None:
                    kept_names.append(names[i])
            set_(self, attr, tuple(kept))
            set_(self, names_attr, tuple(kept_names) if names is not None else None)

    @cached_property
    def resource_map(self) -> dict[str, Resource]:
        return {r.id: r for r in self.resources}

    @property
    def weights(self) -> tuple[Fraction, Fraction]:
        return self.w1, self.w2

    @property
    def is_symmetric(self) -> bool:
        return set(self.actions1) == set(self.actions2)

    def actions(self, player: int) -> tuple[frozenset[str], ...]:
        return self.actions1 if player == 1 else self.actions2

    def action_name(self, player: int, index: int) -> str:
        names = self.names1 if player == 1 else self.names2
        if names is not None:
            return names[index]
        return "{" + ",".join(sorted(self.actions(player)[index])) + "}"

    def action_index(self, player: int, name_or_set: str | Iterable[str]) -> int:
        """Locate an action by display name or by its resource set."""
        names = self.names1 if player == 1 else self.names2
        if isinstance(name_or_set, str):
            if names is not None and name_or_set in names:
                return names.index(name_or_set)
            raise KeyError(f"player {player} has no action named {name_or_set!r}")
        target = _as_action(name_or_set)
        try:
            return self.actions(player).index(target)
        except ValueError:
            raise KeyError(f"player {player} has no action {sorted(target)}") from None

    def profile(self, a1: str | Iterable[str], a2: str | Iterable[str]) -> ActionProfile:
        return ActionProfile(self.action_index(1, a1), self.action_index(2, a2))

    def profiles(self) -> Iterable[ActionProfile]:
        for i in range(len(self.actions1)):
            for j in range(len(self.actions2)):
                yield ActionProfile(i, j)

    def swap_players(self) -> GameInstance:
        """Same game with the roles of players 1 and 2 exchanged."""
        return GameInstance(
            resources=self.resources,
            actions1=self.actions2,
            actions2=self.actions1,
            w1=self.w2,
            w2=self.w1,
            cost_model=self.cost_model,
            names1=self.names2,
            names2=self.names1,
            meta=dict(self.meta),
        )

    def with_cost_model(self, cost_model: CostModel | str) -> GameInstance:
        return GameInstance(
            self.resources, self.actions1, self.actions2, self.w1, self.w2,
            CostModel.parse(cost_model), self.names1, self.names2, dict(self.meta),
        )


def loads(g: GameInstance, p: ActionProfile) -> dict[str, Fraction]:
    """Load ``x_r`` of every resource used in profile ``p``."""
    x: dict[str, Fraction] = {}
    for r in g.actions1[p.a1]:
        x[r] = x.get(r, Fraction(0)) + g.w1
    for r in g.actions2[p.a2]:
        x[r] = x.get(r, Fraction(0)) + g.w2
    return x


def player_cost(g: GameInstance, p: ActionProfile, player: int) -> Fraction:
    """Cost of ``player`` in profile ``p`` under the game's cost model."""
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player}")
    x = loads(g, p)
    own = g.actions1[p.a1] if player == 1 else g.actions2[p.a2]
    res = g.resource_map
    total = sum((res[r].alpha + res[r].beta * x[r] for r in own), Fraction(0))
    if g.cost_model is CostModel.PROPORTIONAL:
        total *= g.w1 if player == 1 else g.w2
    return total


def social_cost(g: GameInstance, p: ActionProfile) -> Fraction:
    return player_cost(g, p, 1) + player_cost(g, p, 2)


# ---------------------------------------------------------------------------
# Network routing games


@dataclass(frozen=True)
class Arc:
    id: str
    tail: str
    head: str
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)


def simple_paths(arcs: Sequence[Arc], source: str, sink: str) -> list[list[Arc]]:
    """All simple directed ``source -> sink`` paths, depth-first in arc input order."""
    out_arcs: dict[str, list[Arc]] = {}
    for arc in arcs:
        out_arcs.setdefault(arc.tail, []).append(arc)
    paths: list[list[Arc]] = []
    stack: list[Arc] = []
    visited = {source}

    def dfs(node: str) -> None:
        if node == sink:
            paths.append(list(stack))
            return
        for arc in out_arcs.get(node, ()):
            if arc.head in visited:
                continue
            visited.add(arc.head)
            stack.append(arc)
            dfs(arc.head)
            stack.pop()
            visited.discard(arc.head)

    if source == sink:
        return [[]]
    dfs(source)
    return paths


def path_name(path: Sequence[Arc]) -> str:
    if not path:
        return ""
    return "-".join([path[0].tail] + [a.head for a in path])


def from_network(
    nodes: Sequence[str],
    arcs: Sequence[Arc | tuple],
    terminals1: tuple[str, str],
    terminals2: tuple[str, str],
    w1: RationalLike,
    w2: RationalLike,
    cost_model: CostModel | str = CostModel.UNIFORM,
) -> GameInstance:
    """Build the routing game whose actions are the simple ``s_i -> t_i`` paths.

    ``arcs`` are :class:`Arc` objects or ``(tail, head, alpha, beta[, id])`` tuples;
    a missing id defaults to ``"tail-head"``. Action names are node sequences
    such as ``"a-b-d"``.
    """
    arc_list: list[Arc] = []
    for item in arcs:
        if isinstance(item, Arc):
            arc = item
        else:
            tail, head, alpha, beta, *rest = item
            arc = Arc(rest[0] if rest else f"{tail}-{head}", tail, head, alpha, beta)
        arc_list.append(
            Arc(arc.id, arc.tail, arc.head, parse_rational(arc.alpha), parse_rational(arc.beta))
        )
    node_set = set(nodes)
    for arc in arc_list:
        if arc.tail not in node_set or arc.head not in node_set:
            raise GameError(f"arc {arc.id!r} uses an unknown node")
    actions: list[list[frozenset[str]]] = []
    names: list[list[str]] = []
    for player, (s, t) in ((1, terminals1), (2, terminals2)):
        if s not in node_set or t not in node_set:
            raise GameError(f"player {player} terminal not in node set")
        paths = simple_paths(arc_list, s, t)
        if not paths:
            raise GameError(f"no {s}->{t} path for player {player}")
        actions.append([frozenset(a.id for a in p) for p in paths])
        names.append([path_name(p) for p in paths])
    return GameInstance(
        resources=tuple(Resource(a.id, a.alpha, a.beta) for a in arc_list),
        actions1=tuple(actions[0]),
        actions2=tuple(actions[1]),
        w1=parse_rational(w1),
        w2=parse_rational(w2),
        cost_model=CostModel.parse(cost_model),
        names1=tuple(names[0]),
        names2=tuple(names[1]),
    )
