"""Pure Nash equilibria, subgame-perfect outcomes, social optima and instance PoA."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .game import ActionProfile, GameInstance, player_cost, social_cost


class UnboundedPoaError(ArithmeticError):
    """Social optimum costs zero while some equilibrium has positive cost."""


class NoEquilibriumError(ValueError):
    """No equilibrium profile exists; the instance is malformed."""


def cost_tables(g: GameInstance) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Per-player cost matrices indexed ``[a1][a2]``."""
    n1, n2 = len(g.actions1), len(g.actions2)
    c1 = [[Fraction(0)] * n2 for _ in range(n1)]
    c2 = [[Fraction(0)] * n2 for _ in range(n1)]
    for i in range(n1):
        for j in range(n2):
            p = ActionProfile(i, j)
            c1[i][j] = player_cost(g, p, 1)
            c2[i][j] = player_cost(g, p, 2)
    return c1, c2


def is_nash(g: GameInstance, p: ActionProfile) -> bool:
    c1 = player_cost(g, p, 1)
    if any(player_cost(g, ActionProfile(k, p.a2), 1) < c1 for k in range(len(g.actions1))):
        return False
    c2 = player_cost(g, p, 2)
    return not any(player_cost(g, ActionProfile(p.a1, k), 2) < c2 for k in range(len(g.actions2)))


def nash_equilibria(g: GameInstance) -> list[ActionProfile]:
    """All pure Nash equilibria (weak inequalities), in row-major profile order."""
    c1, c2 = cost_tables(g)
    n1, n2 = len(g.actions1), len(g.actions2)
    col_min = [min(c1[i][j] for i in range(n1)) for j in range(n2)]
    row_min = [min(c2[i]) for i in range(n1)]
    return [
        ActionProfile(i, j)
        for i in range(n1)
        for j in range(n2)
        if c1[i][j] <= col_min[j] and c2[i][j] <= row_min[i]
    ]


def best_responses(g: GameInstance, a1: int) -> list[int]:
    """Follower (player 2) actions minimizing its cost against leader action ``a1``."""
    costs = [player_cost(g, ActionProfile(a1, j), 2) for j in range(len(g.actions2))]
    best = min(costs)
    return [j for j, c in enumerate(costs) if c == best]


def spe_outcomes(g: GameInstance, leader: int = 1) -> list[ActionProfile]:
    """Outcomes of subgame-perfect equilibria under every follower tie-breaking.

    A profile ``(a, b)`` is produced by some best-response selection ``s`` and
    some cost-minimal leader action iff ``b`` is a best response to ``a`` and
    the leader's cost ``C_L(a, b)`` does not exceed, for any other leader action
    ``a'``, the worst leader cost among the follower's best responses to
    ``a'`` (the selection picks exactly those). This characterization enumerates
    the same set as iterating all selection functions without the product blowup.
    Profiles are always reported as ``(player-1 action, player-2 action)``.
    """
    if leader not in (1, 2):
        raise ValueError(f"leader must be 1 or 2, got {leader}")
    h = g if leader == 1 else g.swap_players()
    c1, _ = cost_tables(h)
    n1 = len(h.actions1)
    br = [best_responses(h, a) for a in range(n1)]
    worst = [max(c1[a][b] for b in br[a]) for a in range(n1)]
    outcomes: list[ActionProfile] = []
    for a in range(n1):
        threshold = min((worst[k] for k in range(n1) if k != a), default=None)
        for b in br[a]:
            if threshold is None or c1[a][b] <= threshold:
                outcomes.append(ActionProfile(a, b))
    if leader == 2:
        outcomes = sorted(ActionProfile(b, a) for a, b in outcomes)
    return outcomes


def social_optimum(g: GameInstance) -> tuple[ActionProfile, Fraction]:
    """Minimum social cost over all profiles; ties go to the smallest index pair."""
    best_p, best_c = None, None
    for p in g.profiles():
        c = social_cost(g, p)
        if best_c is None or c < best_c:
            best_p, best_c = p, c
    assert best_p is not None and best_c is not None
    return best_p, best_c


Mode = Literal["simultaneous", "sequential:1", "sequential:2"]


def parse_mode(mode: str) -> tuple[str, int | None]:
    """``"simultaneous"`` -> (simultaneous, None); ``"sequential:2"`` -> (sequential, 2)."""
    if mode == "simultaneous":
        return "simultaneous", None
    if mode in ("sequential", "sequential:1"):
        return "sequential", 1
    if mode == "sequential:2":
        return "sequential", 2
    raise ValueError(f"unknown mode {mode!r}; expected simultaneous, sequential:1 or sequential:2")


@dataclass(frozen=True)
class EquilibriumReport:
    kind: str  # "nash" or "subgame_perfect"
    leader: int | None
    equilibrium_profiles: tuple[ActionProfile, ...]
    worst_equilibrium_profile: ActionProfile
    worst_equilibrium_cost: Fraction
    optimum_profile: ActionProfile
    optimum_cost: Fraction
    poa: Fraction
    degenerate: bool = False  # both costs zero, poa set to 1 by convention

    def to_dict(self, g: GameInstance | None = None) -> dict:
        def show(p: ActionProfile):
            if g is None:
                return [p.a1, p.a2]
            return [g.action_name(1, p.a1), g.action_name(2, p.a2)]

        return {
            "kind": self.kind,
            "leader": self.leader,
            "equilibria": [show(p) for p in self.equilibrium_profiles],
            "worst_equilibrium": show(self.worst_equilibrium_profile),
            "worst_equilibrium_cost": str(self.worst_equilibrium_cost),
            "optimum": show(self.optimum_profile),
            "optimum_cost": str(self.optimum_cost),
            "poa": str(self.poa),
            "degenerate": self.degenerate,
        }


def instance_poa(g: GameInstance, mode: str = "simultaneous") -> EquilibriumReport:
    """Exact price of anarchy of one instance.

    ``mode`` is ``"simultaneous"`` (pure Nash) or ``"sequential:1"`` /
    ``"sequential:2"`` (subgame-perfect outcomes with the given leader,
    adversarial tie-breaking).
    """
    kind, leader = parse_mode(mode)
    if kind == "simultaneous":
        eqs = nash_equilibria(g)
        label = "nash"
    else:
        eqs = spe_outcomes(g, leader or 1)
        label = "subgame_perfect"
    if not eqs:
        raise NoEquilibriumError("instance has no pure equilibrium")
    worst_p = max(eqs, key=lambda p: social_cost(g, p))
    worst_c = social_cost(g, worst_p)
    opt_p, opt_c = social_optimum(g)
    degenerate = False
    if opt_c == 0:
        if worst_c > 0:
            raise UnboundedPoaError("social optimum is 0 but an equilibrium has positive cost")
        poa, degenerate = Fraction(1), True
    else:
        poa = worst_c / opt_c
    return EquilibriumReport(
        kind=label,
        leader=leader,
        equilibrium_profiles=tuple(eqs),
        worst_equilibrium_profile=worst_p,
        worst_equilibrium_cost=worst_c,
        optimum_profile=opt_p,
        optimum_cost=opt_c,
        poa=poa,
        degenerate=degenerate,
    )
