"""Parametric worst-case instances with their designated equilibria and validity regimes.

Each entry builds a concrete game for given weights. Entries proven for
``w1 >= w2`` in simultaneous games also serve the mirrored regime: the game is
built with swapped weights and then the player roles are exchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .equilibria import instance_poa, is_nash, social_optimum, spe_outcomes
from .exactmath import (
    RationalLike,
    Side,
    compare_ratio_to_rho,
    compare_ratio_to_sigma,
    compare_ratio_to_tau,
    parse_rational,
)
from .game import ActionProfile, CostModel, GameError, GameInstance, Resource, from_network, social_cost
from .formulas import poa_closed_form
from .worstcase import GameClass, lp_poa

U, P = CostModel.UNIFORM, CostModel.PROPORTIONAL


class RegimeError(ValueError):
    """Weights or cost model outside the range an entry is built for."""


def _ratio_side(compare, w1: Fraction, w2: Fraction) -> Side:
    if w2 == 0:
        return Side.ABOVE
    return compare(w1, w2)


# ---------------------------------------------------------------------------
# Builders (coefficients as functions of the weights)


def _fig2(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [
        ("a", "b", 0, w1 * w2 + w2**2),
        ("a", "c", 0, w1 * w2),
        ("b", "d", 0, 0),
        ("b", "e", 0, 0),
        ("c", "d", 0, 0),
        ("c", "e", 0, w1**2 + w1 * w2 + w2**2),
    ]
    return from_network("abcde", arcs, ("a", "d"), ("a", "e"), w1, w2, cm)


def _congestion(
    w1: Fraction, w2: Fraction, coeffs: list[tuple[RationalLike, RationalLike]],
    actions: list[tuple[str, set[int]]],
) -> GameInstance:
    resources = tuple(Resource(str(k + 1), a, b) for k, (a, b) in enumerate(coeffs))
    sets = tuple(frozenset(str(r) for r in rs) for _, rs in actions)
    names = tuple(name for name, _ in actions)
    return GameInstance(resources, sets, sets, w1, w2, U, names, names)


def _fig3(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    coeffs = [
        (0, w1 * w2 + w2**2),
        (0, w1**2 + w1 * w2),
        (0, w1**2 + w1 * w2 + w2**2),
        (0, (w1 + w2) ** 2),
        (0, (w1 + w2) ** 2),
    ]
    actions = [("123", {1, 2, 3}), ("45", {4, 5}), ("134", {1, 3, 4}), ("235", {2, 3, 5})]
    return _congestion(w1, w2, coeffs, actions)


def _fig4(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    coeffs = [
        (0, w1**2 + 2 * w1 * w2),
        (0, w1**2 - w2**2),
        (0, w1**2 + w1 * w2 + w2**2),
        (0, w1**2 + w1 * w2 + w2**2),
        (w1**2 * w2 + w1 * w2**2 + w2**3, 0),
    ]
    actions = [("235", {2, 3, 5}), ("14", {1, 4}), ("13", {1, 3}), ("234", {2, 3, 4})]
    return _congestion(w1, w2, coeffs, actions)


def _fig5(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    coeffs = [(0, w2), (w1**2, 0), (0, w1), (0, w2), (w1**2 - w2**2, 0)]
    actions = [("12", {1, 2}), ("34", {3, 4}), ("13", {1, 3}), ("145", {1, 4, 5})]
    return _congestion(w1, w2, coeffs, actions)


def _fig6(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [("s", "a", w1, 0), ("a", "t", w2, 0), ("s", "t", 0, 1)]
    return from_network("sat", arcs, ("s", "t"), ("s", "t"), w1, w2, cm)


def _fig7(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [
        ("s", "a", 0, (w1 + w2) ** 2),
        ("s", "b", 0, w1 * w2 + w2**2),
        ("a", "b", 0, 0),
        ("a", "d", 0, 0),
        ("c", "d", 0, 0),
        ("b", "c", 0, w1**2 + w1 * w2 + w2**2),
        ("d", "t", 0, (w1 + w2) ** 2),
        ("c", "t", 0, w1**2 + w1 * w2),
    ]
    return from_network("sabcdt", arcs, ("s", "t"), ("s", "t"), w1, w2, cm)


def _fig8(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [
        ("s", "a", 0, w1**3 + w1**2 * w2 - w1 * w2**2 - w2**3),
        ("s", "b", 0, w1**3 - w1 * w2**2),
        ("a", "b", 0, 0),
        ("a", "t", 0, w1**3 + 2 * w1**2 * w2 + 2 * w1 * w2**2 + w2**3),
        ("b", "t", 0, w1**3 + w1**2 * w2 + w1 * w2**2),
    ]
    return from_network("sabt", arcs, ("s", "t"), ("s", "t"), w1, w2, cm)


def _fig9a(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [("a", "c", 0, w2), ("b", "d", 0, w1 + w2), ("a", "b", 0, 0), ("b", "c", 0, w2), ("c", "d", 0, 0)]
    return from_network("abcd", arcs, ("a", "c"), ("b", "d"), w1, w2, cm)


def _fig9b(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [
        ("a", "b", 0, 0),
        ("b", "c", 0, w1 * w2),
        ("a", "c", 0, w1**2 + w1 * w2),
        ("c", "d", 0, w2**2),
        ("d", "e", 0, 0),
        ("c", "e", 0, 0),
        ("a", "d", 0, (w1 + w2) ** 2),
    ]
    return from_network("abcde", arcs, ("b", "e"), ("a", "d"), w1, w2, cm)


def _fig9c(w1: Fraction, w2: Fraction, cm: CostModel) -> GameInstance:
    arcs = [("a", "b", 0, w2), ("b", "c", 0, 0), ("a", "c", 0, w1 + w2)]
    return from_network("abc", arcs, ("a", "b"), ("a", "c"), w1, w2, cm)


# ---------------------------------------------------------------------------
# Validity predicates (unmirrored orientation)


def _heavier_first(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w1 >= w2


def _fig3_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w2 <= w1 and _ratio_side(compare_ratio_to_rho, w1, w2) is Side.BELOW


def _fig4_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return (
        _ratio_side(compare_ratio_to_rho, w1, w2) is Side.ABOVE
        and _ratio_side(compare_ratio_to_tau, w1, w2) is Side.BELOW
    )


def _fig5_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w1 > 0 and _ratio_side(compare_ratio_to_tau, w1, w2) is Side.ABOVE


def _fig7_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w2 <= w1 and _ratio_side(compare_ratio_to_sigma, w1, w2) is Side.BELOW


def _fig8_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w1 > 0 and _ratio_side(compare_ratio_to_sigma, w1, w2) is Side.ABOVE


def _fig9a_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return cm is P or w1 >= w2


def _fig9b_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w1 <= w2 <= 2 * w1


def _fig9c_valid(w1: Fraction, w2: Fraction, cm: CostModel) -> bool:
    return w2 >= 2 * w1


@dataclass(frozen=True)
class CatalogEntry:
    """A parametric instance.

    ``equilibrium`` and ``opt_bound`` name actions of players 1 and 2 in the
    unmirrored orientation. ``tight`` says whether the instance attains the
    class PoA on its regime (otherwise it is only a lower-bound family).
    """

    id: str
    game_class: GameClass
    cost_models: frozenset[CostModel]
    regime: str
    valid: Callable[[Fraction, Fraction, CostModel], bool]
    build: Callable[[Fraction, Fraction, CostModel], GameInstance]
    equilibrium: tuple[str, str]
    opt_bound: tuple[str, str]
    mirrorable: bool = True
    tight: bool = True

    @property
    def mode(self) -> str:
        return "sequential:1" if self.game_class is GameClass.SEQUENTIAL else "simultaneous"


CATALOG: dict[str, CatalogEntry] = {
    e.id: e
    for e in (
        CatalogEntry("fig2", GameClass.SIMULTANEOUS, frozenset({U, P}), "w1 >= w2",
                     _heavier_first, _fig2, ("a-b-d", "a-c-e"), ("a-c-d", "a-b-e")),
        CatalogEntry("fig3", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({U}), "w2 <= w1 <= rho w2",
                     _fig3_valid, _fig3, ("134", "235"), ("123", "45")),
        CatalogEntry("fig4", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({U}), "rho w2 <= w1 <= tau w2",
                     _fig4_valid, _fig4, ("13", "234"), ("235", "14")),
        CatalogEntry("fig5", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({U}), "w1 >= tau w2",
                     _fig5_valid, _fig5, ("13", "145"), ("12", "34")),
        CatalogEntry("fig6", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({U}), "w1 >= w2",
                     _heavier_first, _fig6, ("s-t", "s-t"), ("s-a-t", "s-t"), tight=False),
        CatalogEntry("fig7", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({P}), "w2 <= w1 <= sigma w2",
                     _fig7_valid, _fig7, ("s-b-c-d-t", "s-a-b-c-t"), ("s-b-c-t", "s-a-d-t")),
        CatalogEntry("fig8", GameClass.SYMMETRIC_SIMULTANEOUS, frozenset({P}), "w1 >= sigma w2",
                     _fig8_valid, _fig8, ("s-a-b-t", "s-b-t"), ("s-b-t", "s-a-t")),
        CatalogEntry("fig9a", GameClass.SEQUENTIAL, frozenset({U, P}),
                     "uniform: w1 >= w2; proportional: all weights",
                     _fig9a_valid, _fig9a, ("a-b-c", "b-d"), ("a-c", "b-c-d"), mirrorable=False),
        CatalogEntry("fig9b", GameClass.SEQUENTIAL, frozenset({U}), "w1 <= w2 <= 2 w1",
                     _fig9b_valid, _fig9b, ("b-c-d-e", "a-d"), ("b-c-e", "a-c-d"), mirrorable=False),
        CatalogEntry("fig9c", GameClass.SEQUENTIAL, frozenset({U}), "w2 >= 2 w1",
                     _fig9c_valid, _fig9c, ("a-b", "a-b-c"), ("a-b", "a-c"), mirrorable=False),
    )
}


@dataclass(frozen=True)
class CatalogInstance:
    entry: CatalogEntry
    game: GameInstance
    equilibrium: ActionProfile
    opt_bound: ActionProfile
    mirrored: bool


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return CATALOG[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog entry {entry_id!r}; known: {', '.join(CATALOG)}") from None


def is_valid(entry_id: str, w1: RationalLike, w2: RationalLike, cost_model: CostModel | str) -> bool:
    """Whether :func:`build_instance` accepts these arguments (mirroring included)."""
    e = get_entry(entry_id)
    cm = CostModel.parse(cost_model)
    a, b = parse_rational(w1), parse_rational(w2)
    if cm not in e.cost_models or a < 0 or b < 0 or a + b <= 0:
        return False
    return e.valid(a, b, cm) or (e.mirrorable and e.valid(b, a, cm))


def build_instance(
    entry_id: str, w1: RationalLike, w2: RationalLike, cost_model: CostModel | str = U
) -> CatalogInstance:
    """Concrete game of an entry; raises :class:`RegimeError` outside its regime."""
    e = get_entry(entry_id)
    cm = CostModel.parse(cost_model)
    a, b = parse_rational(w1), parse_rational(w2)
    if cm not in e.cost_models:
        models = ", ".join(sorted(m.value for m in e.cost_models))
        raise RegimeError(f"{entry_id} supports {models} costs, not {cm.value}")
    if a < 0 or b < 0 or a + b <= 0:
        raise RegimeError(f"need w1, w2 >= 0 with w1 + w2 > 0, got ({a}, {b})")
    if e.valid(a, b, cm):
        g = e.build(a, b, cm)
        return CatalogInstance(e, g, g.profile(*e.equilibrium), g.profile(*e.opt_bound), False)
    if e.mirrorable and e.valid(b, a, cm):
        g = e.build(b, a, cm).swap_players()
        eq = g.profile(e.equilibrium[1], e.equilibrium[0])
        opt = g.profile(e.opt_bound[1], e.opt_bound[0])
        return CatalogInstance(e, g, eq, opt, True)
    raise RegimeError(f"{entry_id} requires {e.regime}; got w1={a}, w2={b}")


@dataclass(frozen=True)
class EntryReport:
    entry_id: str
    w1: Fraction
    w2: Fraction
    cost_model: CostModel
    mirrored: bool
    equilibrium_valid: bool
    opt_bound_cost: Fraction
    optimum_cost: Fraction
    poa: Fraction
    formula_value: Fraction
    lp_value: Fraction
    tight: bool

    @property
    def matches_formula(self) -> bool:
        return self.poa == self.formula_value

    @property
    def matches_lp(self) -> bool:
        return self.poa == self.lp_value

    @property
    def ok(self) -> bool:
        """Equilibrium holds, the bound profile bounds the optimum, and the PoA
        equals the LP (tight entries) or does not exceed it (lower-bound families)."""
        if not self.equilibrium_valid or self.opt_bound_cost < self.optimum_cost:
            return False
        if self.tight:
            return self.matches_lp and self.matches_formula
        return self.poa <= self.lp_value


def verify_entry(
    entry_id: str, w1: RationalLike, w2: RationalLike, cost_model: CostModel | str = U
) -> EntryReport:
    inst = build_instance(entry_id, w1, w2, cost_model)
    g, e = inst.game, inst.entry
    if e.game_class is GameClass.SEQUENTIAL:
        eq_ok = inst.equilibrium in spe_outcomes(g, leader=1)
    else:
        eq_ok = is_nash(g, inst.equilibrium)
    report = instance_poa(g, e.mode)
    _, opt_cost = social_optimum(g)
    return EntryReport(
        entry_id=entry_id,
        w1=g.w1,
        w2=g.w2,
        cost_model=g.cost_model,
        mirrored=inst.mirrored,
        equilibrium_valid=eq_ok,
        opt_bound_cost=social_cost(g, inst.opt_bound),
        optimum_cost=opt_cost,
        poa=report.poa,
        formula_value=poa_closed_form(e.game_class, g.cost_model, g.w1, g.w2),
        lp_value=lp_poa(e.game_class, g.cost_model, g.w1, g.w2),
        tight=e.tight,
    )


def sample_weights(entry_id: str, cost_model: CostModel | str, count: int = 5) -> list[tuple[Fraction, Fraction]]:
    """Deterministic valid weight pairs for an entry, spread over its regime."""
    candidates = [
        Fraction(n, d)
        for n, d in [
            (1, 1), (6, 5), (3, 2), (7, 4), (2, 1), (17, 8), (9, 4), (5, 2), (11, 4), (3, 1),
            (19, 6), (10, 3), (4, 1), (6, 1), (10, 1), (2, 3), (1, 2), (3, 5), (5, 7), (1, 3),
            (1, 4), (5, 4), (21, 10), (43, 20), (31, 10), (2, 5), (1, 6), (3, 7), (2, 9), (1, 10),
        ]
    ]
    out: list[tuple[Fraction, Fraction]] = []
    for r in candidates:
        w = (Fraction(r.numerator), Fraction(r.denominator))
        if is_valid(entry_id, *w, cost_model) and w not in out:
            out.append(w)
        if len(out) == count:
            break
    return out
