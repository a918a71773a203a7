"""Closed-form price of anarchy for fixed weights, and suprema over all weights.

Every game class has a piecewise homogeneous rational function of
``(w1, w2)``. Irrational regime boundaries (tau, sigma) are decided with exact
comparisons from :mod:`weightedpoa.exactmath`. Suprema are exact when rational
and otherwise given as certified enclosures found by bisecting the sign of the
derivative numerator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactmath import (
    Poly,
    RationalInterval,
    RationalLike,
    Side,
    compare_ratio_to_rho,
    compare_ratio_to_sigma,
    compare_ratio_to_tau,
    isolate_root,
    parse_rational,
    poly_eval,
    quotient_derivative_numerator,
    sigma_polynomial_sign,
)
from .game import CostModel
from .worstcase import GameClass, check_supported

F = Fraction


def _weights(w1: RationalLike, w2: RationalLike) -> tuple[Fraction, Fraction]:
    a, b = parse_rational(w1), parse_rational(w2)
    if a < 0 or b < 0 or a + b <= 0:
        raise ValueError(f"need w1, w2 >= 0 with w1 + w2 > 0, got ({a}, {b})")
    return a, b


# ---------------------------------------------------------------------------
# Piece expressions. Arguments are the weights in player order; ``hi``/``lo``
# denote max and min of the two.


def sim_uni(w1: Fraction, w2: Fraction) -> Fraction:
    hi = max(w1, w2)
    return 1 + (2 * w1 * w2 + hi**2) / (w1**2 + w1 * w2 + w2**2)


def sim_prop(w1: Fraction, w2: Fraction) -> Fraction:
    hi, lo = max(w1, w2), min(w1, w2)
    return 1 + w1 * w2 * (w1 + w2 + hi) / (w1**3 + w2**3 + w1 * w2 * lo)


def sym_uni_a(w1: Fraction, w2: Fraction) -> Fraction:
    lo = min(w1, w2)
    num = 3 * (w1 + w2) ** 3
    den = 2 * w1**3 + 5 * w1**2 * w2 + 5 * w1 * w2**2 + 2 * w2**3 + w1 * w2 * lo
    return num / den


def _sym_uni_b_base(w1: Fraction, w2: Fraction) -> tuple[Fraction, Fraction]:
    base = 2 * w1**3 + 5 * w1**2 * w2 + 5 * w1 * w2**2 + 2 * w2**3
    den = 2 * w1**3 + 4 * w1**2 * w2 + 4 * w1 * w2**2 + 2 * w2**3
    return base, den


def sym_uni_b(w1: Fraction, w2: Fraction) -> Fraction:
    base, den = _sym_uni_b_base(w1, w2)
    return (base + max(w1**3 + 3 * w1**2 * w2, 3 * w1 * w2**2 + w2**3)) / den


def sym_uni_b_candidates(w1: RationalLike, w2: RationalLike) -> dict[str, Fraction]:
    """Three competing readings of the middle symmetric uniform piece.

    ``max_sum`` adds ``3 max(w1^3 + w1^2 w2, w1 w2^2 + w2^3)`` to the base,
    ``equilibrium_total`` uses equilibrium cost ``3a^3 + 8a^2 b + 5ab^2 + b^3`` and
    ``equilibrium_bound`` uses ``3a^3 + 8a^2 b + 5ab^2 + 2b^3`` (``a``/``b`` the larger
    and smaller weight). Only ``equilibrium_bound`` agrees with the LP and is what
    :func:`poa_closed_form` uses.
    """
    w1, w2 = _weights(w1, w2)
    a, b = max(w1, w2), min(w1, w2)
    base, den = _sym_uni_b_base(w1, w2)
    return {
        "max_sum": (base + 3 * max(w1**2 * w2 + w1**3, w1 * w2**2 + w2**3)) / den,
        "equilibrium_total": (3 * a**3 + 8 * a**2 * b + 5 * a * b**2 + b**3) / den,
        "equilibrium_bound": (3 * a**3 + 8 * a**2 * b + 5 * a * b**2 + 2 * b**3) / den,
    }


def sym_uni_c(w1: Fraction, w2: Fraction) -> Fraction:
    return 2 * (w1**2 + w1 * w2 + w2**2) / (w1 + w2) ** 2


def sym_prop_a(w1: Fraction, w2: Fraction) -> Fraction:
    lo = min(w1, w2)
    num = 2 * w1**4 + 6 * w1**3 * w2 + 8 * w1**2 * w2**2 + 6 * w1 * w2**3 + 2 * w2**4
    den = 2 * w1**4 + 3 * w1**3 * w2 + 4 * w1**2 * w2**2 + 3 * w1 * w2**3 + 2 * w2**4 + w1 * w2 * lo**2
    return num / den


def sym_prop_b(w1: Fraction, w2: Fraction) -> Fraction:
    a, b = max(w1, w2), min(w1, w2)
    num = 2 * a**4 + 4 * a**3 * b + 4 * a**2 * b**2 + 2 * a * b**3
    den = 2 * a**4 + a**3 * b + 2 * a**2 * b**2 + 3 * a * b**3 + b**4
    return num / den


def sym_prop_b_alternative(w1: RationalLike, w2: RationalLike) -> Fraction:
    """Outer symmetric proportional piece with the alternative denominator
    ``w1^3 w2 + 2 w1^2 w2^2 + 2 w1 w2^3 + w2^4 + 2 w1 w2 min^2 + max^4``.

    It is neither player-symmetric nor continuous with the inner piece and
    disagrees with the LP; kept for discrepancy reports only.
    """
    w1, w2 = _weights(w1, w2)
    hi, lo = max(w1, w2), min(w1, w2)
    num = 2 * w1**3 * w2 + 4 * w1**2 * w2**2 + 2 * w1 * w2**3 + 2 * max(w1**4 + w1**3 * w2, w1 * w2**3 + w2**4)
    den = w1**3 * w2 + 2 * w1**2 * w2**2 + 2 * w1 * w2**3 + w2**4 + 2 * w1 * w2 * lo**2 + hi**4
    return num / den


def seq_uni_a(w1: Fraction, w2: Fraction) -> Fraction:
    return 1 + w1 / (w1 + w2)


def seq_uni_b(w1: Fraction, w2: Fraction) -> Fraction:
    return 1 + 2 * w1 * w2 / (2 * w1**2 + w1 * w2 + w2**2)


def seq_uni_c(w1: Fraction, w2: Fraction) -> Fraction:
    return 1 + w2 / (2 * w1 + w2)


def seq_prop(w1: Fraction, w2: Fraction) -> Fraction:
    return 1 + w1 * w2 / (w1**2 + w2**2)


# ---------------------------------------------------------------------------
# Regime predicates


def _always(w1: Fraction, w2: Fraction) -> bool:
    return True


def _below_rho(w1: Fraction, w2: Fraction) -> bool:
    hi, lo = max(w1, w2), min(w1, w2)
    return lo > 0 and compare_ratio_to_rho(hi, lo) is Side.BELOW


def _below_tau(w1: Fraction, w2: Fraction) -> bool:
    hi, lo = max(w1, w2), min(w1, w2)
    return lo > 0 and compare_ratio_to_tau(hi, lo) is Side.BELOW


def _below_sigma(w1: Fraction, w2: Fraction) -> bool:
    hi, lo = max(w1, w2), min(w1, w2)
    return lo > 0 and compare_ratio_to_sigma(hi, lo) is Side.BELOW


@dataclass(frozen=True)
class Piece:
    tag: str
    applies: Callable[[Fraction, Fraction], bool]
    value: Callable[[Fraction, Fraction], Fraction]
    description: str


@dataclass(frozen=True)
class PoaFormula:
    """Pieces are tried in order; the first whose predicate holds is used."""

    game_class: GameClass
    cost_model: CostModel
    pieces: tuple[Piece, ...]

    def piece_for(self, w1: RationalLike, w2: RationalLike) -> Piece:
        a, b = _weights(w1, w2)
        for piece in self.pieces:
            if piece.applies(a, b):
                return piece
        raise AssertionError("pieces do not cover the weight domain")

    def __call__(self, w1: RationalLike, w2: RationalLike) -> Fraction:
        a, b = _weights(w1, w2)
        return self.piece_for(a, b).value(a, b)


_U, _P = CostModel.UNIFORM, CostModel.PROPORTIONAL

FORMULAS: dict[tuple[GameClass, CostModel], PoaFormula] = {
    (GameClass.SIMULTANEOUS, _U): PoaFormula(
        GameClass.SIMULTANEOUS, _U, (Piece("sim-uni", _always, sim_uni, "all weights"),)
    ),
    (GameClass.SIMULTANEOUS, _P): PoaFormula(
        GameClass.SIMULTANEOUS, _P, (Piece("sim-prop", _always, sim_prop, "all weights"),)
    ),
    (GameClass.SYMMETRIC_SIMULTANEOUS, _U): PoaFormula(
        GameClass.SYMMETRIC_SIMULTANEOUS,
        _U,
        (
            Piece("sym-uni:a", _below_rho, sym_uni_a, "max <= rho min"),
            Piece("sym-uni:b", _below_tau, sym_uni_b, "rho min <= max <= tau min"),
            Piece("sym-uni:c", _always, sym_uni_c, "max >= tau min"),
        ),
    ),
    (GameClass.SYMMETRIC_SIMULTANEOUS, _P): PoaFormula(
        GameClass.SYMMETRIC_SIMULTANEOUS,
        _P,
        (
            Piece("sym-prop:a", _below_sigma, sym_prop_a, "max <= sigma min"),
            Piece("sym-prop:b", _always, sym_prop_b, "max >= sigma min"),
        ),
    ),
    (GameClass.SEQUENTIAL, _U): PoaFormula(
        GameClass.SEQUENTIAL,
        _U,
        (
            Piece("seq-uni:a", lambda w1, w2: w2 <= w1, seq_uni_a, "w2 <= w1"),
            Piece("seq-uni:b", lambda w1, w2: w2 <= 2 * w1, seq_uni_b, "w1 <= w2 <= 2 w1"),
            Piece("seq-uni:c", _always, seq_uni_c, "w2 >= 2 w1"),
        ),
    ),
    (GameClass.SEQUENTIAL, _P): PoaFormula(
        GameClass.SEQUENTIAL, _P, (Piece("seq-prop", _always, seq_prop, "all weights"),)
    ),
}


def formula(game_class: GameClass | str, cost_model: CostModel | str) -> PoaFormula:
    gc = GameClass.parse(game_class)
    check_supported(gc)
    return FORMULAS[gc, CostModel.parse(cost_model)]


def poa_closed_form(
    game_class: GameClass | str, cost_model: CostModel | str, w1: RationalLike, w2: RationalLike
) -> Fraction:
    """Exact price of anarchy for the class and weights (``w1`` leads in sequential games)."""
    return formula(game_class, cost_model)(w1, w2)


def regime(
    game_class: GameClass | str, cost_model: CostModel | str, w1: RationalLike, w2: RationalLike
) -> str:
    return formula(game_class, cost_model).piece_for(w1, w2).tag


# ---------------------------------------------------------------------------
# Suprema over all weights


@dataclass(frozen=True)
class SupremumInfo:
    """Supremum of the PoA over all weight pairs.

    ``value`` and ``ratio`` are exact rationals or certified enclosures.
    ``ratio`` is the maximizing ``w1/w2`` (with ``w1 >= w2``); it is ``None``
    when the supremum is only approached as the ratio tends to infinity.
    """

    value: Fraction | RationalInterval
    ratio: Fraction | RationalInterval | None
    attained: bool

    def approx(self) -> float:
        v = self.value
        return float(v.midpoint if isinstance(v, RationalInterval) else v)


def _interior_maximum(
    num: Poly, den: Poly, lo: RationalLike, hi: RationalLike, width: Fraction
) -> SupremumInfo:
    crit = quotient_derivative_numerator(num, den)
    step = width
    while True:
        x = isolate_root(crit, lo, hi, step)
        value = poly_eval(num, x) / poly_eval(den, x)
        if value.width <= width:
            return SupremumInfo(value, x, True)
        step /= 16


def _poly(*coeffs: int) -> list[Fraction]:
    """Coefficients given highest degree first, stored lowest first."""
    return [F(c) for c in reversed(coeffs)]


def supremum_info(
    game_class: GameClass | str, cost_model: CostModel | str, width: RationalLike = F(1, 10**6)
) -> SupremumInfo:
    """Supremum over all weights; enclosures have width at most ``width``."""
    gc = GameClass.parse(game_class)
    check_supported(gc)
    cm = CostModel.parse(cost_model)
    width = parse_rational(width)
    if gc is GameClass.SIMULTANEOUS and cm is _U:
        # 1 + (x^2 + 2x) / (x^2 + x + 1) on x >= 1
        return _interior_maximum(_poly(2, 3, 1), _poly(1, 1, 1), 2, 3, width)
    if gc is GameClass.SIMULTANEOUS and cm is _P:
        # 1 + x (2x + 1) / (x^3 + x + 1) on x >= 1
        return _interior_maximum(_poly(1, 2, 2, 1), _poly(1, 0, 1, 1), 1, 2, width)
    if gc is GameClass.SYMMETRIC_SIMULTANEOUS and cm is _P:
        # inner piece at w2 = 1; its maximizer lies below sigma
        info = _interior_maximum(_poly(2, 6, 8, 6, 2), _poly(2, 3, 4, 4, 2), 1, 2, width)
        assert isinstance(info.ratio, RationalInterval)
        assert sigma_polynomial_sign(info.ratio.hi, 1) < 0
        return info
    if gc is GameClass.SEQUENTIAL and cm is _P:
        return SupremumInfo(F(3, 2), F(1), True)
    # symmetric uniform and sequential uniform: 2, approached for extreme ratios
    return SupremumInfo(F(2), None, False)
