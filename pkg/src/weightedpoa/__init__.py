"""Exact price of anarchy for weighted two-player affine congestion games."""

from .catalog import CATALOG, build_instance, verify_entry
from .equilibria import instance_poa, nash_equilibria, social_optimum, spe_outcomes
from .exactmath import RationalInterval, compare_ratio_to_sigma, compare_ratio_to_tau, parse_rational
from .formulas import poa_closed_form, supremum_info
from .game import CostModel, GameInstance, Resource, from_network, player_cost, social_cost
from .simplex import LpModel, LpSolution, Relation, Status, solve_lp
from .worstcase import GameClass, WorstCaseSpec, dual_certificate, lp_poa, solve_worst_case

__all__ = [
    "CATALOG",
    "CostModel",
    "GameClass",
    "GameInstance",
    "LpModel",
    "LpSolution",
    "RationalInterval",
    "Relation",
    "Resource",
    "Status",
    "WorstCaseSpec",
    "build_instance",
    "compare_ratio_to_sigma",
    "compare_ratio_to_tau",
    "dual_certificate",
    "from_network",
    "instance_poa",
    "lp_poa",
    "nash_equilibria",
    "parse_rational",
    "player_cost",
    "poa_closed_form",
    "social_cost",
    "social_optimum",
    "solve_lp",
    "solve_worst_case",
    "spe_outcomes",
    "supremum_info",
    "verify_entry",
]
