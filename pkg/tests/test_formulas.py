from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightedpoa.exactmath import RationalInterval
from weightedpoa.formulas import (
    FORMULAS,
    poa_closed_form,
    regime,
    seq_uni_a,
    seq_uni_b,
    seq_uni_c,
    supremum_info,
    sym_prop_a,
    sym_prop_b,
    sym_prop_b_alternative,
    sym_uni_a,
    sym_uni_b,
    sym_uni_b_candidates,
    sym_uni_c,
)
from weightedpoa.worstcase import UnsupportedClassError, lp_poa

F = Fraction
RHO = F("2.023090525693850")
SIGMA = F("2.147899035704790")
TAU = F("3.152757602010390")
CLASSES = [("sim", "uni"), ("sim", "prop"), ("sym-sim", "uni"), ("sym-sim", "prop"), ("seq", "uni"), ("seq", "prop")]
weights = st.fractions(min_value=F(1, 20), max_value=20, max_denominator=20)


def test_examples(frozen):
    cf = frozen["closed_forms"]
    assert poa_closed_form("sim", "uni", 1, 1) == 2
    assert poa_closed_form("sim", "uni", 2, 1) == F(cf["sim_uni_2_1"])
    assert poa_closed_form("seq", "uni", 1, 7) == F(16, 9)
    assert poa_closed_form("sym-sim", "prop", 1, 1) == F(cf["sym_prop_1_1"])
    assert poa_closed_form("seq", "prop", 2, 1) == F(cf["seq_prop_2_1"])


def test_symmetric_sequential_unsupported():
    with pytest.raises(UnsupportedClassError):
        poa_closed_form("sym-seq", "uni", 1, 1)
    with pytest.raises(UnsupportedClassError):
        supremum_info("sym-seq", "prop")


def test_rejects_bad_weights():
    with pytest.raises(ValueError):
        poa_closed_form("sim", "uni", 0, 0)
    with pytest.raises(ValueError):
        poa_closed_form("sim", "uni", -1, 2)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(CLASSES), weights, weights, st.sampled_from([F(1, 7), F(3), F(11, 2)]))
def test_scale_invariance(cls, w1, w2, lam):
    assert poa_closed_form(*cls, w1, w2) == poa_closed_form(*cls, lam * w1, lam * w2)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([("sim", "uni"), ("sim", "prop"), ("sym-sim", "uni"), ("sym-sim", "prop"), ("seq", "prop")]),
       weights, weights)
def test_player_symmetry(cls, w1, w2):
    assert poa_closed_form(*cls, w1, w2) == poa_closed_form(*cls, w2, w1)


@pytest.mark.parametrize("lam", [F(2), F(3), F(7), F(9, 2)])
def test_sequential_uniform_shifted_symmetry(lam):
    assert poa_closed_form("seq", "uni", lam / 2, 1) == poa_closed_form("seq", "uni", 1, lam)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(CLASSES), weights, weights)
def test_values_between_one_and_supremum(cls, w1, w2):
    v = poa_closed_form(*cls, w1, w2)
    sup = supremum_info(*cls)
    bound = sup.value.hi if isinstance(sup.value, RationalInterval) else sup.value
    assert 1 <= v <= bound


def test_sequential_pieces_agree_at_rational_boundaries():
    assert seq_uni_a(F(1), F(1)) == seq_uni_b(F(1), F(1)) == F(3, 2)
    assert seq_uni_b(F(1), F(2)) == seq_uni_c(F(1), F(2)) == F(3, 2)


def test_symmetric_pieces_continuous_at_irrational_boundaries():
    eps = F(1, 10**9)
    for left, right, x in [(sym_uni_a, sym_uni_b, RHO), (sym_uni_b, sym_uni_c, TAU), (sym_prop_a, sym_prop_b, SIGMA)]:
        assert abs(left(x, F(1)) - right(x, F(1))) < 1e-12
        assert abs(left(x + eps, F(1)) - right(x - eps, F(1))) < 1e-8


def test_regime_tags_follow_thresholds():
    assert regime("sym-sim", "uni", 2, 1) == "sym-uni:a"
    assert regime("sym-sim", "uni", F(203, 100), 1) == "sym-uni:b"
    assert regime("sym-sim", "uni", 1, F(16, 5)) == "sym-uni:c"
    assert regime("sym-sim", "prop", F(43, 20), 1) == "sym-prop:b"
    assert regime("seq", "uni", 1, 3) == "seq-uni:c"
    assert {p.tag for f in FORMULAS.values() for p in f.pieces} >= {"sim-uni", "seq-prop"}


def test_zero_weight_uses_outer_piece():
    assert regime("sym-sim", "uni", 1, 0) == "sym-uni:c"
    assert poa_closed_form("sym-sim", "uni", 1, 0) == 2
    assert poa_closed_form("seq", "uni", 0, 1) == 2


def test_middle_symmetric_uniform_candidates():
    lp = lp_poa("sym-sim", "uni", 3, 1)
    cands = sym_uni_b_candidates(3, 1)
    assert cands["equilibrium_bound"] == lp == sym_uni_b(F(3), F(1))
    assert cands["max_sum"] != lp and cands["equilibrium_total"] != lp


def test_outer_symmetric_proportional_alternative_disagrees():
    assert sym_prop_b(F(3), F(1)) == lp_poa("sym-sim", "prop", 3, 1)
    assert sym_prop_b_alternative(3, 1) != sym_prop_b(F(3), F(1))


def test_inner_piece_extends_past_two():
    # between 2 and rho the inner expression is still exact and exceeds the middle one
    w = (F(201, 100), F(1))
    assert sym_uni_a(*w) > sym_uni_b(*w)
    assert lp_poa("sym-sim", "uni", *w) == sym_uni_a(*w) == poa_closed_form("sym-sim", "uni", *w)


@pytest.mark.parametrize(
    "cls, key", [(("sim", "uni"), "sim_uni"), (("sim", "prop"), "sim_prop"), (("sym-sim", "prop"), "sym_prop")]
)
def test_suprema_enclose_oracle(cls, key, frozen):
    info = supremum_info(*cls)
    expected = frozen["suprema"][key]
    assert info.attained
    assert info.value.width <= F(1, 10**6)
    assert abs(info.approx() - float(expected["value"])) < 1e-6
    assert info.ratio.lo - F(1, 10**6) <= F(expected["ratio"]) <= info.ratio.hi + F(1, 10**6)


def test_rational_suprema():
    seq_prop = supremum_info("seq", "prop")
    assert (seq_prop.value, seq_prop.ratio, seq_prop.attained) == (F(3, 2), F(1), True)
    for cls in [("sym-sim", "uni"), ("seq", "uni")]:
        info = supremum_info(*cls)
        assert (info.value, info.ratio, info.attained) == (F(2), None, False)


def test_enclosure_width_is_adjustable():
    assert supremum_info("sim", "uni", width=F(1, 10**12)).value.width <= F(1, 10**12)


def test_outer_symmetric_uniform_piece_starts_before_three_point_four():
    # rules out a boundary near 3.41: the LP already follows the outer piece at 33/10
    w = (F(33, 10), F(1))
    assert regime("sym-sim", "uni", *w) == "sym-uni:c"
    assert lp_poa("sym-sim", "uni", *w) == sym_uni_c(*w) != sym_uni_b(*w)
