from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightedpoa.equilibria import instance_poa
from weightedpoa.formulas import poa_closed_form
from weightedpoa.fileformat import dumps_game, loads_game
from weightedpoa.simplex import verify_optimal
from weightedpoa.worstcase import (
    CertificateError,
    DualCertificate,
    GameClass,
    UnsupportedClassError,
    WorstCaseSpec,
    all_label_subsets,
    build_lp,
    check_certificate,
    dual_certificate,
    format_table,
    labels_for,
    lp_poa,
    solve_worst_case,
    tabulate_solutions,
)

F = Fraction
SPARSE_KEEP = ["E1", "O2,E2", "O1,E1,E2X"]
SPARSE_ROWS = {
    (2, 14): ("7/18", "4/63", "1/18", "16/9"),
    (1, 7): ("7/9", "8/63", "1/9", "16/9"),
    (1, 13): ("13/15", "14/195", "1/15", "28/15"),
    (1, 100): ("50/51", "101/10200", "1/102", "101/51"),
}


def sparse_spec(w1, w2):
    return WorstCaseSpec.keeping_only("seq", "uni", w1, w2, SPARSE_KEEP, keep_alpha=False)


@pytest.mark.parametrize(
    "gc, cm, expected",
    [("sim", "uni", 2), ("sym-sim", "uni", F(8, 5)), ("sym-sim", "prop", F(8, 5)), ("seq", "prop", F(3, 2))],
)
def test_anchor_values_at_equal_weights(gc, cm, expected):
    assert lp_poa(gc, cm, 1, 1) == expected


def test_lp_structure_counts():
    sim = build_lp(WorstCaseSpec("sim", "uni", 1, 1))
    assert len(sim.variables) == 2 * 15
    names = [r.name for r in sim.constraints]
    assert sum(n.startswith("opt_lb") for n in names) == 4
    assert sorted(n for n in names if n.startswith("nash")) == ["nash1(O1)", "nash2(O2)"]

    seq = build_lp(WorstCaseSpec("seq", "uni", 1, 1))
    names = [r.name for r in seq.constraints]
    assert len(seq.variables) == 2 * 31
    assert sum(n.startswith("follower_eq") for n in names) == 2
    assert sum(n.startswith("follower_opt") for n in names) == 2
    assert names.count("leader") == 1

    sym = build_lp(WorstCaseSpec("sym-sim", "uni", 1, 1))
    names = [r.name for r in sym.constraints]
    assert sum(n.startswith("nash1") for n in names) == 3
    assert sum(n.startswith("nash2") for n in names) == 3


def test_symmetric_sequential_is_rejected():
    with pytest.raises(UnsupportedClassError):
        WorstCaseSpec("sym-seq", "uni", 1, 1)
    with pytest.raises(ValueError):
        WorstCaseSpec("sim", "uni", 0, 0)


@pytest.mark.parametrize("w", sorted(SPARSE_ROWS))
def test_forced_sequential_rows_reproduced(w):
    b_e1, b_o2e2, b_x, value = (F(v) for v in SPARSE_ROWS[w])
    res = solve_worst_case(sparse_spec(*w))
    assert res.poa == value
    assert res.primal == {"E1": (0, b_e1), "O2+E2": (0, b_o2e2), "O1+E1+E2X": (0, b_x)}
    assert res.nonzero_dual() == {
        "normalization": value,
        "follower_eq(E2X)": -1 if res.dual["follower_eq(E2X)"] < 0 else 1,
        "follower_opt(O2)": res.dual["follower_opt(O2)"],
        "leader": res.dual["leader"],
    }
    assert abs(res.dual["follower_eq(E2X)"]) == 1
    assert abs(res.dual["follower_opt(O2)"]) == value
    assert abs(res.dual["leader"]) == 1
    assert res.forcing_exact
    # forcing is harmless at these weights
    assert lp_poa("seq", "uni", *w) == value


def test_forced_dual_follows_general_pattern_for_heavy_follower():
    for w1, w2 in [(1, 3), (2, 5), (3, 11)]:
        res = solve_worst_case(sparse_spec(w1, w2))
        lam = F(2 * w1 + 2 * w2, 2 * w1 + w2)
        assert res.poa == lam
        assert {k: abs(v) for k, v in res.nonzero_dual().items()} == {
            "normalization": lam,
            "follower_eq(E2X)": 1,
            "follower_opt(O2)": lam,
            "leader": 1,
        }


def test_scaling_keeps_duals_and_scales_primal():
    base, scaled = solve_worst_case(sparse_spec(1, 7)), solve_worst_case(sparse_spec(2, 14))
    assert base.dual == scaled.dual
    for rid, (a, b) in base.primal.items():
        assert scaled.primal[rid] == (a / 2, b / 2)


@settings(max_examples=15, deadline=None)
@given(
    st.sampled_from(["sim", "sym-sim", "seq"]),
    st.sampled_from(["uni", "prop"]),
    st.integers(1, 9),
    st.integers(1, 9),
    st.sampled_from([F(1, 3), F(2), F(5)]),
)
def test_weight_scaling_leaves_optimum_unchanged(gc, cm, a, b, lam):
    assert lp_poa(gc, cm, a, b) == lp_poa(gc, cm, lam * a, lam * b)


def test_uniform_beta_only_primal_scales_inversely():
    spec = WorstCaseSpec.keeping_only("seq", "uni", 1, 3, SPARSE_KEEP, keep_alpha=False)
    res, res5 = solve_worst_case(spec), solve_worst_case(spec.scaled(5))
    for rid, (a, b) in res.primal.items():
        assert res5.primal[rid] == (a, b / 5)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["sim", "sym-sim"]), st.sampled_from(["uni", "prop"]), st.integers(1, 9), st.integers(1, 9))
def test_simultaneous_classes_symmetric_in_players(gc, cm, a, b):
    assert lp_poa(gc, cm, a, b) == lp_poa(gc, cm, b, a)


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_forcing_never_increases_optimum(a, b):
    full = lp_poa("seq", "uni", a, b)
    forced = solve_worst_case(sparse_spec(a, b)).poa
    partially = solve_worst_case(WorstCaseSpec("seq", "uni", a, b, forced_zero=["O1,O2"])).poa
    assert forced <= partially <= full


@pytest.mark.parametrize("gc", ["sim", "sym-sim", "seq"])
@pytest.mark.parametrize("cm", ["uni", "prop"])
def test_witness_poa_equals_lp_value_and_survives_round_trip(gc, cm):
    res = solve_worst_case(WorstCaseSpec(gc, cm, 3, 2))
    mode = "sequential:1" if gc == "seq" else "simultaneous"
    again = loads_game(dumps_game(res.witness))
    assert instance_poa(again, mode).poa == res.poa
    verify_optimal(res.model, res.solution)


def test_zero_weight_player_matches_closed_form():
    # a weightless player still pays latency under uniform costs
    assert lp_poa("sim", "uni", 1, 0) == poa_closed_form("sim", "uni", 1, 0) == 2


def test_dual_certificate_reproduces_bound():
    res = solve_worst_case(sparse_spec(1, 7))
    cert = dual_certificate(res)
    assert cert.bound == F(16, 9)
    text = cert.to_text()
    assert text.splitlines()[0] == "# constraint\tmultiplier"
    assert "normalization\t16/9" in text and text.rstrip().endswith("# bound\t16/9")


def test_certificate_checker_rejects_tampering():
    res = solve_worst_case(WorstCaseSpec("sim", "uni", 1, 1))
    cert = dual_certificate(res)
    mults = dict(cert.multipliers)
    mults["normalization"] = mults["normalization"] - F(1, 10)
    bad = DualCertificate(tuple(mults.items()), cert.combined, cert.bound)
    with pytest.raises(CertificateError):
        check_certificate(res.model, bad)
    with pytest.raises(CertificateError):
        check_certificate(res.model, cert, expected_bound=F(3))


def test_tabulate_and_format():
    assert tabulate_solutions([]) == [] and format_table([]) == ""
    rows = tabulate_solutions([sparse_spec(1, 7), sparse_spec(1, 13)])
    text = format_table(rows)
    header = text.splitlines()[0].split("\t")
    assert header[:3] == ["w1", "w2", "poa"]
    assert "beta[E1]" in header and "dual:normalization" in header
    assert text.splitlines()[2].split("\t")[2] == "28/15"


def test_label_alphabets():
    assert labels_for(GameClass.SEQUENTIAL)[-1] == "E2X"
    assert len(all_label_subsets(labels_for(GameClass.SIMULTANEOUS))) == 15
