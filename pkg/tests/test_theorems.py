from fractions import Fraction as F

import pytest

from evograph.game import PayoffParams, classify, interior_threshold
from evograph.graph import decode_graph6
from evograph.theorems import (
    THEOREMS,
    Sweep,
    TheoremError,
    coexistence_seq_Kn,
    fullC_Kn,
    fullC_kreg_sufficient,
    fullC_wheel,
    fullD_Kn,
    fullD_kreg_sufficient,
    fullD_wheel,
    grid_axis,
    normalized_grid,
    parse_range,
    predict,
    region_code_exact,
    region_code_predicted,
    resolve_theorem,
    verify_theorem,
)

from _support import CAYLEY_G6, EXAMPLE_PARAMS


def test_predicate_examples():
    # 1 + (c-d)/(b-d) = 131/44 < 3
    assert not fullD_Kn(EXAMPLE_PARAMS, 3)
    assert fullD_Kn(PayoffParams(1, F("0.3"), F("1.74"), 0), 3)
    assert not fullC_wheel(EXAMPLE_PARAMS, 8, "aggregate")
    assert fullD_kreg_sufficient(PayoffParams(1, F("-0.5"), F("1.5"), 0), 3)
    assert not fullD_kreg_sufficient(EXAMPLE_PARAMS, 3)
    assert fullC_kreg_sufficient(PayoffParams(1, F("0.5"), F("0.8"), 0), 3)
    assert predict("fullD_Kn", EXAMPLE_PARAMS, 3) == fullD_Kn(EXAMPLE_PARAMS, 3)
    assert predict("fullD_wheel", EXAMPLE_PARAMS, 6, "mean") == fullD_wheel(EXAMPLE_PARAMS, 6, "mean")


def test_threshold_cases():
    p = PayoffParams(1, F("0.8"), F("1.5"), 0)
    assert interior_threshold(p, 5) == F(30, 13)
    assert coexistence_seq_Kn(p, 5)
    assert not coexistence_seq_Kn(PayoffParams(1, F("0.4"), F("1.2"), 0), 5)  # m* = 5/3


def test_predicates_reject_bad_input():
    with pytest.raises(TheoremError):
        fullD_Kn(PayoffParams(1, F("0.5"), F("0.5"), 0), 4)
    with pytest.raises(TheoremError):
        fullC_Kn(EXAMPLE_PARAMS, 2)
    with pytest.raises(TheoremError):
        fullD_wheel(EXAMPLE_PARAMS, 3)
    with pytest.raises(TheoremError):
        resolve_theorem("9.9")


def test_full_cooperation_needs_a_greater_than_c():
    for p in normalized_grid(12, 12):
        if p.c > p.a:
            assert not fullC_Kn(p, 6)
            assert not fullC_wheel(p, 6, "aggregate") and not fullC_wheel(p, 6, "mean")


def test_grid_helpers():
    assert parse_range("3..8") == [3, 4, 5, 6, 7, 8]
    assert parse_range("5") == [5]
    assert grid_axis(F(0), F(1), 2) == [F(1, 4), F(3, 4)]
    pts = normalized_grid(20, 20)
    assert len(pts) >= 200 and all(classify(p).admissible for p in pts)
    assert len({classify(p).scenario for p in pts}) == 4


@pytest.mark.parametrize("name", ["4.1", "4.2", "4.3", "6.1", "8.1", "8.2"])
def test_verifiers_pass_on_a_small_grid(name):
    sizes = parse_range("4..10") if name.startswith("8") else parse_range("3..6")
    rep = verify_theorem(name, Sweep(normalized_grid(8, 8), sizes))
    assert rep.passed, [f.line() for f in rep.disagreements[:3]]
    assert sum(rep.checks.values()) > 0


def test_cayley_converse_violation():
    sweep = Sweep([EXAMPLE_PARAMS], graphs=[decode_graph6(CAYLEY_G6)])
    rep = verify_theorem("regular-sufficient", sweep)
    assert rep.passed and len(rep.converse) == 1
    assert rep.converse[0].check == "all-D attractor"


def test_every_theorem_has_a_numeric_alias():
    assert sorted(num for num, _ in THEOREMS.values()) == ["4.1", "4.2", "4.3", "6.1", "7.1", "7.2", "8.1", "8.2"]
    for key, (num, _) in THEOREMS.items():
        assert resolve_theorem(num) == key == resolve_theorem(key)


@pytest.mark.parametrize("sequential", [False, True])
@pytest.mark.parametrize("n", [4, 5])
def test_region_codes_match_brute_force(n, sequential):
    for p in normalized_grid(10, 10):
        assert region_code_predicted(p, n, sequential) == region_code_exact(p, n, sequential), p


def test_region_codes():
    assert region_code_predicted(PayoffParams(1, F("0.5"), F("0.5"), 0), 5, False) == -1
    assert region_code_predicted(PayoffParams(1, F("0.8"), F("1.5"), 0), 5, True) == 5
    assert region_code_predicted(PayoffParams(1, F("0.6"), F("1.4"), 0), 5, True) == 4
    assert region_code_predicted(PayoffParams(1, F("-0.5"), F("1.5"), 0), 5, True) == 1
