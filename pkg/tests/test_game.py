from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from evograph.dynamics import from_state
from evograph.game import (
    Game,
    GameError,
    PayoffParams,
    Scenario,
    UtilityKind,
    classify,
    denormalize,
    interior_threshold,
    normalize,
    parse_rational,
    utility,
    utility_gap_complete,
)
from evograph.graph import Graph, decode_graph6, make_complete, make_wheel

from _support import CAYLEY_G6, EXAMPLE_PARAMS, admissible_params, connected_graphs


@pytest.mark.parametrize("params, scenario", [
    ((1, "0.88", "1.74", 0), Scenario.HD),
    ((1, "0.5", "0.8", 0), Scenario.FC),
    ((1, "-0.5", "1.5", 0), Scenario.PD),
    ((1, "-0.5", "0.5", 0), Scenario.SH),
])
def test_scenarios(params, scenario):
    assert classify(PayoffParams(*map(F, params))).scenario is scenario


@pytest.mark.parametrize("params, tag", [
    ((1, "0.5", "0.5", 0), "A1"),
    ((0, "-1", "2", 1), "A2"),
    ((1, "0.7", "0.5", 0), "A3"),
    ((1, "2", "3", 0), "A4"),
    (("-1", "-3", "-0.5", "-2"), "A5"),
])
def test_inadmissible_reasons(params, tag):
    cls = classify(PayoffParams(*map(F, params)))
    assert not cls.admissible and cls.reason.startswith(tag)


def test_parse_rational_is_exact():
    assert parse_rational("0.88") == F(22, 25)
    assert parse_rational("-3") == -3
    assert parse_rational("22/25") == F(22, 25)
    assert parse_rational(".5") == F(1, 2)
    for bad in ("1e-3", "0.1/3", "abc", "", "1/0"):
        with pytest.raises(GameError):
            parse_rational(bad)


def test_params_parse_and_print():
    p = PayoffParams.parse("1,0.88,1.74,0")
    assert p == EXAMPLE_PARAMS
    assert str(p) == "1,0.88,1.74,0"
    assert str(PayoffParams(1, F(1, 3), F(-5, 4), 0)) == "1,1/3,-1.25,0"
    assert PayoffParams(1, 0.1, 2, 0).b == F(1, 10)
    with pytest.raises(GameError):
        PayoffParams.parse("1,2,3")


def test_normalize_examples():
    assert normalize(PayoffParams(3, 1, 2, -1)) == PayoffParams(1, F(1, 2), F(3, 4), 0)
    assert normalize(EXAMPLE_PARAMS) == EXAMPLE_PARAMS
    with pytest.raises(GameError):
        normalize(PayoffParams(1, 2, 3, 1))


@given(admissible_params(normalized=False))
def test_normalization_round_trip_and_scenario(p):
    q = normalize(p)
    assert (q.a, q.d) == (1, 0)
    assert denormalize(q, p.a, p.d) == p
    assert classify(q).scenario is classify(p).scenario


def test_utility_examples():
    k3 = make_complete(3)
    assert utility(k3, EXAMPLE_PARAMS, "aggregate", (1, 0, 0)) == [F("1.76"), F("1.74"), F("1.74")]
    g = decode_graph6(CAYLEY_G6)
    v = 1
    x = tuple(1 if i in g.neighbors(v) else 0 for i in g.vertices)
    assert utility(g, EXAMPLE_PARAMS, "aggregate", x)[v - 1] == F("5.22")


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), admissible_params(), st.sampled_from(list(UtilityKind)))
def test_all_cooperate_utility(g, p, kind):
    u = utility(g, p, kind, (1,) * g.n)
    expected = [p.a * g.degree(i) for i in g.vertices] if kind is UtilityKind.AGGREGATE else [p.a] * g.n
    assert u == expected


def test_isolated_vertex_rejected_for_mean():
    g = Graph.from_edges(3, [(1, 2)])
    with pytest.raises(GameError):
        utility(g, EXAMPLE_PARAMS, "mean", (0, 1, 0))
    with pytest.raises(GameError):
        Game(g, EXAMPLE_PARAMS)
    with pytest.raises(GameError):
        utility(make_complete(3), EXAMPLE_PARAMS, "aggregate", (0, 1))


def test_interior_threshold():
    assert interior_threshold(PayoffParams(1, F("0.8"), F("1.5"), 0), 5) == F(30, 13)
    p = PayoffParams(1, F("0.3"), F("0.6"), 0)  # n = 1 + (c-d)/(b-d) = 3
    assert interior_threshold(p, 3) == 1
    assert interior_threshold(PayoffParams(1, 0, 1, 0), 4) is None


@settings(max_examples=60, deadline=None)
@given(admissible_params(), st.integers(3, 9), st.data())
def test_threshold_is_where_the_gap_vanishes(p, n, data):
    m = data.draw(st.integers(1, n - 1))
    x = (1,) * m + (0,) * (n - m)
    u = utility(make_complete(n), p, "aggregate", x)
    assert utility_gap_complete(p, n, m) == u[0] - u[-1]
    mstar = interior_threshold(p, n)
    if mstar is not None and mstar == m:
        assert u[0] == u[-1]


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), admissible_params(), st.sampled_from(list(UtilityKind)), st.data())
def test_scaled_utilities_preserve_order(g, p, kind, data):
    s = data.draw(st.integers(0, (1 << g.n) - 1))
    exact = utility(g, p, kind, from_state(s, g.n))
    scaled = Game(g, p, kind).scaled_utilities(s)
    ratios = {F(si) / ei for si, ei in zip(scaled, exact) if ei != 0}
    assert len(ratios) <= 1 and all(r > 0 for r in ratios)
    assert all((si == 0) == (ei == 0) for si, ei in zip(scaled, exact))


@settings(max_examples=40, deadline=None)
@given(admissible_params(), st.integers(1, 5), st.integers(-3, 3), st.data())
def test_affine_change_scales_utility_gaps(p, scale, shift, data):
    g = make_wheel(6)
    q = PayoffParams(*(scale * v + shift for v in p.as_tuple()))
    x = tuple(data.draw(st.lists(st.integers(0, 1), min_size=6, max_size=6)))
    for kind in UtilityKind:
        u, w = utility(g, p, kind, x), utility(g, q, kind, x)
        for i in range(6):
            for j in range(6):
                if kind is UtilityKind.MEAN:
                    assert w[i] - w[j] == scale * (u[i] - u[j])
                elif g.degree(i + 1) == g.degree(j + 1):
                    assert w[i] - w[j] == scale * (u[i] - u[j])
