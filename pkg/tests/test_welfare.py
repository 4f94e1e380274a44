import pytest
from hypothesis import assume, given, settings

from dermarket import GeneratorFleet, Model, solve, solve_all, validate_and_build
from dermarket.errors import AmbiguousActiveSet, ModelMismatch
from dermarket.sampling import draw_scenario
from dermarket.welfare import (
    autarky_welfare,
    closed_form_gaps,
    gap_identities,
    price_rises,
    price_rises_closed_form,
    welfare_by_definition,
    welfare_direct,
    welfare_reformulated,
)

from conftest import seed_st, two_prosumer


@pytest.mark.parametrize(
    "model, expected",
    [
        (Model.FULL_TRUTHFUL, 325.0),
        (Model.FULL_STRATEGIC, 323.75),
        (Model.RESTRICTED_TRUTHFUL, 322.5),
        (Model.RESTRICTED_STRATEGIC, 316.875),
    ],
)
def test_example_welfare(example, model, expected):
    eq = solve(example, model)
    assert eq.welfare == pytest.approx(expected, abs=1e-9)
    assert welfare_direct(example, eq) == pytest.approx(expected, abs=1e-9)
    assert welfare_by_definition(example, eq) == pytest.approx(expected, abs=1e-9)


def test_autarky():
    assert autarky_welfare(two_prosumer()) == pytest.approx(300.0)
    assert autarky_welfare(validate_and_build([(-0.5, 10.0, 0.0)], GeneratorFleet(1, 5.0))) == 0.0
    twins = validate_and_build([(-0.1, 10.0, 10.0)] * 2, GeneratorFleet(1, 5.0))
    assert autarky_welfare(twins) == pytest.approx(180.0)


@pytest.mark.parametrize("count, delta, delta_n", [(1, 0.5, 1.5), (2, 1.0 / 3.0, 1.0)])
def test_price_rises(count, delta, delta_n):
    s = two_prosumer(count)
    out = solve_all(s)
    assert price_rises(s, *out) == pytest.approx((delta, delta_n), abs=1e-9)
    assert price_rises_closed_form(s, out.full_truthful, out.restricted_strategic) == pytest.approx(
        (delta, delta_n), abs=1e-9
    )


def test_price_rises_vanish_like_one_over_n_example():
    d1 = price_rises(two_prosumer(1), *solve_all(two_prosumer(1)))
    big = two_prosumer(1000)
    d_big = price_rises(big, *solve_all(big))
    assert all(x <= y * 2 / 1000 for x, y in zip(d_big, d1))


@settings(max_examples=50, deadline=None)
@given(seed_st)
def test_full_price_rise_scales_with_fleet_size(seed):
    s = draw_scenario(seed).scenario
    d = price_rises(s, *solve_all(s))[0]
    try:
        big = solve_all(s.with_count(1000))
    except AmbiguousActiveSet:
        assume(False)
    d_big, dn_big = price_rises(s.with_count(1000), *big)
    assert d_big == pytest.approx(d * (s.count + 1) / 1001, rel=1e-9)
    # each truthful purchase is at most (b - alpha) / (2|a|)
    assert 0 < dn_big <= max(p.b - s.alpha for p in s.prosumers) / 1001


def test_reformulated_examples(example):
    out = solve_all(example)
    w0 = autarky_welfare(example)
    assert welfare_reformulated(example, out.full_truthful, w0) == pytest.approx(325.0)
    assert welfare_reformulated(example, out.full_strategic, w0, 0.5) == pytest.approx(323.75)
    assert welfare_reformulated(example, out.restricted_strategic, w0, 1.5) == pytest.approx(316.875)


def test_gap_example(example):
    report = gap_identities(example, *solve_all(example))
    assert report.gap_T_TN == pytest.approx(2.5, abs=1e-9)
    assert report.gap_T_S == pytest.approx(1.25, abs=1e-9)
    assert report.gap_TN_SN == pytest.approx(5.625, abs=1e-9)
    assert report.gap_S_SN == pytest.approx(6.875, abs=1e-9)
    assert report.inequalities_hold.all_hold
    closed = closed_form_gaps(example, *(solve_all(example)[i] for i in (0, 1, 3)))
    assert closed == pytest.approx({"T_TN": 2.5, "S_SN": 6.875, "T_S": 1.25, "TN_SN": 5.625}, abs=1e-9)


def test_gap_example_two_generators(example2):
    report = gap_identities(example2, *solve_all(example2))
    assert report.gap_T_S == pytest.approx(5.0 / 9.0, abs=1e-9)
    assert report.gap_TN_SN == pytest.approx(2.5, abs=1e-9)


def test_no_seller_means_no_participation_gap():
    s = validate_and_build([(-0.1, 10.0, 10.0), (-0.2, 12.0, 5.0)], GeneratorFleet(2, 5.0))
    report = gap_identities(s, *solve_all(s))
    assert report.gap_T_TN == pytest.approx(0.0, abs=1e-9)


def test_mismatched_outcome_order(example):
    ft, fs, rt, rs = solve_all(example)
    with pytest.raises(ModelMismatch):
        gap_identities(example, fs, ft, rt, rs)


@settings(max_examples=200, deadline=None)
@given(seed_st)
def test_representations_and_gaps_agree(seed):
    drawn = draw_scenario(seed)
    report = gap_identities(drawn.scenario, *drawn.outcomes)
    assert report.representation_mismatch <= 1e-8
    assert report.gap_mismatch <= 1e-6
    assert report.inequalities_hold.all_hold
