import pytest
from hypothesis import given, settings

from dermarket import GeneratorFleet, validate_and_build
from dermarket.errors import PriceOutOfRange
from dermarket.full import (
    inverse_demand_full,
    optimal_bid_slope_full,
    solve_full_strategic,
    solve_full_truthful,
    strategic_supply_full,
    truthful_total_supply,
)
from dermarket.sampling import draw_scenario

from conftest import seed_st, two_prosumer


@pytest.mark.parametrize("count, y_j", [(1, 10.0), (2, 5.0)])
def test_truthful_example(count, y_j):
    eq = solve_full_truthful(two_prosumer(count))
    assert eq.price == 5.0
    assert eq.allocations == pytest.approx((15.0, -5.0), abs=1e-12)
    assert eq.per_generator_supply == pytest.approx(y_j)
    assert eq.total_supply == pytest.approx(10.0)


def test_truthful_single_prosumer():
    s = validate_and_build([(-0.5, 10.0, 0.0)], GeneratorFleet(1, 5.0))
    eq = solve_full_truthful(s)
    assert (eq.price, eq.total_supply) == pytest.approx((5.0, 5.0))
    assert eq.allocations == pytest.approx((5.0,))


@pytest.mark.parametrize("y, price", [(10.0, 5.0), (5.0, 5.5), (20.0 / 3.0, 16.0 / 3.0)])
def test_inverse_demand(example, y, price):
    assert inverse_demand_full(example, y) == pytest.approx(price, abs=1e-9)


def test_inverse_demand_range(example):
    with pytest.raises(PriceOutOfRange):
        inverse_demand_full(example, 70.0)
    assert inverse_demand_full(example, 70.0, check_range=False) == pytest.approx(-1.0)


@pytest.mark.parametrize("count, y_j", [(1, 5.0), (2, 10.0 / 3.0), (20, 10.0 / 21.0)])
def test_strategic_supply(count, y_j):
    assert strategic_supply_full(two_prosumer(count)) == pytest.approx(y_j, abs=1e-9)


@pytest.mark.parametrize("count, slope", [(1, 5.5), (2, 16.0 / 3.0)])
def test_bid_slope(count, slope):
    assert optimal_bid_slope_full(two_prosumer(count)) == pytest.approx(slope, abs=1e-9)


def test_bid_slope_limit():
    assert abs(optimal_bid_slope_full(two_prosumer(1000)) - 5.0) < 1e-2


def test_strategic_examples():
    eq = solve_full_strategic(two_prosumer(1))
    assert (eq.price, eq.per_generator_supply, eq.total_supply) == pytest.approx((5.5, 5.0, 5.0))
    assert eq.allocations == pytest.approx((12.5, -7.5))
    assert eq.bid_slope == pytest.approx(5.5)

    eq2 = solve_full_strategic(two_prosumer(2))
    assert eq2.price == pytest.approx(16.0 / 3.0, abs=1e-9)
    # z_i = (lambda - b) / (2a) - C at lambda = 16/3; sums to y = 20/3
    assert eq2.allocations == pytest.approx((40.0 / 3.0, -20.0 / 3.0), abs=1e-9)
    assert eq2.total_supply == pytest.approx(20.0 / 3.0, abs=1e-9)

    eq20 = solve_full_strategic(two_prosumer(20))
    assert eq20.price == pytest.approx(100.0 / 21.0 + 60.0 / 210.0, abs=1e-9)


def test_truthful_supply_matches_allocations(example):
    assert truthful_total_supply(example) == pytest.approx(sum(solve_full_truthful(example).allocations))


def test_strategic_price_decreases_with_fleet_size():
    prices = [solve_full_strategic(two_prosumer(n)).price for n in range(1, 21)]
    assert all(a > b for a, b in zip(prices, prices[1:]))
    assert all(p > 5.0 for p in prices)


@settings(max_examples=100, deadline=None)
@given(seed_st)
def test_strategic_properties(seed):
    s = draw_scenario(seed).scenario
    eq = solve_full_strategic(s)
    truthful = truthful_total_supply(s)
    assert eq.price > s.alpha
    # y^S = N y^T / (N + 1)
    assert eq.total_supply == pytest.approx(s.count * truthful / (s.count + 1), rel=1e-9)
    assert eq.price == pytest.approx(eq.bid_slope, rel=1e-12)
    # one more generator lowers the price
    assert solve_full_strategic(s.with_count(s.count + 1)).price < eq.price


@settings(max_examples=100, deadline=None)
@given(seed_st)
def test_strategic_first_order_condition(seed):
    s = draw_scenario(seed).scenario
    eq = solve_full_strategic(s)
    y_j, others = eq.per_generator_supply, eq.total_supply - eq.per_generator_supply

    def profit(q):
        return (inverse_demand_full(s, q + others, check_range=False) - s.alpha) * q

    h = 1e-5 * max(1.0, y_j)
    marginal = (profit(y_j + h) - profit(y_j - h)) / (2 * h)
    assert abs(marginal) < 1e-6 * max(1.0, eq.price)
