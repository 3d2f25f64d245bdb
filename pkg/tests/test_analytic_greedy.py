import math

import pytest

from satroute import analytic_greedy as greedy
from satroute import link_dynamics as ld
from satroute.verify import dp_throughput, expected_min_tau_direct


def test_throughput_hand_value():
    t = greedy.gr_throughput(0.9, 1, 1, 0.5)
    assert t == pytest.approx(0.9**2 * (2 - 0.9), abs=1e-12)
    assert t == pytest.approx(0.891, abs=1e-12)


def test_throughput_certain_links():
    for x, y in ((1, 1), (3, 7), (8, 2)):
        for u in (0.25, 0.5, 0.75):
            assert greedy.gr_throughput(1.0, x, y, u) == pytest.approx(1.0, abs=1e-12)


def test_throughput_matches_dp_on_subgrid():
    for p in (0.3, 0.9):
        for u in (0.2, 0.8):
            for x in range(1, 6):
                for y in range(1, 6):
                    assert greedy.gr_throughput(p, x, y, u) == pytest.approx(
                        dp_throughput(p, x, y, u), abs=1e-12
                    )


def test_throughput_boundary_ties_regular():
    # u = 0 and u = 1 are fine in the sum form; the DP is the referee
    for u in (0.0, 1.0):
        for x, y in ((1, 1), (2, 5), (4, 3)):
            assert greedy.gr_throughput(0.7, x, y, u) == pytest.approx(
                dp_throughput(0.7, x, y, u), abs=1e-12
            )


def test_throughput_symmetric_with_recommended_tie_break():
    for x, y in ((3, 7), (1, 9), (5, 5), (2, 11)):
        txy = greedy.gr_throughput(0.9, x, y, greedy.recommended_u(x, y).u)
        tyx = greedy.gr_throughput(0.9, y, x, greedy.recommended_u(y, x).u)
        assert txy == pytest.approx(tyx, abs=1e-12)


def test_throughput_symmetric_square_sources():
    assert greedy.gr_throughput(0.6, 4, 4, 0.5) == pytest.approx(
        greedy.gr_throughput(0.6, 4, 4, 0.5), abs=1e-15
    )
    assert greedy.gr_throughput(0.6, 3, 7, 0.5) == pytest.approx(
        greedy.gr_throughput(0.6, 7, 3, 0.5), abs=1e-12
    )


def test_boundary_throughput():
    assert greedy.gr_throughput_boundary(0.9, 0) == 1.0
    assert greedy.gr_throughput_boundary(0.9, 3) == pytest.approx(0.729, abs=1e-12)
    # matches the DP boundary rows exactly: forced single-link hops
    for n in range(1, 9):
        assert greedy.gr_throughput_boundary(0.5, n) == pytest.approx(0.5**n, abs=1e-15)


def test_recommended_u_values():
    assert greedy.recommended_u(5, 5).u == 0.5
    assert greedy.recommended_u(1, 9).u == pytest.approx(0.9, abs=1e-15)
    assert greedy.recommended_u(3, 7).u == pytest.approx(0.7, abs=1e-15)


def test_w_from_u_midpoint_is_exact_half():
    for p, mu in ((0.3, 0.0), (0.9, 0.5), (0.6, 0.95)):
        assert greedy.w_from_u(ld.from_p_mu(p, mu), 0.5).w == pytest.approx(0.5, abs=1e-12)


def test_w_from_u_memoryless_closed_form():
    p = 0.7
    params = ld.from_p_mu(p, 0.0)  # epsilon2 == p
    expected = p * p + p * (1 - p) + (1 - p) ** 2 * (p / (2 - p) + (1 - p) / (2 - p))
    assert greedy.w_from_u(params, 1.0).w == pytest.approx(expected, abs=1e-12)


def test_w_from_u_affine_and_endpoints():
    params = ld.from_p_mu(0.8, 0.6)
    lo, hi = greedy.attainable_w_interval(params)
    assert lo == greedy.w_from_u(params, 0.0).w
    assert hi == greedy.w_from_u(params, 1.0).w
    assert lo == pytest.approx(1.0 - hi, abs=1e-12)  # u -> 1-u swaps the axes
    mid = greedy.w_from_u(params, 0.25).w
    assert mid == pytest.approx(lo + 0.25 * (hi - lo), abs=1e-12)


def test_u_for_target_w_round_trip_and_absent():
    params = ld.from_p_mu(0.5, 0.0)
    for u in (0.0, 0.3, 0.5, 0.9, 1.0):
        w = greedy.w_from_u(params, u).w
        back = greedy.u_for_target_w(params, w)
        assert back is not None and back.u == pytest.approx(u, abs=1e-9)
    assert greedy.u_for_target_w(params, 0.99) is None
    assert greedy.u_for_target_w(params, 0.5) .u == pytest.approx(0.5, abs=1e-12)


def test_shape_condition_matches_interval_endpoint():
    params = ld.from_p_mu(0.7, 0.4)
    lo, hi = greedy.attainable_w_interval(params)
    # the threshold in the shape condition is exactly the u = 0 endpoint
    p, e2 = params.p, params.epsilon2
    threshold = (1 - p) * (p + (1 - p) * (1 - e2) / (2 - e2))
    assert lo == pytest.approx(threshold, abs=1e-12)
    # pick (x, y) with min/(x+y) just above / below the threshold
    assert greedy.shape_condition_holds(params, 5, 5)
    assert not greedy.shape_condition_holds(params, 1, 30)
    target = 30 / 31
    assert (greedy.u_for_target_w(params, target) is None) == (
        not greedy.shape_condition_holds(params, 1, 30)
    )


def test_min_tau_pmf_sums_to_one():
    for x, y, w in ((1, 1, 0.5), (3, 5, 0.37), (6, 2, 0.81), (4, 4, 0.5)):
        assert sum(greedy.min_tau_pmf(x, y, w).values()) == pytest.approx(1.0, abs=1e-12)


def test_expected_min_tau_trivial_cases():
    assert greedy.expected_min_tau(1, 1, 0.5) == 1.0
    assert greedy.expected_min_tau(1, 2, 0.5) == pytest.approx(1.5, abs=1e-12)


def test_expected_min_tau_matches_direct_sum():
    for x in range(1, 9):
        for y in range(x, 9):
            for w in (0.1, 0.3, 0.5, 0.7, 0.9):
                closed = greedy.expected_min_tau(x, y, w)
                direct = expected_min_tau_direct(x, y, w)
                assert closed == pytest.approx(direct, abs=1e-9)
                # symmetry swap covers x > y
                assert greedy.expected_min_tau(y, x, 1 - w) == pytest.approx(direct, abs=1e-9)


def test_expected_min_tau_stirling_floor_at_diagonal_bias():
    for x in range(1, 13):
        for y in range(x, 13):
            w = y / (x + y)
            floor = (x + y) - math.sqrt((x + y) / (2 * math.pi * w * (1 - w)))
            assert greedy.expected_min_tau(x, y, w) >= floor - 1e-12


def test_delay_exact_component_limits():
    near_one = ld.from_p_mu(1 - 1e-9, 0.5)
    assert greedy.gr_delay_exact_component(near_one, 4, 3) == pytest.approx(7.0, abs=1e-6)
    params = ld.from_p_mu(0.8, 0.3)
    all_boundary = (6) * (1 + (1 - 0.8) / params.epsilon2)
    assert greedy.gr_delay_exact_component(params, 0, 6) == pytest.approx(all_boundary, rel=1e-12)
    assert greedy.gr_delay_exact_component(params, 6, 0) == pytest.approx(all_boundary, rel=1e-12)


def test_delay_upper_bound_dominates_exact():
    # the Stirling step certifies the bound only where the diagonal bias is
    # attainable; clamped results are flagged and carry no guarantee
    for p in (0.3, 0.6, 0.9):
        for mu in (0.0, 0.5, 0.9):
            params = ld.from_p_mu(p, mu)
            for x in range(1, 13):
                for y in range(x, 13):
                    bound = greedy.gr_delay_upper_bound(params, x, y)
                    assert bound.clamped == (not greedy.shape_condition_holds(params, x, y))
                    if not bound.clamped:
                        exact = greedy.gr_delay_exact_component(params, x, y, bound.w)
                        assert bound.value >= exact - 1e-12


def test_delay_bound_limit_and_relative_gap_shrinks():
    near_one = ld.from_p_mu(1 - 1e-9, 0.5)
    assert greedy.gr_delay_upper_bound(near_one, 4, 4).value == pytest.approx(8.0, abs=1e-3)
    params = ld.from_p_mu(0.9, 0.9)
    gaps = []
    for n in (5, 20, 80):
        bound = greedy.gr_delay_upper_bound(params, n, n)
        exact = greedy.gr_delay_exact_component(params, n, n, 0.5)
        gaps.append((bound.value - exact) / exact)
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_delay_bound_clamps_when_diagonal_bias_unreachable():
    params = ld.from_p_mu(0.3, 0.0)
    assert not greedy.shape_condition_holds(params, 1, 30)
    bound = greedy.gr_delay_upper_bound(params, 1, 30)
    assert bound.clamped
    lo, hi = greedy.attainable_w_interval(params)
    assert bound.w == pytest.approx(hi, abs=1e-12)


def test_dispatchers():
    params = ld.from_p_mu(0.8, 0.0)
    assert greedy.gr_throughput_at(0.8, 0, 4) == pytest.approx(0.8**4, abs=1e-12)
    assert greedy.gr_throughput_at(0.8, 2, 3) == pytest.approx(
        greedy.gr_throughput(0.8, 2, 3, 0.6), abs=1e-12
    )
    assert greedy.gr_delay_at(params, 0, 2) == pytest.approx(
        greedy.gr_delay_exact_component(params, 0, 2), rel=1e-12
    )
