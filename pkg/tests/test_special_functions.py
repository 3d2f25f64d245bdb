import math

import pytest

from satroute.special_functions import beta_fn, binom, reg_inc_beta
from satroute.verify import quadrature_reg_inc_beta


def test_identity_shapes():
    for i in range(0, 101):
        v = i / 100
        assert reg_inc_beta(v, 1, 1) == pytest.approx(v, abs=1e-15)


def test_endpoints():
    assert reg_inc_beta(0.0, 4, 7) == 0.0
    assert reg_inc_beta(1.0, 4, 7) == 1.0


def test_symmetric_midpoint():
    assert reg_inc_beta(0.5, 2, 2) == pytest.approx(0.5, abs=1e-15)


def test_complement_and_pascal_small_grid():
    for a in range(1, 13):
        for b in range(1, 13):
            for i in range(0, 21):
                v = i / 20
                assert reg_inc_beta(v, a, b) + reg_inc_beta(1 - v, b, a) == pytest.approx(1.0, abs=1e-12)
                if a >= 2 and b >= 2:
                    rec = v * reg_inc_beta(v, a - 1, b) + (1 - v) * reg_inc_beta(v, a, b - 1)
                    assert reg_inc_beta(v, a, b) == pytest.approx(rec, abs=1e-12)


def test_monotone_in_v_and_a():
    for a, b in ((1, 1), (3, 5), (10, 2)):
        prev = -1.0
        for i in range(0, 101):
            cur = reg_inc_beta(i / 100, a, b)
            assert cur >= prev - 1e-15
            prev = cur
    for v in (0.2, 0.5, 0.8):
        for b in (1, 4, 9):
            prev = 2.0
            for a in range(1, 20):
                cur = reg_inc_beta(v, a, b)
                assert cur <= prev + 1e-15
                prev = cur


def test_matches_quadrature():
    for v, a, b in ((0.37, 3, 5), (0.5, 2, 2), (0.81, 6, 1), (0.12, 1, 7), (0.66, 10, 4)):
        assert reg_inc_beta(v, a, b) == pytest.approx(quadrature_reg_inc_beta(v, a, b), abs=1e-9)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        reg_inc_beta(0.5, 0, 3)
    with pytest.raises(ValueError):
        reg_inc_beta(1.5, 2, 3)
    with pytest.raises(ValueError):
        beta_fn(2, 0)


def test_beta_values():
    assert beta_fn(1, 1) == 1.0
    assert beta_fn(2, 3) == 1.0 / 12.0
    for a in range(1, 12):
        for b in range(1, 12):
            assert beta_fn(a, b) == beta_fn(b, a)
            exact = math.factorial(a - 1) * math.factorial(b - 1) / math.factorial(a + b - 1)
            assert beta_fn(a, b) == pytest.approx(exact, rel=1e-14)


def test_binom_exact_and_edges():
    assert binom(0, 0) == 1.0
    assert binom(10, 3) == 120.0
    assert binom(5, 7) == 0.0
    assert binom(5, -1) == 0.0
    assert binom(60, 30) == float(math.comb(60, 30))
