"""Exact integer-parameter Beta machinery.

Only integer shape parameters are supported, which lets the regularized
incomplete beta function be evaluated exactly as the finite negative-binomial
tail sum

    I_v(a, b) = sum_{k=0}^{b-1} C(k+a-1, k) (1-v)^k v^a

(the probability that a negative binomial with ``a`` required successes of
probability ``v`` sees at most ``b-1`` failures).  No continued fractions,
no convergence tuning; the only error is float rounding.
"""

from __future__ import annotations

from math import comb


def binom(n: int, k: int) -> float:
    """Binomial coefficient as a float (exact integer arithmetic underneath)."""
    if k < 0 or k > n:
        return 0.0
    return float(comb(n, k))


def beta_fn(a: int, b: int) -> float:
    """B(a, b) = (a-1)!(b-1)!/(a+b-1)! for positive integers.

    Computed from the exact integer identity 1/B(a,b) = (a+b-1) C(a+b-2, a-1),
    so e.g. B(2, 3) == 1/12 exactly.
    """
    _check_shape(a, b)
    return 1.0 / ((a + b - 1) * comb(a + b - 2, a - 1))


def reg_inc_beta(v: float, a: int, b: int) -> float:
    """Regularized incomplete beta I_v(a, b) for integer a, b >= 1.

    For v < 1/2 the complement identity I_v(a,b) = 1 - I_{1-v}(b,a) is used so
    the direct sum always runs on the better-conditioned side.
    """
    _check_shape(a, b)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v={v}: need 0 <= v <= 1")
    if v == 0.0:
        return 0.0
    if v == 1.0:
        return 1.0
    if v < 0.5:
        return 1.0 - _neg_binomial_cdf_sum(1.0 - v, b, a)
    return _neg_binomial_cdf_sum(v, a, b)


def _neg_binomial_cdf_sum(v: float, a: int, b: int) -> float:
    one_minus = 1.0 - v
    va = v**a
    total = 0.0
    weight = 1.0  # (1-v)^k
    for k in range(b):
        total += comb(k + a - 1, k) * weight * va
        weight *= one_minus
    return min(total, 1.0)


def _check_shape(a: int, b: int) -> None:
    if a < 1 or b < 1:
        raise ValueError(f"a={a}, b={b}: integer shape parameters must be >= 1")
