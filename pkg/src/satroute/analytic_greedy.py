"""Closed-form performance of greedy routing (GR).

Bufferless throughput from an interior source (x, y >= 1), the boundary-hit
time machinery for the buffered walk, the exact buffered mean-delay
component, and its closed-form upper bound.

Conventions used throughout: u is the probability of moving vertically when
both toward-destination links are usable; w is the unconditional per-move
vertical probability of the buffered walk; tau_x / tau_y are the move counts
at which the walk first exhausts its horizontal / vertical distance, and
min(tau_x, tau_y) is the number of moves spent in the interior (two usable
directions) before joining the boundary (one usable direction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .link_dynamics import LinkParams
from .special_functions import beta_fn, binom, reg_inc_beta


@dataclass(frozen=True)
class TieBreak:
    """Probability of choosing the vertical link when both toward-links are ON."""

    u: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.u <= 1.0:
            raise ValueError(f"u={self.u}: need 0 <= u <= 1")

    @property
    def u_bar(self) -> float:
        return 1.0 - self.u


@dataclass(frozen=True)
class DirectionBias:
    """Unconditional per-move vertical probability of the buffered walk."""

    w: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w={self.w}: need 0 <= w <= 1")

    @property
    def w_bar(self) -> float:
        return 1.0 - self.w


def gr_throughput(p: float, x: int, y: int, u: float) -> float:
    """Bufferless GR delivery probability from interior source (x, y).

    Evaluates

        p^y ((1-up)/ubar)^x I_{ubar p}(x, y) + p^x ((1-ubar p)/u)^y I_{up}(y, x)

    in the equivalent negative-binomial-sum form

        p^(x+y) [ (1-up)^x sum_{k<y} C(k+x-1,k)(1-ubar p)^k
                + (1-ubar p)^y sum_{k<x} C(k+y-1,k)(1-up)^k ],

    which is finite, exact, and regular at u in {0, 1} where the beta form
    has a 0 * inf factor.  Independent of the memory parameter: every move
    lands on a never-observed node whose links are in steady state.
    """
    if x < 1 or y < 1:
        raise ValueError("interior source requires x >= 1 and y >= 1")
    _check_prob("p", p)
    _check_prob("u", u)
    ub = 1.0 - u
    s1 = _nb_partial_sum(1.0 - ub * p, x, y)
    s2 = _nb_partial_sum(1.0 - u * p, y, x)
    return p ** (x + y) * ((1.0 - u * p) ** x * s1 + (1.0 - ub * p) ** y * s2)


def _nb_partial_sum(r: float, a: int, b: int) -> float:
    """sum_{k=0}^{b-1} C(k+a-1, k) r^k."""
    total = 0.0
    weight = 1.0
    for k in range(b):
        total += binom(k + a - 1, k) * weight
        weight *= r
    return total


def gr_throughput_boundary(p: float, n: int) -> float:
    """Delivery probability from a boundary source (0, n) or (n, 0): p^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_prob("p", p)
    return p**n


def recommended_u(x: int, y: int) -> TieBreak:
    """u = y/(x+y): steers the walk toward the diagonal and symmetrizes T."""
    if x < 0 or y < 0 or x + y == 0:
        raise ValueError("need x, y >= 0 with x + y >= 1")
    return TieBreak(y / (x + y))


def w_from_u(params: LinkParams, u: float) -> DirectionBias:
    """Vertical-move probability of the buffered walk induced by tie-break u.

    Both ON: vertical w.p. u.  One ON: forced.  Both OFF: wait; the first
    link to recover wins the race, with the u-coin again on a simultaneous
    recovery, giving (u e2 + 1 - e2) / (2 - e2) conditional on that case.
    Affine and strictly increasing in u.
    """
    _check_prob("u", u)
    p, e2 = params.p, params.epsilon2
    q = 1.0 - p
    w = u * p * p + p * q + q * q * ((u * e2 + 1.0 - e2) / (2.0 - e2))
    return DirectionBias(w)


def attainable_w_interval(params: LinkParams) -> tuple[float, float]:
    """The w values reachable by some u in [0, 1] (endpoints at u = 0, 1)."""
    return w_from_u(params, 0.0).w, w_from_u(params, 1.0).w


def u_for_target_w(params: LinkParams, w_target: float) -> Optional[TieBreak]:
    """Invert w_from_u; None when w_target is outside the attainable interval.

    Targets within one rounding step (1e-12) of an endpoint count as
    attainable: the endpoint itself is the exact u in {0, 1} solution.
    """
    _check_prob("w_target", w_target)
    lo, hi = attainable_w_interval(params)
    if w_target < lo - 1e-12 or w_target > hi + 1e-12:
        return None
    u = (w_target - lo) / (hi - lo)
    return TieBreak(min(1.0, max(0.0, u)))


def shape_condition_holds(params: LinkParams, x: int, y: int) -> bool:
    """Whether the diagonal bias w = max(x,y)/(x+y) is attainable from u in [0,1]."""
    p, e2 = params.p, params.epsilon2
    threshold = (1.0 - p) * (p + (1.0 - p) * (1.0 - e2) / (2.0 - e2))
    return min(x, y) / (x + y) >= threshold - 1e-12


def min_tau_pmf(x: int, y: int, w: float) -> dict[int, float]:
    """P(min(tau_x, tau_y) = k) for the i.i.d. Bernoulli(w) direction walk.

    P(tau_x = k) = C(k-1, x-1) w^(k-x) wbar^x and symmetrically for tau_y;
    the min is supported on k = min(x,y) .. x+y-1 and the two events are
    disjoint (the walk cannot exhaust both axes on the same move).
    """
    if x < 1 or y < 1:
        raise ValueError("need x >= 1 and y >= 1")
    _check_prob("w", w)
    wb = 1.0 - w
    pmf: dict[int, float] = {}
    for k in range(min(x, y), x + y):
        prob = 0.0
        if k >= x:
            prob += binom(k - 1, x - 1) * w ** (k - x) * wb**x
        if k >= y:
            prob += binom(k - 1, y - 1) * w**y * wb ** (k - y)
        pmf[k] = prob
    return pmf


def expected_min_tau(x: int, y: int, w: float) -> float:
    """E[min(tau_x, tau_y)] in closed form.

    For y >= x >= 1 and 0 < w < 1:

        x/wbar - w^(y-1) wbar^(x-1) / B(y, x) + (y/w - x/wbar) I_w(y, x).

    x > y is handled by the symmetry swap (x, y, w) -> (y, x, 1-w).  Note the
    final factor is I_w(y, x): writing it with arguments (x, y) disagrees
    with the direct sum over the pmf for every x != y.
    """
    if x > y:
        return expected_min_tau(y, x, 1.0 - w)
    if x < 1:
        raise ValueError("need x, y >= 1")
    if not 0.0 < w < 1.0:
        raise ValueError(f"w={w}: need 0 < w < 1")
    wb = 1.0 - w
    return (
        x / wb
        - (w ** (y - 1)) * (wb ** (x - 1)) / beta_fn(y, x)
        + (y / w - x / wb) * reg_inc_beta(w, y, x)
    )


def gr_delay_exact_component(params: LinkParams, x: int, y: int, w: float | None = None) -> float:
    """Mean buffered GR delay from (x, y) via the interior/boundary split.

    Interior moves cost 1 + (1-p)^2 / (2 e2 - e2^2) in expectation (wait for
    the first of two links to recover), boundary moves 1 + (1-p)/e2; the walk
    spends E[min(tau_x, tau_y)] moves in the interior out of x + y total.
    A source with x == 0 or y == 0 is all-boundary.  Default w: y/(x+y).
    """
    p, e2 = params.p, params.epsilon2
    if x < 0 or y < 0:
        raise ValueError("need x, y >= 0")
    boundary_extra = (1.0 - p) / e2
    if x == 0 or y == 0:
        return (x + y) * (1.0 + boundary_extra)
    if w is None:
        w = y / (x + y)
    interior_extra = (1.0 - p) ** 2 / (2.0 * e2 - e2 * e2)
    e_min = expected_min_tau(x, y, w)
    return (x + y) + interior_extra * e_min + boundary_extra * (x + y - e_min)


class GrDelayBound(NamedTuple):
    value: float
    w: float
    clamped: bool


def gr_delay_upper_bound(params: LinkParams, x: int, y: int) -> GrDelayBound:
    """Closed-form upper bound on mean buffered GR delay from (x, y >= 1).

    With w = y/(x+y), a Stirling bound on E[min(tau_x, tau_y)] gives

        (x+y)(1 + (1-p)^2/(2 e2 - e2^2))
        + (1-p)(1 - e2 + p)/(2 e2 - e2^2) * sqrt((x+y) / (2 pi w wbar)).

    If the diagonal bias w is not attainable from any u in [0, 1], w is
    clamped to the nearest attainable endpoint and the result is flagged;
    the Stirling step is only guaranteed at the diagonal bias, so a clamped
    value is a reference figure rather than a certified bound.
    """
    if x < 1 or y < 1:
        raise ValueError("interior source requires x >= 1 and y >= 1")
    p, e2 = params.p, params.epsilon2
    w = y / (x + y)
    lo, hi = attainable_w_interval(params)
    clamped = False
    if w < lo:
        w, clamped = lo, w < lo - 1e-12
    elif w > hi:
        w, clamped = hi, w > hi + 1e-12
    denom = 2.0 * e2 - e2 * e2
    value = (x + y) * (1.0 + (1.0 - p) ** 2 / denom) + (
        (1.0 - p) * (1.0 - e2 + p) / denom
    ) * math.sqrt((x + y) / (2.0 * math.pi * w * (1.0 - w)))
    return GrDelayBound(value, w, clamped)


def gr_throughput_at(p: float, x: int, y: int, u: float | None = None) -> float:
    """Delivery probability from any source: boundary p^n, else the interior
    formula with u defaulting to the diagonal-seeking y/(x+y)."""
    x, y = abs(x), abs(y)
    if x == 0 or y == 0:
        return gr_throughput_boundary(p, x + y)
    if u is None:
        u = recommended_u(x, y).u
    return gr_throughput(p, x, y, u)


def gr_delay_at(params: LinkParams, x: int, y: int) -> float:
    """Mean buffered delay from any source, diagonal bias on interior legs."""
    return gr_delay_exact_component(params, abs(x), abs(y))


def _check_prob(name: str, v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name}={v}: need a probability in [0, 1]")
