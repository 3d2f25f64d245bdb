"""Analytic policy comparison: who wins at a given snapshot staleness, and the
smallest staleness at which greedy routing takes over.

Both crossover searches compare greedy routing's exact analytic value against
the centralized side conservatively, i.e. greedy is declared the winner only
when it beats a figure that favors the centralized policy:

* throughput: greedy's exact delivery probability must reach the centralized
  *upper* bound;
* delay: greedy's exact mean delay must drop below the centralized recursion
  evaluated one hop short (depth x+y-1), a deliberately weakened lower bound
  that gives the centralized side an extra one-hop margin.
"""

from __future__ import annotations

from typing import Optional

from .analytic_greedy import gr_delay_exact_component, gr_throughput, recommended_u
from .analytic_scpr import scpr_delay_recursion, scpr_throughput_bound
from .link_dynamics import LinkParams


def gr_beats_scpr_throughput(params: LinkParams, x: int, y: int, t_c: int, u: float | None = None) -> bool:
    if u is None:
        u = recommended_u(x, y).u
    return gr_throughput(params.p, x, y, u) >= scpr_throughput_bound(params, x, y, t_c)


def gr_beats_scpr_delay(params: LinkParams, x: int, y: int, t_c: int) -> bool:
    gr = gr_delay_exact_component(params, x, y)
    return gr <= scpr_delay_recursion(params, x + y - 1, t_c)


def throughput_crossover_tc(
    params: LinkParams, x: int, y: int, t_c_min: int = 0, t_c_max: int = 200, u: float | None = None
) -> Optional[int]:
    """Smallest t_c in range where greedy delivery reaches the SCPR bound."""
    return _first_true(lambda tc: gr_beats_scpr_throughput(params, x, y, tc, u), t_c_min, t_c_max)


def delay_crossover_tc(
    params: LinkParams, x: int, y: int, t_c_min: int = 0, t_c_max: int = 200
) -> Optional[int]:
    """Smallest t_c in range where greedy mean delay beats the SCPR recursion."""
    return _first_true(lambda tc: gr_beats_scpr_delay(params, x, y, tc), t_c_min, t_c_max)


def _first_true(pred, lo: int, hi: int) -> Optional[int]:
    """First t in [lo, hi] with pred(t), assuming pred is a threshold in t.

    Binary search over the monotone region; if the bracket turns out not to
    be a clean threshold (pred not monotone at the probe points), fall back
    to a linear scan so the answer is always the true first hit.
    """
    if lo > hi:
        raise ValueError("empty search range")
    if pred(lo):
        return lo
    if not pred(hi):
        return None
    a, b = lo, hi  # pred(a) False, pred(b) True
    while b - a > 1:
        mid = (a + b) // 2
        if pred(mid):
            b = mid
        else:
            a = mid
    # guard against a non-monotone pred: confirm nothing earlier fires
    for t in range(lo + 1, b):
        if pred(t):
            return t
    return b
