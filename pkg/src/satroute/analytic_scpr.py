"""Closed-form performance of shortest-connected-path routing (SCPR).

Two quantities, both for a packet that departs the source t_c slots after the
routing snapshot was taken, over a path whose links were all ON at snapshot
time:

* throughput upper bound: the product of per-hop survival probabilities
  p11(t_c + i) over the first x+y hops;
* mean-delay lower bound: the exact expected buffered delay of that stylized
  path process, extracted from a moment-generating-function recursion.

The MGF recursion works on G_i(t) = E[mu^(t * S_i)], where S_i is the delay
accumulated over the first i hops:

    G_i(t) = A(t) G_{i-1}(t) + B(t) G_{i-1}(t+1),   G_0(t) = 1,

    A(t) = (p(1-m)m + e2 m^2) / (1 - (1-e2) m),     m = mu^t
    B(t) = (1-p) mu^(t_c) m (1-m) / (1 - (1-e2) m)

and E[S_i] = G_i'(0) / log(mu).  Derivatives are propagated through the
recursion with forward-mode dual numbers, so no finite-difference step size
is involved.  Working on G (values in (0, 1]) rather than G/log(mu) avoids
dividing by log(mu) until the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .link_dynamics import MU_MAX, LinkParams, transition_prob


class Dual:
    """Minimal forward-mode dual number: value + first derivative."""

    __slots__ = ("v", "d")

    def __init__(self, v: float, d: float = 0.0):
        self.v = v
        self.d = d

    def __add__(self, other):
        other = other if isinstance(other, Dual) else Dual(other)
        return Dual(self.v + other.v, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = other if isinstance(other, Dual) else Dual(other)
        return Dual(self.v - other.v, self.d - other.d)

    def __rsub__(self, other):
        return Dual(other) - self

    def __mul__(self, other):
        other = other if isinstance(other, Dual) else Dual(other)
        return Dual(self.v * other.v, self.d * other.v + self.v * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = other if isinstance(other, Dual) else Dual(other)
        return Dual(self.v / other.v, (self.d * other.v - self.v * other.d) / (other.v * other.v))


def scpr_throughput_bound(params: LinkParams, x: int, y: int, t_c: int) -> float:
    """Upper bound on SCPR delivery probability from (x, y), snapshot age t_c.

    Equals the survival probability of a length-(x+y) snapshot-connected
    path; any realizable path is at least that long, so this bounds the true
    throughput from above.  Nonincreasing in t_c, x and y.
    """
    if x + y < 1:
        raise ValueError("need x + y >= 1")
    return scpr_path_success_prob(params, x + y, t_c)


def scpr_path_success_prob(params: LinkParams, path_len: int, t_c: int) -> float:
    """Exact bufferless success probability of one snapshot-connected path.

    Hop i (ON at snapshot time 0) is traversed at slot t_c + i, so the
    probability that every hop is still ON when reached is
    prod_{i=0}^{path_len-1} p11(t_c + i).
    """
    if path_len < 0 or t_c < 0:
        raise ValueError("path_len and t_c must be >= 0")
    prob = 1.0
    for i in range(path_len):
        prob *= transition_prob(params, True, True, t_c + i)
    return prob


def scpr_delay_lower_bound(params: LinkParams, x: int, y: int, t_c: int) -> float:
    """Lower bound on mean buffered SCPR delay from (x, y), snapshot age t_c.

    Exact mean delay of the stylized snapshot-connected path of x+y hops
    (waiting a Geometric(epsilon2) time at each hop found OFF); the true
    routed path is never shorter, so the true mean delay is never smaller.
    """
    return scpr_delay_recursion(params, x + y, t_c)


def scpr_delay_recursion(params: LinkParams, depth: int, t_c: int) -> float:
    """E[S_depth]: mean stylized-path delay accumulated over ``depth`` hops."""
    if depth < 0 or t_c < 0:
        raise ValueError("depth and t_c must be >= 0")
    if depth == 0:
        return 0.0
    if params.mu == 0.0:
        return _delay_mu0(params, depth, t_c)
    if params.mu > MU_MAX:
        raise ValueError(f"mu={params.mu} too close to 1 for a stable 1/log(mu)")
    return MgfEvaluator(params, t_c, depth).mean_delay()


def _delay_mu0(params: LinkParams, depth: int, t_c: int) -> float:
    # Memoryless links: every hop reached at slot >= 1 is fresh Bernoulli(p),
    # so each costs 1 + (1-p)/e2 in expectation.  The sole exception is the
    # first hop when t_c == 0: it is traversed at the snapshot instant itself,
    # where it is ON by construction and costs exactly 1.
    per_hop_extra = (1.0 - params.p) / params.epsilon2
    value = depth * (1.0 + per_hop_extra)
    if t_c == 0:
        value -= per_hop_extra
    return value


@dataclass
class MgfEvaluator:
    """Triangular (value, derivative) table of the delay-MGF recursion.

    Row i holds G_i at integer offsets t = 0 .. depth - i; computing the
    derivative of G_depth at t = 0 consumes exactly that triangle.
    """

    params: LinkParams
    t_c: int
    depth: int
    _rows: list[list[Dual]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.params.mu <= MU_MAX:
            raise ValueError("MGF recursion requires 0 < mu < 1")
        if self.depth < 0 or self.t_c < 0:
            raise ValueError("depth and t_c must be >= 0")
        rows = [[Dual(1.0, 0.0) for _ in range(self.depth + 1)]]
        for i in range(1, self.depth + 1):
            prev = rows[i - 1]
            row = []
            for t in range(self.depth - i + 1):
                a, b = self._ab_dual(t)
                row.append(a * prev[t] + b * prev[t + 1])
            rows.append(row)
        self._rows = rows

    def _ab_dual(self, t: float) -> tuple[Dual, Dual]:
        p, e2, mu = self.params.p, self.params.epsilon2, self.params.mu
        m = Dual(mu**t, mu**t * math.log(mu))
        den = 1.0 - (1.0 - e2) * m
        a = (p * (1.0 - m) * m + e2 * m * m) / den
        b = (1.0 - p) * (mu**self.t_c) * (m * (1.0 - m)) / den
        return a, b

    def ab_values(self, t: float) -> tuple[float, float]:
        """A(t), B(t) as plain floats at arbitrary real t (for cross-checks)."""
        a, b = self._ab_dual(t)
        return a.v, b.v

    def ab_derivatives(self, t: float) -> tuple[float, float]:
        """A'(t), B'(t) from the dual evaluation."""
        a, b = self._ab_dual(t)
        return a.d, b.d

    def raw_value(self, depth: int, t: float) -> float:
        """G_depth(t) = E[mu^(t S_depth)] at arbitrary real t, values only."""
        if depth > self.depth:
            raise ValueError("depth exceeds table depth")
        vals = [1.0] * (depth + 1)
        for i in range(1, depth + 1):
            nxt = []
            for j in range(depth - i + 1):
                a, b = self.ab_values(t + j)
                nxt.append(a * vals[j] + b * vals[j + 1])
            vals = nxt
        return vals[0]

    def mean_delay(self) -> float:
        """E[S_depth] = G_depth'(0) / log(mu)."""
        if self.depth == 0:
            return 0.0
        return self._rows[self.depth][0].d / math.log(self.params.mu)

    def table(self) -> list[list[float]]:
        """M_i(t) = G_i(t)/log(mu) for t = 0 .. depth - i, row per i."""
        log_mu = math.log(self.params.mu)
        return [[cell.v / log_mu for cell in row] for row in self._rows]


def mgf_table(evaluator: MgfEvaluator) -> list[list[float]]:
    return evaluator.table()
