"""Optimality machinery for memoryless links: value iteration, node ordering,
connected-path ordering, and intermediate-node route improvement.

The value iteration solves, on the torus, the buffered minimum-mean-delay
fixed point for mu = 0 (link quads i.i.d. Bernoulli(p) per slot):

    Dstar(v, quad) = 1 + min over allowed actions of Dbar(next)
    Dbar(v)        = E_quad[ Dstar(v, quad) ],   Dbar(origin) = 0,

where "stay" is always allowed and a directional action is allowed iff that
outgoing link is ON.  The sweep closes the 16-quad expectation analytically,
iterating on Dbar alone; Dstar is reconstructed on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import grid_topology as grid
from .analytic_greedy import gr_delay_at, gr_delay_exact_component, gr_throughput, gr_throughput_at
from .grid_topology import DOWN, LEFT, GridSpec, NodeCoord
from .link_dynamics import LinkParams, transition_prob

QUADS = tuple(itertools.product((False, True), repeat=4))  # (l, d, r, u)


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"no fixed point after {iterations} sweeps; last residual {residual:.3e}")
        self.iterations = iterations
        self.residual = residual


@dataclass
class ValueTable:
    """Converged unconditional mean delays Dbar, indexed [x - x_lo, y - y_lo]."""

    spec: GridSpec
    p: float
    d_bar: np.ndarray
    iterations: int
    residual: float
    residual_history: list[float]

    def d_bar_at(self, node: NodeCoord) -> float:
        node = grid.normalize(self.spec, node)
        return float(self.d_bar[node.x - self.spec.x_lo(), node.y - self.spec.y_lo()])

    def neighbor_values(self, node: NodeCoord) -> tuple[float, float, float, float]:
        return tuple(self.d_bar_at(nb) for nb in grid.neighbors(self.spec, node))

    def d_star(self, node: NodeCoord, quad: tuple[bool, bool, bool, bool]) -> float:
        """Conditional minimum mean delay given the outgoing-link states."""
        node = grid.normalize(self.spec, node)
        if node == grid.ORIGIN:
            return 0.0
        stay = self.d_bar_at(node)
        nbrs = self.neighbor_values(node)
        best = stay
        for d in range(4):
            if quad[d] and nbrs[d] < best:
                best = nbrs[d]
        return 1.0 + best


def value_iterate_delay(
    spec: GridSpec,
    p: float,
    tol: float = 1e-12,
    max_iters: int = 100_000,
) -> ValueTable:
    """Fixed point of the memoryless buffered-delay Bellman equation.

    Initialized at the hop distance (an admissible underestimate), so the
    sweep converges monotonically from below.  Raises ConvergenceError with
    the last residual if the sup-norm change never drops below tol.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p={p}: need 0 < p <= 1")
    m, n = spec.m_planes, spec.n_per_plane
    oi = (0 - spec.x_lo(), 0 - spec.y_lo())  # origin index
    d = np.empty((m, n))
    for node in spec.nodes():
        d[node.x - spec.x_lo(), node.y - spec.y_lo()] = grid.hop_distance(spec, node, grid.ORIGIN)
    quad_weights = [
        (quad, p ** sum(quad) * (1.0 - p) ** (4 - sum(quad))) for quad in QUADS
    ]
    history: list[float] = []
    for iteration in range(1, max_iters + 1):
        nbrs = (
            np.roll(d, 1, axis=0),  # left  neighbor value Dbar(x-1, y)
            np.roll(d, 1, axis=1),  # down
            np.roll(d, -1, axis=0),  # right
            np.roll(d, -1, axis=1),  # up
        )
        acc = np.zeros_like(d)
        for quad, weight in quad_weights:
            best = d.copy()  # stay is always allowed
            for dir_idx in range(4):
                if quad[dir_idx]:
                    np.minimum(best, nbrs[dir_idx], out=best)
            acc += weight * best
        new = 1.0 + acc
        new[oi] = 0.0
        history.append(float(np.max(np.abs(new - d))))
        d = new
        if history[-1] < tol:
            return ValueTable(spec, p, d, iteration, history[-1], history)
    raise ConvergenceError(max_iters, history[-1])


def check_mean_delay_ordering(table: ValueTable, tol: float = 1e-9) -> list[tuple]:
    """Violations of the lexicographic delay ordering of nodes.

    Requires Dbar(a) < Dbar(b) - tol whenever |xa|+|ya| < |xb|+|yb|, or the
    sums tie and ||xa|-|ya|| < ||xb|-|yb||.  Nodes with identical signatures
    (symmetric images) are exact ties and are not compared.
    """
    entries = []
    for node in table.spec.nodes():
        sig = (abs(node.x) + abs(node.y), abs(abs(node.x) - abs(node.y)))
        entries.append((sig, node, table.d_bar_at(node)))
    violations = []
    for (sig_a, node_a, da), (sig_b, node_b, db) in itertools.combinations(sorted(entries), 2):
        if sig_a == sig_b:
            continue
        if not db - da > tol:
            violations.append((node_a, node_b, da, db))
    return violations


def greedy_action_violations(table: ValueTable, tol: float = 1e-9) -> list[tuple]:
    """Quads where the deterministic greedy action misses the Bellman minimum.

    Checked over the canonical region y >= x >= 0 (all other nodes are
    symmetric images).  Greedy: with both toward-links ON move along the
    dimension with more remaining distance (either one at x == y); with one
    ON take it; with none stay.  A violation is recorded when the greedy
    action's one-step value exceeds the minimum by more than tol.
    """
    spec = table.spec
    violations = []
    for node in spec.nodes():
        x, y = node
        if not (y >= x >= 0) or node == grid.ORIGIN:
            continue
        stay = table.d_bar_at(node)
        nbrs = table.neighbor_values(node)
        for quad in QUADS:
            candidates = [stay] + [nbrs[d] for d in range(4) if quad[d]]
            best = min(candidates)
            greedy = _greedy_values(x, y, quad, stay, nbrs)
            worst_greedy = max(greedy)
            if worst_greedy - best > tol:
                violations.append((node, quad, worst_greedy, best))
    return violations


def _greedy_values(x, y, quad, stay, nbrs) -> list[float]:
    """One-step values of the action(s) the deterministic greedy rule may take."""
    toward_x = LEFT if x > 0 else None
    toward_y = DOWN if y > 0 else None
    x_on = toward_x is not None and quad[toward_x]
    y_on = toward_y is not None and quad[toward_y]
    if x_on and y_on:
        if y > x:
            return [nbrs[toward_y]]
        if x > y:
            return [nbrs[toward_x]]
        return [nbrs[toward_x], nbrs[toward_y]]  # fair coin: both must attain
    if y_on:
        return [nbrs[toward_y]]
    if x_on:
        return [nbrs[toward_x]]
    return [stay]


def verify_connected_path_ordering(params: LinkParams, t_c: int, max_len: int) -> list[tuple]:
    """Violations of: a longer snapshot-connected path never survives better.

    The survival probability of a length-L connected path is
    prod_{i<L} p11(t_c + i), so each extra hop multiplies by p11(t_c + L),
    which is < 1 except for the hop traversed at the snapshot instant itself
    (t_c = 0, first hop): survival must strictly decrease across every
    fallible hop and can at most tie across that one certain hop.
    """
    violations = []
    prob = 1.0
    for length in range(1, max_len + 1):
        factor = transition_prob(params, True, True, t_c + length - 1)
        nxt = prob * factor
        strict_required = factor < 1.0
        if nxt > prob or (strict_required and not nxt < prob):
            violations.append((length, prob, nxt))
        prob = nxt
    return violations


def find_best_intermediate(
    p: float,
    x: int,
    y: int,
    metric: str,
    params: Optional[LinkParams] = None,
) -> Optional[NodeCoord]:
    """Best relay node (u, v) that strictly improves two-leg greedy routing.

    Baseline: direct greedy routing with the default fair-coin tie-break.
    Candidates: every 0 <= u <= x, 0 <= v <= y except the endpoints, with
    each leg steered along its own diagonal (that steering is where the
    improvement comes from).  Throughput: maximize T(x-u, y-v) * T(u, v)
    against direct T(x, y); delay: minimize the leg sum against the direct
    value (requires ``params``).  None when nothing strictly improves.
    """
    if x < 0 or y < 0:
        raise ValueError("need x, y >= 0")
    if metric not in ("throughput", "delay"):
        raise ValueError(f"unknown metric {metric!r}")
    if metric == "delay" and params is None:
        raise ValueError("delay metric needs link params")

    def value(a: int, b: int) -> float:
        if metric == "throughput":
            return gr_throughput_at(p, a, b)
        return gr_delay_at(params, a, b)

    if x == 0 or y == 0:
        direct = value(x, y)  # boundary sources have no tie-breaks
    elif metric == "throughput":
        direct = gr_throughput(p, x, y, 0.5)
    else:
        direct = gr_delay_exact_component(params, x, y, 0.5)
    best_node = None
    best_value = direct
    for u in range(x + 1):
        for v in range(y + 1):
            if (u, v) in ((0, 0), (x, y)):
                continue
            if metric == "throughput":
                combined = value(x - u, y - v) * value(u, v)
                better = combined > best_value
            else:
                combined = value(x - u, y - v) + value(u, v)
                better = combined < best_value
            if better:
                best_value = combined
                best_node = NodeCoord(u, v)
    if best_node is not None:
        u, v = best_node
        if metric == "throughput":
            assert value(x - u, y - v) * value(u, v) > direct
        else:
            assert value(x - u, y - v) + value(u, v) < direct
    return best_node
