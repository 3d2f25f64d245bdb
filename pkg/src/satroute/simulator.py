"""Monte Carlo engine: full-network trials, stylized-path oracles, estimation.

A trial owns a lazily evaluated NetworkState and an RNG substream; links are
only sampled when a policy actually observes them, via the k-step transition
kernel from their last observation.  Delays are integer slot counts, so
estimates aggregate as exact integer sums and are bit-identical for any
parallelism degree.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import grid_topology as grid
from .analytic_greedy import TieBreak
from .grid_topology import DOWN, LEFT, ORIGIN, RIGHT, UP, GridSpec, NodeCoord
from .link_dynamics import LinkParams, transition_prob

DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate: sample mean, its standard error, provenance."""

    mean: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class TrialOutcome:
    success: bool
    delay: Optional[int]  # slots from departure, present iff success
    path_len: int  # hops of the chosen/realized path
    hit_boundary_at: Optional[int]  # move count at first boundary contact (GR)


class NetworkState:
    """Per-directed-link ON/OFF cache with lazy Markov evolution.

    A link observed for the first time at slot t is drawn from the steady
    state (the chain is stationary, so this matches an implicit time-0 draw).
    Re-observation at a later slot advances it through the k-step kernel in
    one draw, or slot-by-slot when step_mode == "slotwise" (the two modes are
    distributionally identical; the slow mode exists to test exactly that).
    Time must never move backwards for any single link.
    """

    __slots__ = ("spec", "params", "rng", "step_mode", "_cache")

    def __init__(self, spec: GridSpec, params: LinkParams, rng, step_mode: str = "jump"):
        if step_mode not in ("jump", "slotwise"):
            raise ValueError(f"unknown step_mode {step_mode!r}")
        self.spec = spec
        self.params = params
        self.rng = rng
        self.step_mode = step_mode
        self._cache: dict[int, tuple[bool, int]] = {}

    def link_on(self, tail: NodeCoord, direction: int, t: int) -> bool:
        return self.link_on_id(grid.link_index(self.spec, tail, direction), t)

    def link_on_id(self, lid: int, t: int) -> bool:
        cached = self._cache.get(lid)
        params = self.params
        if cached is None:
            on = self.rng.random() < params.p
        else:
            on, last_t = cached
            k = t - last_t
            if k < 0:
                raise ValueError(f"link {lid} queried backwards in time ({last_t} -> {t})")
            if k > 0:
                if self.step_mode == "jump":
                    on = self.rng.random() < transition_prob(params, on, True, k)
                else:
                    e1, e2 = params.epsilon1, params.epsilon2
                    for _ in range(k):
                        on = (self.rng.random() >= e1) if on else (self.rng.random() < e2)
        self._cache[lid] = (on, t)
        return on

    def link_on_link(self, link: grid.DirectedLink, t: int) -> bool:
        return self.link_on(link.tail, grid.direction_between(self.spec, link.tail, link.head), t)


def run_scpr_trial(
    state: NetworkState,
    src: NodeCoord,
    t_c: int,
    buffered: bool,
    rng,
    dst: NodeCoord = ORIGIN,
) -> TrialOutcome:
    """One shortest-connected-path trial.

    The route is fixed from the t = 0 snapshot: BFS over links ON at t = 0,
    falling back to a uniformly random shortest path when no connected path
    exists.  The packet departs at t = t_c and follows the route blindly;
    bufferless it is dropped at the first OFF link, buffered it waits.
    Delay is counted from t_c (the snapshot staleness itself is excluded).
    """
    spec = state.spec
    src = grid.normalize(spec, src)
    dst = grid.normalize(spec, dst)
    hops = grid.shortest_connected_hops(
        spec,
        lambda nid, d: state.link_on_id(nid * 4 + d, 0),
        grid.node_index(spec, src),
        grid.node_index(spec, dst),
    )
    if hops is None:
        path = grid.random_shortest_path(spec, src, dst, rng)
        hops = [
            (grid.node_index(spec, hop.tail), grid.direction_between(spec, hop.tail, hop.head))
            for hop in path.hops
        ]
    t = t_c
    for nid, d in hops:
        lid = nid * 4 + d
        if state.link_on_id(lid, t):
            t += 1
            continue
        if not buffered:
            return TrialOutcome(False, None, len(hops), None)
        t += 1
        while not state.link_on_id(lid, t):
            t += 1
        t += 1
    return TrialOutcome(True, t - t_c, len(hops), None)


def run_gr_trial(
    state: NetworkState,
    src: NodeCoord,
    buffered: bool,
    tie: TieBreak | str,
    rng,
) -> TrialOutcome:
    """One greedy-routing trial toward the origin.

    At each node only the one or two links that reduce the remaining distance
    are observed.  Both ON: tie-break (probability ``tie.u`` vertical, or the
    deterministic farther-dimension rule).  One ON: forced.  None ON:
    bufferless drops, buffered waits one slot and re-observes.  The move
    count at first boundary contact is recorded.
    """
    spec = state.spec
    x, y = grid.normalize(spec, src)
    t = 0
    moves = 0
    hit_boundary: Optional[int] = 0 if (x == 0 or y == 0) and (x, y) != (0, 0) else None
    while (x, y) != (0, 0):
        xdir = LEFT if x > 0 else (RIGHT if x < 0 else None)
        ydir = DOWN if y > 0 else (UP if y < 0 else None)
        node = NodeCoord(x, y)
        while True:
            x_on = xdir is not None and state.link_on(node, xdir, t)
            y_on = ydir is not None and state.link_on(node, ydir, t)
            if x_on or y_on:
                break
            if not buffered:
                return TrialOutcome(False, None, moves, hit_boundary)
            t += 1
        if x_on and y_on:
            if tie == DETERMINISTIC:
                vertical = abs(y) > abs(x) or (abs(y) == abs(x) and rng.random() < 0.5)
            else:
                vertical = rng.random() < tie.u
        else:
            vertical = y_on
        if vertical:
            y -= 1 if y > 0 else -1
        else:
            x -= 1 if x > 0 else -1
        t += 1
        moves += 1
        if hit_boundary is None and (x == 0 or y == 0) and (x, y) != (0, 0):
            hit_boundary = moves
    return TrialOutcome(True, t, moves, hit_boundary)


def run_stylized_scpr_path(
    params: LinkParams,
    path_len: int,
    t_c: int,
    buffered: bool,
    trials: int,
    seed: int,
) -> Estimate:
    """Monte Carlo over an abstract path of ``path_len`` links, all ON at t=0.

    Link i evolves independently and is checked when the packet reaches it
    (slot t_c + i bufferless; t_c + accumulated delay buffered, then a
    Geometric(epsilon2) wait if OFF).  Bufferless estimates the delivery
    probability; buffered estimates the mean delay.  Vectorized over trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    p, e2, mu = params.p, params.epsilon2, params.mu
    if buffered:
        s = np.zeros(trials, dtype=np.int64)
        for _ in range(path_len):
            p_on = p + (1.0 - p) * np.power(mu, t_c + s)
            on = rng.random(trials) < p_on
            waits = rng.geometric(e2, size=trials)
            s += 1 + np.where(on, 0, waits)
        return _estimate_from_sums(int(s.sum()), int(np.dot(s, s)), trials, seed)
    ok = np.ones(trials, dtype=bool)
    for i in range(path_len):
        p_on = transition_prob(params, True, True, t_c + i)
        ok &= rng.random(trials) < p_on
    good = int(ok.sum())
    return _estimate_from_sums(good, good, trials, seed)


def trial_rng(master_seed: int, index: int) -> random.Random:
    """Independent, replayable per-trial stream from (master_seed, index)."""
    return random.Random(_mix64(_mix64(master_seed) ^ _mix64(index + 0x9E3779B97F4A7C15)))


def _mix64(v: int) -> int:
    # splitmix64 finalizer
    v = (v + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return v ^ (v >> 31)


def estimate(
    spec: GridSpec,
    params: LinkParams,
    policy: str,
    *,
    src: NodeCoord,
    buffered: bool,
    t_c: int = 0,
    tie: TieBreak | str | None = None,
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> Estimate:
    """Run independent trials and estimate throughput or mean delay.

    Bufferless runs estimate the delivery probability; buffered runs estimate
    the mean delay (every buffered trial succeeds).  Per-trial RNG streams
    are derived from (master_seed, trial index) and all aggregation is exact
    integer summation, so the result is bit-identical for any thread count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if policy not in ("scpr", "gr"):
        raise ValueError(f"unknown policy {policy!r}")
    if policy == "gr" and tie is None:
        tie = TieBreak(0.5)

    def run_chunk(bounds: tuple[int, int]) -> tuple[int, int]:
        lo, hi = bounds
        total = 0
        total_sq = 0
        for i in range(lo, hi):
            rng = trial_rng(master_seed, i)
            state = NetworkState(spec, params, rng)
            if policy == "scpr":
                out = run_scpr_trial(state, src, t_c, buffered, rng)
            else:
                out = run_gr_trial(state, src, buffered, tie, rng)
            v = out.delay if buffered else int(out.success)
            total += v
            total_sq += v * v
        return total, total_sq

    if threads <= 1:
        sums = [run_chunk((0, trials))]
    else:
        step = -(-trials // threads)
        chunks = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sums = list(pool.map(run_chunk, chunks))
    total = sum(s for s, _ in sums)
    total_sq = sum(q for _, q in sums)
    return _estimate_from_sums(total, total_sq, trials, master_seed)


def _estimate_from_sums(total: int, total_sq: int, trials: int, seed: int) -> Estimate:
    mean = total / trials
    if trials > 1:
        var = (total_sq - total * total / trials) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = float("inf")
    return Estimate(mean, stderr, trials, seed)
