"""Self-contained verification suites: independent oracles cross-checking the
analytic formulas, Monte Carlo agreement checks, and optimality checks.

Every oracle here is written from the defining process or definition, never
from the closed form it validates:

* ``dp_throughput``: lattice dynamic program over the four per-node routing
  cases (both links ON / one ON / none).
* ``expected_min_tau_direct``: sum of k * P(min = k) over the hitting-time pmf.
* ``quadrature_reg_inc_beta``: adaptive Simpson integration of the beta
  density.

Suites return CheckResult lists; the CLI ``verify`` subcommand renders them
and sets the exit code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from . import analytic_greedy as greedy
from . import analytic_scpr as scpr
from . import comparison, simulator
from . import link_dynamics as links
from . import optimal_policies as optimal
from .grid_topology import GridSpec, NodeCoord
from .special_functions import beta_fn, reg_inc_beta


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


# ---------------------------------------------------------------------------
# independent oracles


def dp_throughput(p: float, x: int, y: int, u: float) -> float:
    """Greedy bufferless delivery probability by dynamic programming.

    T(0,0) = 1; boundary rows multiply by p per forced hop; in the interior
    both toward-links are fresh Bernoulli(p): both ON (p^2) applies the
    tie-break, exactly one ON moves that way, both OFF drops.
    """
    table: dict[tuple[int, int], float] = {}
    for a in range(x + 1):
        for b in range(y + 1):
            if a == 0 and b == 0:
                table[a, b] = 1.0
            elif a == 0:
                table[a, b] = p * table[a, b - 1]
            elif b == 0:
                table[a, b] = p * table[a - 1, b]
            else:
                table[a, b] = (
                    p * p * (u * table[a, b - 1] + (1.0 - u) * table[a - 1, b])
                    + p * (1.0 - p) * table[a, b - 1]
                    + (1.0 - p) * p * table[a - 1, b]
                )
    return table[x, y]


def expected_min_tau_direct(x: int, y: int, w: float) -> float:
    return sum(k * prob for k, prob in greedy.min_tau_pmf(x, y, w).items())


def quadrature_reg_inc_beta(v: float, a: int, b: int, tol: float = 1e-12) -> float:
    """I_v(a,b) by adaptive Simpson integration of t^(a-1)(1-t)^(b-1)/B(a,b)."""

    def f(t: float) -> float:
        return t ** (a - 1) * (1.0 - t) ** (b - 1)

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def adapt(lo: float, hi: float, flo: float, fmid: float, fhi: float, whole: float, eps: float) -> float:
        mid = 0.5 * (lo + hi)
        fl, fr = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if abs(left + right - whole) < 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return adapt(lo, mid, flo, fl, fmid, left, eps / 2.0) + adapt(
            mid, hi, fmid, fr, fhi, right, eps / 2.0
        )

    if v <= 0.0:
        return 0.0
    mid = 0.5 * v
    whole = simpson(0.0, v, f(0.0), f(mid), f(v))
    return adapt(0.0, v, f(0.0), f(mid), f(v), whole, tol) / beta_fn(a, b)


# ---------------------------------------------------------------------------
# suites


def suite_analytic() -> list[CheckResult]:
    """Deterministic oracle identities (fast, no Monte Carlo)."""
    out = []

    worst = 0.0
    for p in (0.3, 0.6, 0.9):
        for x in range(1, 9):
            for y in range(1, 9):
                for u in (0.2, 0.5, 0.8, y / (x + y)):
                    worst = max(worst, abs(greedy.gr_throughput(p, x, y, u) - dp_throughput(p, x, y, u)))
    out.append(CheckResult("greedy throughput == DP oracle (<=1e-9)", worst <= 1e-9, f"max|diff|={worst:.2e}"))

    hand = greedy.gr_throughput(0.9, 1, 1, 0.5)
    out.append(
        CheckResult(
            "hand value T(1,1;p=0.9,u=0.5) == 0.891",
            abs(hand - 0.891) <= 1e-12,
            f"value={hand!r}",
        )
    )

    worst = 0.0
    for x in range(1, 13):
        for y in range(x, 13):
            for w in [i / 10 for i in range(1, 10)]:
                worst = max(worst, abs(greedy.expected_min_tau(x, y, w) - expected_min_tau_direct(x, y, w)))
    ok = worst <= 1e-9 and greedy.expected_min_tau(1, 1, 0.5) == 1.0
    out.append(CheckResult("E[min hitting time] closed form == direct sum (<=1e-9)", ok, f"max|diff|={worst:.2e}"))

    worst_sym = worst_pascal = 0.0
    for a in range(1, 31):
        for b in range(1, 31):
            for i in range(0, 101):
                v = i / 100
                worst_sym = max(worst_sym, abs(reg_inc_beta(v, a, b) + reg_inc_beta(1 - v, b, a) - 1.0))
                if a >= 2 and b >= 2:
                    rec = v * reg_inc_beta(v, a - 1, b) + (1 - v) * reg_inc_beta(v, a, b - 1)
                    worst_pascal = max(worst_pascal, abs(reg_inc_beta(v, a, b) - rec))
    out.append(CheckResult("beta complement identity (<=1e-12)", worst_sym <= 1e-12, f"max|diff|={worst_sym:.2e}"))
    out.append(CheckResult("beta Pascal recurrence (<=1e-12)", worst_pascal <= 1e-12, f"max|diff|={worst_pascal:.2e}"))
    out.append(CheckResult("B(2,3) == 1/12 exactly", beta_fn(2, 3) == 1.0 / 12.0))

    worst = 0.0
    for v, a, b in ((0.37, 3, 5), (0.5, 2, 2), (0.81, 6, 1), (0.12, 1, 7), (0.66, 10, 4)):
        worst = max(worst, abs(reg_inc_beta(v, a, b) - quadrature_reg_inc_beta(v, a, b)))
    out.append(CheckResult("beta tail-sum == quadrature spot checks (<=1e-9)", worst <= 1e-9, f"max|diff|={worst:.2e}"))

    worst = 0.0
    for p, mu, tc in ((0.9, 0.9, 5), (0.7, 0.5, 0), (0.9, 0.99, 20)):
        params = links.from_p_mu(p, mu)
        ev = scpr.MgfEvaluator(params, tc, 12)
        for t in (0.0, 1.0, 2.0, 5.0):
            ad, bd = ev.ab_derivatives(t)
            h = 1e-6
            a_hi, b_hi = ev.ab_values(t + h)
            a_lo, b_lo = ev.ab_values(t - h)
            worst = max(worst, abs(ad - (a_hi - a_lo) / (2 * h)), abs(bd - (b_hi - b_lo) / (2 * h)))
    out.append(CheckResult("dual derivatives == central differences (<=1e-6)", worst <= 1e-6, f"max|diff|={worst:.2e}"))

    worst = -math.inf
    gap_ok = True
    flags_ok = True
    for p in (0.3, 0.6, 0.9):
        for mu in (0.0, 0.5, 0.9):
            params = links.from_p_mu(p, mu)
            for x in range(1, 13):
                for y in range(x, 13):
                    bound = greedy.gr_delay_upper_bound(params, x, y)
                    flags_ok &= bound.clamped == (not greedy.shape_condition_holds(params, x, y))
                    if bound.clamped:
                        continue  # no Stirling certificate off the diagonal bias
                    exact = greedy.gr_delay_exact_component(params, x, y, bound.w)
                    if bound.value < exact - 1e-12:
                        gap_ok = False
                    worst = max(worst, exact - bound.value)
    out.append(
        CheckResult(
            "delay upper bound dominates exact component (attainable diagonal bias)",
            gap_ok and flags_ok,
            f"max overshoot={worst:.2e}; clamp flags consistent={flags_ok}",
        )
    )

    return out


def suite_crossover() -> list[CheckResult]:
    params = links.from_p_mu(0.9, 0.99)
    tc_thr = comparison.throughput_crossover_tc(params, 5, 5)
    tc_del = comparison.delay_crossover_tc(params, 5, 5)
    return [
        CheckResult("throughput crossover in [33, 38]", tc_thr is not None and 33 <= tc_thr <= 38, f"t_c={tc_thr}"),
        CheckResult("delay crossover in [29, 35]", tc_del is not None and 29 <= tc_del <= 35, f"t_c={tc_del}"),
    ]


def suite_ordering() -> list[CheckResult]:
    out = []
    for p in (0.5, 0.9):
        for mu in (0.1, 0.9):
            params = links.from_p_mu(p, mu)
            for tc in (0, 5):
                v = optimal.verify_connected_path_ordering(params, tc, 20)
                out.append(
                    CheckResult(
                        f"connected-path survival strictly decreasing (p={p}, mu={mu}, t_c={tc})",
                        not v,
                        f"{len(v)} violations",
                    )
                )
    return out


def suite_optimal() -> list[CheckResult]:
    """Value iteration fixed points, ordering lemma, greedy argmin attainment."""
    out = []
    for n in (9, 11):
        spec = GridSpec(n, n)
        for p in (0.3, 0.6, 0.9):
            table = optimal.value_iterate_delay(spec, p, tol=1e-12)
            out.append(
                CheckResult(
                    f"value iteration converged ({n}x{n}, p={p})",
                    table.residual < 1e-12,
                    f"{table.iterations} sweeps, residual={table.residual:.1e}",
                )
            )
            ord_v = optimal.check_mean_delay_ordering(table)
            out.append(CheckResult(f"mean-delay node ordering ({n}x{n}, p={p})", not ord_v, f"{len(ord_v)} violations"))
            act_v = optimal.greedy_action_violations(table)
            out.append(CheckResult(f"greedy attains Bellman argmin ({n}x{n}, p={p})", not act_v, f"{len(act_v)} violations"))
            bd = abs(table.d_bar_at(NodeCoord(1, 0)) - 1.0 / p)
            out.append(CheckResult(f"boundary chain D(1,0) == 1/p ({n}x{n}, p={p})", bd <= 1e-9, f"|diff|={bd:.1e}"))
    return out


def suite_intermediate() -> list[CheckResult]:
    out = []
    none_ok = all(optimal.find_best_intermediate(0.9, k, k, "throughput") is None for k in range(2, 9))
    out.append(CheckResult("no relay improves diagonal sources (p=0.9, x=y in 2..8)", none_ok))
    node = optimal.find_best_intermediate(0.7, 1, 10, "throughput")
    out.append(CheckResult("relay strictly improves (1,10) at p=0.7", node is not None, f"relay={node}"))
    return out


def suite_simulation(scale: float = 1.0) -> list[CheckResult]:
    """Monte Carlo agreement checks (slower; ``scale`` shrinks trial counts)."""
    out = []
    n_big = max(1000, int(10**6 * scale))
    n_net = max(200, int(2000 * scale))
    n_gr = max(1000, int(10**5 * scale))

    # stylized bufferless success rate vs per-hop survival product
    ok = True
    worst_z = 0.0
    for mu in (0.0, 0.9, 0.99):
        params = links.from_p_mu(0.9, mu)
        for tc in (0, 5):
            for length in (2, 10):
                est = simulator.run_stylized_scpr_path(params, length, tc, False, n_big, seed=90_001)
                target = scpr.scpr_path_success_prob(params, length, tc)
                z = abs(est.mean - target) / max(est.stderr, 1e-12)
                worst_z = max(worst_z, z)
                ok &= z <= 3.0
    out.append(CheckResult("stylized bufferless MC matches survival product (3 sigma)", ok, f"worst z={worst_z:.2f}"))

    ok = True
    worst_z = 0.0
    for mu in (0.0, 0.5, 0.9, 0.99):
        params = links.from_p_mu(0.9, mu)
        for tc in (0, 5):
            est = simulator.run_stylized_scpr_path(params, 10, tc, True, n_big, seed=90_002)
            target = scpr.scpr_delay_recursion(params, 10, tc)
            z = abs(est.mean - target) / max(est.stderr, 1e-12)
            worst_z = max(worst_z, z)
            ok &= z <= 3.0
    out.append(CheckResult("stylized buffered MC matches delay recursion (3 sigma)", ok, f"worst z={worst_z:.2f}"))

    # full network: SCPR bufferless throughput never beats its upper bound
    spec = GridSpec(100, 100)
    ok = True
    for mu, tc, xy in ((0.0, 5, 5), (0.9, 5, 5), (0.99, 5, 5), (0.99, 35, 5), (0.99, 5, 10)):
        params = links.from_p_mu(0.9, mu)
        est = simulator.estimate(
            spec, params, "scpr", src=NodeCoord(xy, xy), buffered=False, t_c=tc,
            trials=n_net, master_seed=90_003,
        )
        bound = scpr.scpr_throughput_bound(params, xy, xy, tc)
        ok &= est.mean <= bound + 3.0 * est.stderr
    out.append(CheckResult("network SCPR throughput <= analytic bound + 3 sigma", ok))

    # greedy bufferless throughput is memory-independent and matches the formula
    # (distinct seeds: each link is observed once, so a shared stream would
    # make the two memory settings trivially identical)
    target = greedy.gr_throughput(0.9, 5, 5, 0.5)
    means = []
    ok = True
    for mu in (0.0, 0.99):
        params = links.from_p_mu(0.9, mu)
        est = simulator.estimate(
            spec, params, "gr", src=NodeCoord(5, 5), buffered=False,
            tie=greedy.TieBreak(0.5), trials=n_gr, master_seed=90_004 + int(mu * 100),
        )
        means.append(est)
        ok &= abs(est.mean - target) / est.stderr <= 3.0
    joint = math.hypot(means[0].stderr, means[1].stderr)
    ok &= abs(means[0].mean - means[1].mean) <= 3.0 * joint
    out.append(CheckResult("greedy throughput memory-independent and matches formula (3 sigma)", ok))

    # buffered greedy delay below the closed-form upper bound
    ok = True
    for mu in (0.0, 0.5, 0.9, 0.99):
        params = links.from_p_mu(0.9, mu)
        est = simulator.estimate(
            spec, params, "gr", src=NodeCoord(5, 5), buffered=True,
            tie=greedy.TieBreak(0.5), trials=n_net, master_seed=90_005,
        )
        ok &= greedy.gr_delay_upper_bound(params, 5, 5).value >= est.mean - 3.0 * est.stderr
    out.append(CheckResult("greedy delay bound >= network MC - 3 sigma", ok))

    return out


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "analytic": suite_analytic,
    "crossover": suite_crossover,
    "ordering": suite_ordering,
    "optimal": suite_optimal,
    "intermediate": suite_intermediate,
    "simulation": suite_simulation,
}


def run_suites(names: Iterable[str]) -> list[CheckResult]:
    results = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
        results.extend(SUITES[name]())
    return results
