"""Network dimensioning: solve for the base-station density that meets a
worst-case coverage or ergodic-capacity target, sweep metrics over cell
sizes, and compare cooperation orders against no-cooperation baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import NetworkConfig
from .coverage import CoverageQuery, worst_case_ccp, worst_case_ergodic
from .montecarlo import baseline_no_comp

STATUS_SOLVED = "solved"
STATUS_INFEASIBLE = "interference_limited_infeasible"
STATUS_OUT_OF_BRACKET = "out_of_bracket"

DEFAULT_BRACKET = (1.0, 1.0e5)
DEFAULT_MC_TRIALS = 200_000


@dataclass(frozen=True)
class DesignSolution:
    """Result of a density solve: lam is exactly 2 / (3 sqrt(3) d^2)."""

    scheme: str
    metric: str
    target: float
    lam: float
    d: float
    achieved: float
    iterations: int
    status: str
    trials: int | None = None
    mc_tolerance: float | None = None


@dataclass(frozen=True)
class ComparisonRow:
    """Required density of one scheme and its ratios to the baselines."""

    scheme: str
    lam: float | None
    d: float | None
    status: str
    ratio_vs_reuse1: float | None
    ratio_vs_reuse7: float | None


def _scheme_label(cfg: NetworkConfig) -> str:
    if cfg.n == 1:
        return f"no-comp-reuse{cfg.reuse}"
    return f"comp-n{cfg.n}"


class _MetricFn:
    """Worst-case metric as a function of d, analytic or Monte Carlo."""

    def __init__(self, cfg: NetworkConfig, q: CoverageQuery, metric: str,
                 trials: int, master_seed: int, workers: int):
        if metric not in ("ccp", "ergodic"):
            raise ValueError(f"metric must be 'ccp' or 'ergodic', got {metric!r}")
        self.cfg, self.q, self.metric = cfg, q, metric
        self.trials, self.master_seed, self.workers = trials, master_seed, workers
        self.is_mc = cfg.n == 1
        self.last_stderr = 0.0
        self._cache: dict[tuple[float, float], float] = {}

    def __call__(self, d: float, noise_dbm: float | None = None) -> float:
        key = (d, noise_dbm if noise_dbm is not None else self.cfg.noise_power_dbm)
        if key in self._cache:
            return self._cache[key]
        cfg = replace(self.cfg, d=d) if noise_dbm is None else \
            replace(self.cfg, d=d, noise_power_dbm=noise_dbm)
        if self.is_mc:
            est = baseline_no_comp(cfg, self.q, self.trials, self.master_seed,
                                   workers=self.workers, metric=self.metric)
            self.last_stderr = est.stderr
            val = est.mean
        elif self.metric == "ccp":
            val = worst_case_ccp(cfg, self.q)
        else:
            val = worst_case_ergodic(cfg)
        self._cache[key] = val
        return val


def solve_density(cfg_template: NetworkConfig, target: float, q: CoverageQuery,
                  metric: str = "ccp", d_bracket: tuple[float, float] = DEFAULT_BRACKET,
                  rel_tol: float = 1e-4, trials: int = DEFAULT_MC_TRIALS,
                  master_seed: int = 0, workers: int = 1) -> DesignSolution:
    """Smallest BS density whose worst-case metric still meets the target.

    Bisects on the hexagon side d (the metric is smooth and decreasing in
    d).  The dense-network feasibility floor is checked first with the
    noise power set to zero, where the metric no longer depends on d; a
    target above that floor is unreachable at any density.  For the n = 1
    baselines the metric is estimated by simulation and the solve records
    a 3-standard-error tolerance.
    """
    if metric == "ccp" and not 0.0 < target < 1.0:
        raise ValueError(f"coverage target must lie in (0, 1), got {target}")
    if metric == "ergodic" and not target > 0.0:
        raise ValueError(f"capacity target must be positive, got {target}")

    f = _MetricFn(cfg_template, q, metric, trials, master_seed, workers)
    label = _scheme_label(cfg_template)
    trials_out = trials if f.is_mc else None

    def solution(d, achieved, iters, status):
        return DesignSolution(
            scheme=label, metric=metric, target=target,
            lam=2.0 / (3.0 * math.sqrt(3.0) * d * d), d=d, achieved=achieved,
            iterations=iters, status=status, trials=trials_out,
            mc_tolerance=(3.0 * f.last_stderr if f.is_mc else None),
        )

    floor = f(1.0, noise_dbm=-math.inf)
    slack = 3.0 * f.last_stderr if f.is_mc else 0.0
    if floor + slack < target:
        return solution(1.0, floor, 0, STATUS_INFEASIBLE)

    lo, hi = d_bracket
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo >= target and f_hi < target):
        d = lo if f_lo >= target else hi
        return solution(d, f(d), 0, STATUS_OUT_OF_BRACKET)

    iters = 0
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        iters += 1
        if f(mid) >= target:
            lo = mid
        else:
            hi = mid
    return solution(lo, f(lo), iters, STATUS_SOLVED)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    d: float
    lam: float
    ccp: float
    ergodic: float


def sweep_metric(schemes, d_grid, q: CoverageQuery, trials: int = DEFAULT_MC_TRIALS,
                 master_seed: int = 0, workers: int = 1) -> list[SweepRow]:
    """Worst-case CCP and ergodic capacity over a cell-size grid.

    `schemes` is a sequence of NetworkConfig templates (their d is replaced
    by each grid value).  Cooperative schemes are evaluated analytically;
    n = 1 baselines by simulation.
    """
    if len(d_grid) == 0:
        raise ValueError("empty sweep grid")
    rows = []
    for cfg in schemes:
        label = _scheme_label(cfg)
        for d in d_grid:
            c = replace(cfg, d=float(d))
            if c.n == 1:
                ccp = baseline_no_comp(c, q, trials, master_seed, workers=workers).mean
                erg = baseline_no_comp(c, q, trials, master_seed, workers=workers,
                                       metric="ergodic").mean
            else:
                ccp = worst_case_ccp(c, q)
                erg = worst_case_ergodic(c)
            rows.append(SweepRow(scheme=label, d=float(d), lam=1.0 / c.cell_area,
                                 ccp=ccp, ergodic=erg))
    return rows


def compare_orders(cfg_template: NetworkConfig, target: float, q: CoverageQuery,
                   trials: int = DEFAULT_MC_TRIALS, master_seed: int = 0,
                   workers: int = 1) -> list[ComparisonRow]:
    """Required density of each scheme at a common coverage target.

    Solves the n = 1 reuse-1 and reuse-7 baselines by simulation and the
    n = 2 and n = 3 cooperative schemes analytically, then reports the
    density ratios of every scheme against both baselines.  Per-scheme
    infeasibility is reported in the row status, not raised.
    """
    if cfg_template.n != 1:
        cfg_template = replace(cfg_template, n=1, reuse=1)
    variants = [
        replace(cfg_template, n=1, reuse=1),
        replace(cfg_template, n=1, reuse=7),
        replace(cfg_template, n=2, reuse=6),
        replace(cfg_template, n=3, reuse=6),
    ]
    sols = [solve_density(v, target, q, metric="ccp", trials=trials,
                          master_seed=master_seed, workers=workers) for v in variants]
    lam1 = sols[0].lam if sols[0].status == STATUS_SOLVED else None
    lam7 = sols[1].lam if sols[1].status == STATUS_SOLVED else None
    rows = []
    for sol in sols:
        solved = sol.status == STATUS_SOLVED
        rows.append(ComparisonRow(
            scheme=sol.scheme,
            lam=sol.lam if solved else None,
            d=sol.d if solved else None,
            status=sol.status,
            ratio_vs_reuse1=(sol.lam / lam1 if solved and lam1 else None),
            ratio_vs_reuse7=(sol.lam / lam7 if solved and lam7 else None),
        ))
    return rows
