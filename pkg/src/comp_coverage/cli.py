"""Command-line front end: every analysis is a subcommand emitting CSV or
JSON with a config/seed audit footer.

Exit codes: 0 success, 2 configuration error, 3 solver infeasibility.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, fields, replace

import numpy as np

from .core import ConfigError, NetworkConfig, watts_to_dbm
from .coverage import (
    CoverageQuery,
    ccp_at_points,
    cr_grid_points,
    ergodic_at_points,
    worst_case_ccp,
    worst_case_ergodic,
)
from .design import STATUS_SOLVED, compare_orders, solve_density, sweep_metric
from .geometry import home_cr, interference_layout, worst_case_points
from .icri import beta_total, icri_avg
from .montecarlo import capacity_samples, estimate_icri

_NETWORK_KEYS = {f.name for f in fields(NetworkConfig)}
_MC_KEYS = {"trials", "seed", "workers"}
_SWEEP_KEYS = {"d_grid", "lambda_grid", "c0_grid"}
_TOP_KEYS = {"network", "mc", "sweep", "output"}

DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20240
DEFAULT_C0 = 0.5


def _fail(code: int, kind: str, detail: str) -> int:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)
    return code


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    for key, allowed in (("", _TOP_KEYS), ("network", _NETWORK_KEYS),
                         ("mc", _MC_KEYS), ("sweep", _SWEEP_KEYS), ("output", {"path"})):
        block = doc if key == "" else doc.get(key, {})
        if not isinstance(block, dict):
            raise ConfigError(f"config section {key or 'root'} must be an object")
        unknown = set(block) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys in {key or 'root'}: {sorted(unknown)}")
    return doc


class _Context:
    """Resolved settings: flag overrides beat the config file beat defaults."""

    def __init__(self, args: argparse.Namespace):
        doc = _load_config(args.config)
        net = dict(doc.get("network", {}))
        for flag, key in (("d", "d"), ("n", "n"), ("m", "m"), ("alpha", "alpha"),
                          ("sigma_l", "sigma_l"), ("tx_power", "tx_power_dbm"),
                          ("noise_power", "noise_power_dbm"), ("reuse", "reuse"),
                          ("tiers", "tiers")):
            val = getattr(args, flag, None)
            if val is not None:
                net[key] = val
        net.setdefault("d", 500.0)
        net.setdefault("n", 2)
        self.network = net

        mc = dict(doc.get("mc", {}))
        if getattr(args, "trials", None) is not None:
            mc["trials"] = args.trials
        if getattr(args, "seed", None) is not None:
            mc["seed"] = args.seed
        if getattr(args, "workers", None) is not None:
            mc["workers"] = args.workers
        self.trials = int(mc.get("trials", DEFAULT_TRIALS))
        self.seed = int(mc.get("seed", DEFAULT_SEED))
        self.workers = int(mc.get("workers", 1))
        if self.trials < 1000:
            raise ConfigError(f"reported results need at least 1000 trials, got {self.trials}")

        self.sweep = doc.get("sweep", {})
        self.out = getattr(args, "out", None) or doc.get("output", {}).get("path")
        self.c0 = getattr(args, "c0", None)
        if self.c0 is None:
            self.c0 = DEFAULT_C0

    def config(self, **overrides) -> NetworkConfig:
        merged = {**self.network, **overrides}
        return NetworkConfig(**merged)

    def d_grid(self) -> list[float]:
        if "d_grid" in self.sweep:
            return [float(v) for v in self.sweep["d_grid"]]
        if "lambda_grid" in self.sweep:
            return [math.sqrt(2.0 / (3.0 * math.sqrt(3.0) * lam))
                    for lam in self.sweep["lambda_grid"]]
        return [500.0, 1000.0, 2000.0]

    def c0_grid(self) -> list[float]:
        if "c0_grid" in self.sweep:
            return [float(v) for v in self.sweep["c0_grid"]]
        return [0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]


def _config_dict(cfg: NetworkConfig) -> dict:
    return {k: (str(v) if isinstance(v, float) and math.isinf(v) else v)
            for k, v in asdict(cfg).items()}


def _footer(cfg: NetworkConfig, seed: int | None, trials: int | None) -> list[str]:
    lines = [f"# config = {json.dumps(_config_dict(cfg), sort_keys=True)}"]
    lines.append(f"# d = {cfg.d:.10g} m; lambda = {cfg.bs_density:.10g} per m^2")
    lines.append(f"# tx_power = {cfg.tx_power_dbm:.10g} dBm ({cfg.tx_power_w:.10g} W); "
                 f"noise_power = {cfg.noise_power_dbm:.10g} dBm ({cfg.noise_power_w:.10g} W)")
    lines.append(f"# sigma_l = {cfg.sigma_l:.10g} dB (sigma_z = {cfg.sigma_z:.10g} nats)")
    if seed is not None:
        lines.append(f"# seed = {seed}; trials = {trials}")
    return lines


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list], footer: list[str]) -> str:
    def fmt(v):
        if isinstance(v, float):
            return f"{v:.10g}"
        return str(v)

    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    lines += footer
    return "\n".join(lines) + "\n"


def _cmd_beta(ctx: _Context, args) -> int:
    alphas = [args.alpha] if args.alpha is not None else [3.0, 3.5, 4.0]
    orders = [args.n] if args.n is not None else [2, 3]
    tiers = args.tiers or 1
    rows = []
    for n in orders:
        for alpha in alphas:
            coeff = beta_total(alpha, n, tiers)
            for tier in range(1, tiers + 1):
                rows.append([alpha, n, tier, coeff.tier_total(tier), coeff.total])
    cfg = ctx.config(n=orders[0], alpha=alphas[0], tiers=tiers)
    _emit(_csv(["alpha", "n", "tier", "beta_j_sum", "beta_total"], rows,
               _footer(cfg, None, None)), ctx.out)
    return 0


def _cmd_icri(ctx: _Context, args) -> int:
    rows = []
    cfg0 = ctx.config()
    for d in ctx.d_grid():
        cfg = ctx.config(d=d)
        analytic = icri_avg(cfg).total_avg
        mc = estimate_icri(cfg, ctx.trials, ctx.seed, workers=ctx.workers)
        mc_total = math.fsum(e.mean for e in mc)
        mc_se = math.sqrt(math.fsum(e.stderr**2 for e in mc))
        rows.append([d, cfg.n, cfg.alpha, analytic.watts, analytic.dbm,
                     mc_total, watts_to_dbm(mc_total), mc_se, ctx.trials])
    _emit(_csv(["d_m", "n", "alpha", "analytic_w", "analytic_dbm",
                "mc_w", "mc_dbm", "mc_stderr_w", "trials"],
               rows, _footer(cfg0, ctx.seed, ctx.trials)), ctx.out)
    return 0


def _cmd_icri_tiers(ctx: _Context, args) -> int:
    rows = []
    cfg0 = ctx.config(tiers=2)
    for d in ctx.d_grid():
        cfg = ctx.config(d=d, tiers=2)
        res = icri_avg(cfg)
        for tier, p in enumerate(res.per_tier, start=1):
            rows.append([d, cfg.n, cfg.alpha, tier, p.watts, p.dbm])
    _emit(_csv(["d_m", "n", "alpha", "tier", "icri_w", "icri_dbm"], rows,
               _footer(cfg0, None, None)), ctx.out)
    return 0


def _cmd_ccp_map(ctx: _Context, args) -> int:
    cfg = ctx.config()
    q = CoverageQuery(ctx.c0)
    pts = cr_grid_points(cfg, args.grid)
    probs = ccp_at_points(cfg, pts, q)
    caps = ergodic_at_points(cfg, pts)
    anchors = np.array([[a.x, a.y] for a in home_cr(cfg).anchors])
    dists = np.linalg.norm(pts[:, None, :] - anchors[None, :, :], axis=2)
    header = (["x_m", "y_m"] + [f"r{k+1}_m" for k in range(cfg.n)]
              + ["ccp", "ergodic_bps_hz"])
    rows = [[*pts[i], *dists[i], probs[i], caps[i]] for i in range(len(pts))]
    footer = _footer(cfg, None, None) + [f"# c0 = {q.c0:.10g} b/s/Hz; grid = {args.grid}"]
    _emit(_csv(header, rows, footer), ctx.out)
    return 0


def _cmd_worst_case(ctx: _Context, args) -> int:
    cfg = ctx.config()
    q = CoverageQuery(ctx.c0)
    pts = worst_case_points(cfg)
    doc = {
        "n": cfg.n,
        "d_m": cfg.d,
        "points": [{"x_m": p.x, "y_m": p.y, "distances_m": list(r)} for p, r in pts],
        "c0": q.c0,
        "worst_case_ccp": worst_case_ccp(cfg, q),
        "worst_case_ergodic_bps_hz": worst_case_ergodic(cfg),
        "config": _config_dict(cfg),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", ctx.out)
    return 0


def _cmd_solve_density(ctx: _Context, args) -> int:
    cfg = ctx.config()
    q = CoverageQuery(ctx.c0)
    sol = solve_density(cfg, args.target, q, metric=args.metric, trials=ctx.trials,
                        master_seed=ctx.seed, workers=ctx.workers)
    doc = {
        "scheme": sol.scheme,
        "metric": sol.metric,
        "lambda_per_m2": sol.lam,
        "d_m": sol.d,
        "target": sol.target,
        "achieved": sol.achieved,
        "status": sol.status,
        "iterations": sol.iterations,
    }
    if sol.trials is not None:
        doc["trials"] = sol.trials
        doc["mc_tolerance"] = sol.mc_tolerance
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", ctx.out)
    if sol.status != STATUS_SOLVED:
        return _fail(3, "infeasible", f"solver status: {sol.status}")
    return 0


def _cmd_sweep(ctx: _Context, args) -> int:
    base = ctx.config()
    schemes = []
    for name in args.schemes.split(","):
        name = name.strip()
        if name == "n2":
            schemes.append(replace(base, n=2, reuse=6))
        elif name == "n3":
            schemes.append(replace(base, n=3, reuse=6))
        elif name == "reuse1":
            schemes.append(replace(base, n=1, reuse=1))
        elif name == "reuse7":
            schemes.append(replace(base, n=1, reuse=7))
        else:
            raise ConfigError(f"unknown scheme {name!r} (use n2, n3, reuse1, reuse7)")
    q = CoverageQuery(ctx.c0)
    rows = sweep_metric(schemes, ctx.d_grid(), q, trials=ctx.trials,
                        master_seed=ctx.seed, workers=ctx.workers)
    out_rows = [[r.scheme, r.d, r.lam, r.ccp, r.ergodic] for r in rows]
    footer = _footer(base, ctx.seed, ctx.trials) + [f"# c0 = {q.c0:.10g} b/s/Hz"]
    _emit(_csv(["scheme", "d_m", "lambda_per_m2", "worst_ccp", "worst_ergodic_bps_hz"],
               out_rows, footer), ctx.out)
    return 0


def _cmd_compare(ctx: _Context, args) -> int:
    cfg = ctx.config()
    q = CoverageQuery(ctx.c0)
    rows = compare_orders(cfg, args.target, q, trials=ctx.trials,
                          master_seed=ctx.seed, workers=ctx.workers)
    out_rows = [[r.scheme, r.lam if r.lam is not None else "",
                 r.d if r.d is not None else "", r.status,
                 r.ratio_vs_reuse1 if r.ratio_vs_reuse1 is not None else "",
                 r.ratio_vs_reuse7 if r.ratio_vs_reuse7 is not None else ""]
                for r in rows]
    footer = _footer(cfg, ctx.seed, ctx.trials) + [
        f"# c0 = {q.c0:.10g} b/s/Hz; target_ccp = {args.target:.10g}"]
    _emit(_csv(["scheme", "lambda_per_m2", "d_m", "status",
                "ratio_vs_reuse1", "ratio_vs_reuse7"], out_rows, footer), ctx.out)
    return 0


def _cmd_validate(ctx: _Context, args) -> int:
    rows = []
    cfg0 = ctx.config()
    for n in (2, 3):
        for alpha in (3.0, 4.0):
            cfg = ctx.config(n=n, alpha=alpha, reuse=6)
            caps = capacity_samples(cfg, ctx.trials, ctx.seed, workers=ctx.workers)
            for c0 in ctx.c0_grid():
                hits = (caps > c0).astype(float)
                stderr = float(hits.std(ddof=1)) / math.sqrt(len(hits))
                analytic = worst_case_ccp(cfg, CoverageQuery(c0))
                rows.append([f"n{n}-a{alpha:g}", c0, analytic, float(hits.mean()),
                             stderr, ctx.trials, ctx.seed])
    _emit(_csv(["scenario_id", "c0", "analytic_ccp", "mc_ccp", "mc_stderr",
                "trials", "seed"], rows, _footer(cfg0, ctx.seed, ctx.trials)), ctx.out)
    return 0


def _cmd_geometry(ctx: _Context, args) -> int:
    if args.action != "dump":
        raise ConfigError(f"unknown geometry action {args.action!r}")
    cfg = ctx.config()
    layout = interference_layout(cfg)
    doc = layout.to_dict()
    doc["home_anchors_d_units"] = [[a.x / cfg.d, a.y / cfg.d]
                                   for a in home_cr(cfg).anchors]
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", ctx.out)
    return 0


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--d", type=float, help="hexagon side length in meters")
    p.add_argument("--n", type=int, help="cooperation order (1, 2 or 3)")
    p.add_argument("--m", type=int, help="receive antennas per BS")
    p.add_argument("--alpha", type=float, help="path-loss exponent")
    p.add_argument("--sigma-l", dest="sigma_l", type=float, help="shadowing std dev, dB")
    p.add_argument("--tx-power", dest="tx_power", type=float, help="user tx power, dBm")
    p.add_argument("--noise-power", dest="noise_power", type=float,
                   help="per-antenna noise power, dBm")
    p.add_argument("--reuse", type=int, help="frequency reuse factor")
    p.add_argument("--tiers", type=int, help="interference tiers modeled (1 or 2)")
    p.add_argument("--c0", type=float, help="target capacity, b/s/Hz")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--workers", type=int, help="parallel workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comp-coverage",
        description="Uplink coverage analysis for CoMP cellular networks "
                    "on a hexagonal grid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("beta", "interference coefficients beta(alpha, n)", _cmd_beta),
        ("icri", "average co-channel interference vs cell size, analytic and MC",
         _cmd_icri),
        ("icri-tiers", "per-tier average interference vs cell size", _cmd_icri_tiers),
        ("ccp-map", "coverage and ergodic-capacity map over the home CR", _cmd_ccp_map),
        ("worst-case", "worst-case points with their CCP and ergodic capacity",
         _cmd_worst_case),
        ("solve-density", "minimum BS density meeting a worst-case target",
         _cmd_solve_density),
        ("sweep", "worst-case metrics over a cell-size grid per scheme", _cmd_sweep),
        ("compare", "required density of each cooperation order vs baselines",
         _cmd_compare),
        ("validate", "analytic CCP against Monte Carlo over a c0 grid", _cmd_validate),
        ("geometry", "geometry exports (action: dump)", _cmd_geometry),
    ]
    for name, help_text, fn in specs:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(fn=fn)
        if name == "ccp-map":
            p.add_argument("--grid", type=int, default=50, help="grid resolution")
        if name in ("solve-density", "compare"):
            p.add_argument("--target", type=float, default=0.5,
                           help="worst-case metric target")
        if name == "solve-density":
            p.add_argument("--metric", choices=("ccp", "ergodic"), default="ccp")
        if name == "sweep":
            p.add_argument("--schemes", default="n2,n3",
                           help="comma list from n2, n3, reuse1, reuse7")
        if name == "geometry":
            p.add_argument("action", choices=["dump"])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _Context(args)
        return args.fn(ctx, args)
    except (ConfigError, ValueError) as exc:
        return _fail(2, "config", str(exc))


if __name__ == "__main__":
    sys.exit(main())
