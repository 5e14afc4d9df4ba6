"""Monte Carlo ground truth: instantaneous channels, co-channel interferers
and MRC SINR, used to validate every analytic quantity and to provide the
no-cooperation baselines.

Determinism contract: trials are partitioned into fixed-size blocks; block
b of master seed s draws from a Philox stream keyed by (s, b), and results
reduce in block order.  Estimates are therefore identical for any worker
count, and trial t of a run is exactly reproducible in isolation.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import SQRT3, ConfigError, NetworkConfig
from .geometry import InterferenceLayout, Point2D, home_cr, interference_layout, worst_case_points
from .coverage import CoverageQuery

BLOCK_SIZE = 8192
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class TrialSeed:
    """Addresses one trial of one experiment: (master seed, trial index)."""

    master: int
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"trial index must be non-negative, got {self.index}")


@dataclass(frozen=True)
class ChannelSample:
    """One trial's channels: desired-user vector h (length n*m), interferer
    matrix g (n*m x n_interferers) and the interferer positions in meters."""

    h: np.ndarray
    g: np.ndarray
    interferer_positions: np.ndarray
    user_position: np.ndarray


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo statistic with its standard error and provenance."""

    mean: float
    stderr: float
    trials: int
    elapsed: float
    master_seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("an estimate needs at least one trial")


def _rng(master: int, block: int) -> np.random.Generator:
    key = np.array([master & _MASK64, block & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _PolygonSampler:
    """Uniform sampling over a convex polygon via its fan triangulation."""

    def __init__(self, vertices: np.ndarray):
        c = vertices.mean(axis=0)
        tris = []
        for k in range(len(vertices)):
            tris.append([c, vertices[k], vertices[(k + 1) % len(vertices)]])
        self.tris = np.asarray(tris)
        ab = self.tris[:, 1] - self.tris[:, 0]
        ac = self.tris[:, 2] - self.tris[:, 0]
        areas = 0.5 * np.abs(ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
        self.cum = np.cumsum(areas / areas.sum())

    def draw(self, g: np.random.Generator, count: int) -> np.ndarray:
        u0 = g.random(count)
        u1 = g.random(count)
        u2 = g.random(count)
        idx = np.searchsorted(self.cum, u0, side="right").clip(max=len(self.cum) - 1)
        a = self.tris[idx, 0]
        b = self.tris[idx, 1]
        c = self.tris[idx, 2]
        s = np.sqrt(u1)[:, None]
        t = u2[:, None]
        return (1.0 - s) * a + s * (1.0 - t) * b + s * t * c


class _Scenario:
    """Geometry and powers for a CoMP or baseline uplink experiment."""

    def __init__(self, cfg: NetworkConfig, layout: InterferenceLayout | None = None):
        self.cfg = cfg
        if cfg.n in (2, 3):
            lay = layout if layout is not None else interference_layout(cfg)
            if lay.n != cfg.n:
                raise ConfigError(f"layout order {lay.n} does not match config n={cfg.n}")
            polys = lay.polygons(cfg.tiers)
            self.bs = np.array([[a.x, a.y] for a in home_cr(cfg).anchors])
            self.samplers = [_PolygonSampler(p.scaled(cfg.d).as_array()) for p in polys]
            self.prelog = 1.0 / cfg.n
        elif cfg.reuse == 1:
            self.bs = np.zeros((1, 2))
            centers, _ = _cochannel_hexagons(cfg.d)
            self.samplers = [_PolygonSampler(_hexagon(c, cfg.d)) for c in centers]
            self.prelog = 1.0
        else:  # reuse-7 baseline: co-channel cells beyond the modeled ring
            self.bs = np.zeros((1, 2))
            self.samplers = []
            self.prelog = 1.0 / 7.0


def _hexagon(center: np.ndarray, d: float) -> np.ndarray:
    ang = np.arange(6) * (math.pi / 3.0)
    return center + d * np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _cochannel_hexagons(d: float) -> tuple[list[np.ndarray], list[int]]:
    """Centers of the two surrounding tiers of co-channel cells (6 + 12)."""
    u = np.array([1.5, 0.5 * SQRT3]) * d
    v = np.array([1.5, -0.5 * SQRT3]) * d
    entries = []
    for i in range(-2, 3):
        for j in range(-2, 3):
            ring = (abs(i) + abs(j) + abs(i + j)) // 2
            if (i, j) == (0, 0) or ring > 2:
                continue
            c = i * u + j * v
            entries.append((round(float(np.linalg.norm(c)), 9),
                            round(math.atan2(c[1], c[0]), 9), c, ring))
    entries.sort(key=lambda e: (e[0], e[1]))
    return [e[2] for e in entries], [min(e[3], 2) for e in entries]


def _default_position(cfg: NetworkConfig) -> np.ndarray:
    if cfg.n in (2, 3):
        p, _ = worst_case_points(cfg)[0]
        return p.as_array()
    return np.array([cfg.d, 0.0])  # hexagon vertex, the n = 1 worst case


def _block_channels(sc: _Scenario, pos: np.ndarray, g: np.random.Generator, count: int):
    """Draw one block of channels in the canonical order.

    Returns (h2, gsum2, positions, h, gmat): squared magnitudes used by the
    SINR, plus the complex channels for single-trial inspection.
    """
    cfg = sc.cfg
    n, m = len(sc.bs), cfg.m
    rk = np.linalg.norm(sc.bs - pos, axis=1)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    # desired user: one shadowing draw per BS (shared by that BS's antennas),
    # then i.i.d. Rayleigh per antenna
    shadows = [g.standard_normal(count) * cfg.sigma_l for _ in range(n)]
    h = np.empty((count, n * m), dtype=complex)
    for k in range(n):
        x = g.standard_normal((count, m))
        y = g.standard_normal((count, m))
        hbar = (x + 1j * y) * inv_sqrt2
        amp = rk[k] ** (-0.5 * cfg.alpha) * 10.0 ** (-shadows[k] / 20.0)
        h[:, k * m:(k + 1) * m] = hbar * amp[:, None]

    # one interferer per co-channel region
    n_i = len(sc.samplers)
    gmat = np.zeros((count, n * m, n_i), dtype=complex)
    positions = np.empty((count, n_i, 2))
    for j, sampler in enumerate(sc.samplers):
        pts = sampler.draw(g, count)
        positions[:, j, :] = pts
        dist = np.linalg.norm(pts[:, None, :] - sc.bs[None, :, :], axis=2)
        for k in range(n):
            lshadow = g.standard_normal(count) * cfg.sigma_l
            x = g.standard_normal((count, m))
            y = g.standard_normal((count, m))
            gbar = (x + 1j * y) * inv_sqrt2
            amp = dist[:, k] ** (-0.5 * cfg.alpha) * 10.0 ** (-lshadow / 20.0)
            gmat[:, k * m:(k + 1) * m, j] = gbar * amp[:, None]

    h2 = (h.real**2 + h.imag**2)
    gsum2 = (gmat.real**2 + gmat.imag**2).sum(axis=2)
    return h2, gsum2, positions, h, gmat


def _block_capacities(sc: _Scenario, pos: np.ndarray, master: int,
                      block: int) -> np.ndarray:
    # blocks are always drawn at full size so that trial t's draws do not
    # depend on the total trial count of the run
    g = _rng(master, block)
    h2, gsum2, _, _, _ = _block_channels(sc, pos, g, BLOCK_SIZE)
    return _capacity_from_powers(sc, h2, gsum2)


def _capacity_from_powers(sc: _Scenario, h2: np.ndarray, gsum2: np.ndarray) -> np.ndarray:
    cfg = sc.cfg
    gdiag = cfg.noise_power_w + cfg.tx_power_w * gsum2
    hh = h2.sum(axis=1)
    hgh = (h2 * gdiag).sum(axis=1)
    # zero noise with no interferers is a valid limit: SINR = +inf
    with np.errstate(divide="ignore"):
        sinr = cfg.tx_power_w * hh * hh / hgh
        return sc.prelog * np.log2(1.0 + sinr)


def _collect(sc: _Scenario, pos: np.ndarray, trials: int, master: int,
             workers: int) -> np.ndarray:
    """Capacity samples for trials 0..trials-1, identical for any worker count."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    blocks = [(b, min(BLOCK_SIZE, trials - b * BLOCK_SIZE))
              for b in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE)]
    out = np.empty(trials)

    def run(entry):
        b, count = entry
        out[b * BLOCK_SIZE:b * BLOCK_SIZE + count] = \
            _block_capacities(sc, pos, master, b)[:count]

    if workers <= 1:
        for entry in blocks:
            run(entry)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))
    return out


def capacity_samples(cfg: NetworkConfig, trials: int, master_seed: int,
                     position=None, layout: InterferenceLayout | None = None,
                     workers: int = 1) -> np.ndarray:
    """Per-trial capacities (1/n) log2(1 + SINR), one entry per trial.

    This is the sample stream behind estimate_ccp and estimate_ergodic;
    exposing it lets callers evaluate many thresholds on one run.
    """
    sc = _Scenario(cfg, layout)
    pos = _default_position(cfg) if position is None else np.asarray(
        [position.x, position.y] if isinstance(position, Point2D) else position,
        dtype=float)
    return _collect(sc, pos, trials, master_seed, workers)


def sample_trial(cfg: NetworkConfig, layout: InterferenceLayout, position,
                 seed: TrialSeed) -> ChannelSample:
    """Channels of a single trial, reproducible from (master seed, index).

    The trial is re-derived from its block's stream, so it matches the
    corresponding trial of any estimate run with the same master seed.
    """
    sc = _Scenario(cfg, layout)
    pos = np.asarray([position.x, position.y]) if isinstance(position, Point2D) \
        else np.asarray(position, dtype=float)
    if not home_cr(cfg).polygon.contains(Point2D(*pos)):
        raise ValueError(f"user position {pos} is outside the home CR")
    block, offset = divmod(seed.index, BLOCK_SIZE)
    g = _rng(seed.master, block)
    _, _, positions, h, gmat = _block_channels(sc, pos, g, BLOCK_SIZE)
    return ChannelSample(h=h[offset], g=gmat[offset],
                         interferer_positions=positions[offset], user_position=pos)


def sinr_instant(sample: ChannelSample, cfg: NetworkConfig) -> float:
    """MRC SINR of one trial: sigma_s^2 (h^H h)^2 / (h^H G h) with
    G = diag(sigma_n^2 + sigma_s^2 sum_j |g_ij|^2)."""
    h2 = (sample.h.real**2 + sample.h.imag**2)
    gdiag = cfg.noise_power_w + cfg.tx_power_w * (sample.g.real**2 + sample.g.imag**2).sum(axis=1)
    hh = h2.sum()
    return float(cfg.tx_power_w * hh * hh / (h2 * gdiag).sum())


def _finalize(values: np.ndarray, master: int, t0: float) -> McEstimate:
    n = len(values)
    std = float(values.std(ddof=1)) if n > 1 else 0.0
    return McEstimate(mean=float(values.mean()), stderr=std / math.sqrt(n),
                      trials=n, elapsed=time.perf_counter() - t0, master_seed=master)


def estimate_ccp(cfg: NetworkConfig, q: CoverageQuery, trials: int, master_seed: int,
                 position=None, layout: InterferenceLayout | None = None,
                 workers: int = 1) -> McEstimate:
    """Empirical capacity coverage probability at a position (default: the
    worst-case point)."""
    t0 = time.perf_counter()
    caps = capacity_samples(cfg, trials, master_seed, position, layout, workers)
    return _finalize((caps > q.c0).astype(float), master_seed, t0)


def estimate_ergodic(cfg: NetworkConfig, trials: int, master_seed: int,
                     position=None, layout: InterferenceLayout | None = None,
                     workers: int = 1) -> McEstimate:
    """Empirical mean capacity (1/n) log2(1 + SINR) at a position."""
    t0 = time.perf_counter()
    caps = capacity_samples(cfg, trials, master_seed, position, layout, workers)
    return _finalize(caps, master_seed, t0)


def estimate_icri(cfg: NetworkConfig, trials: int, master_seed: int,
                  layout: InterferenceLayout | None = None,
                  workers: int = 1) -> tuple[McEstimate, ...]:
    """Empirical average co-channel interference power per tier, measured at
    one antenna of the origin BS (one uniform interferer per region)."""
    if cfg.n not in (2, 3):
        raise ConfigError(f"estimate_icri applies to CoMP orders 2 and 3, got n={cfg.n}")
    t0 = time.perf_counter()
    lay = layout if layout is not None else interference_layout(cfg)
    polys = lay.polygons(cfg.tiers)
    tiers = ([1] * len(lay.tier1) + [2] * len(lay.tier2))[: len(polys)]
    samplers = [_PolygonSampler(p.scaled(cfg.d).as_array()) for p in polys]

    blocks = [(b, min(BLOCK_SIZE, trials - b * BLOCK_SIZE))
              for b in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE)]
    power = np.zeros((trials, cfg.tiers))

    def run(entry):
        b, count = entry
        g = _rng(master_seed, b)
        block_power = np.zeros((BLOCK_SIZE, cfg.tiers))
        for sampler, tier in zip(samplers, tiers):
            pts = sampler.draw(g, BLOCK_SIZE)
            dist = np.linalg.norm(pts, axis=1)  # to the origin BS
            lshadow = g.standard_normal(BLOCK_SIZE) * cfg.sigma_l
            x = g.standard_normal(BLOCK_SIZE)
            y = g.standard_normal(BLOCK_SIZE)
            ray2 = 0.5 * (x * x + y * y)
            block_power[:, tier - 1] += (cfg.tx_power_w * dist ** (-cfg.alpha)
                                         * 10.0 ** (-lshadow / 10.0) * ray2)
        power[b * BLOCK_SIZE:b * BLOCK_SIZE + count] = block_power[:count]

    if workers <= 1:
        for entry in blocks:
            run(entry)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))
    return tuple(_finalize(power[:, t], master_seed, t0) for t in range(cfg.tiers))


def baseline_no_comp(cfg: NetworkConfig, q: CoverageQuery, trials: int, master_seed: int,
                     workers: int = 1, metric: str = "ccp") -> McEstimate:
    """No-cooperation baseline at the cell's worst-case point (a hexagon
    vertex at distance d).

    reuse-1 models one uniform interferer in each of the 18 surrounding
    co-channel cells (two tiers); reuse-7 models no interference and a
    pre-log factor of 1/7.
    """
    if cfg.n != 1:
        raise ConfigError(f"baseline requires n=1, got n={cfg.n}")
    t0 = time.perf_counter()
    sc = _Scenario(cfg)
    caps = _collect(sc, _default_position(cfg), trials, master_seed, workers)
    if metric == "ccp":
        return _finalize((caps > q.c0).astype(float), master_seed, t0)
    if metric == "ergodic":
        return _finalize(caps, master_seed, t0)
    raise ValueError(f"metric must be 'ccp' or 'ergodic', got {metric!r}")
