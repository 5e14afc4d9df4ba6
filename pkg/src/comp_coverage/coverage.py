"""Analytic capacity coverage: moment-matched lognormal SINR, per-point and
worst-case coverage probability, ergodic capacity, sum coverage and the
CR-averaged coverage probability.

The uplink SINR with average-interference substitution decomposes into a
sum over cooperating BSs of gamma-distributed small-scale power terms
times lognormal shadowing/path-loss terms; matching first and second raw
moments fits a single lognormal to that sum.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .core import INV_SQRT_2PI, ConfigError, NetworkConfig, q_function
from .geometry import home_cr, worst_case_points
from .icri import icri_avg


class MomentUnderflowError(ArithmeticError):
    """Moment matching degenerated (gamma2 <= gamma1^2), typically because
    theta underflowed at an extreme cell size."""


class _ClampMonitor:
    """Counts probability/capacity clamping events; never silently clamps."""

    def __init__(self):
        self._lock = threading.Lock()
        self.count = 0

    def record(self, events: int):
        if events:
            with self._lock:
                self.count += events

    def reset(self):
        with self._lock:
            self.count = 0


clamp_monitor = _ClampMonitor()


def _clamp_probability(p):
    clipped = np.clip(p, 0.0, 1.0)
    clamp_monitor.record(int(np.count_nonzero(clipped != p)))
    return clipped


@dataclass(frozen=True)
class CoverageQuery:
    """A target capacity c0 in b/s/Hz; the SINR threshold depends on the
    cooperation order via T = 2^(n c0) - 1."""

    c0: float

    def __post_init__(self):
        if not self.c0 >= 0:
            raise ValueError(f"target capacity must be non-negative, got {self.c0}")

    def threshold(self, n: int) -> float:
        return 2.0 ** (n * self.c0) - 1.0


@dataclass(frozen=True)
class SinrDecomposition:
    """Parameters of the per-BS gamma x lognormal SINR terms.

    Each of the n cooperating BSs contributes xi_k * z_k where
    xi_k ~ Gamma(kappa = m, theta) and z_k is lognormal with location
    mu_z[k] = -alpha ln r_k and scale sigma_z in nats.  All entries share
    (kappa, theta, sigma_z); c = theta / 2 is the per-degree-of-freedom
    scale of the underlying chi-squared fading power.
    """

    kappa: int
    theta: float
    sigma_z: float
    mu_z: tuple[float, ...]
    distances: tuple[float, ...]

    @property
    def c(self) -> float:
        return 0.5 * self.theta


@dataclass(frozen=True)
class LognormalSinr:
    """Single-lognormal fit of the SINR: location/scale in nats plus the
    matched first and second raw moments (linear SINR units)."""

    mu: float
    sigma: float
    gamma1: float
    gamma2: float


def decompose(cfg: NetworkConfig, r) -> SinrDecomposition:
    """Gamma/lognormal decomposition of the SINR at BS distances r.

    theta uses the average-interference denominator: theta =
    sigma_s^2 / (sigma_n^2 + avg total inter-CR interference).
    """
    r = tuple(float(v) for v in np.atleast_1d(np.asarray(r, dtype=float)))
    if len(r) != cfg.n:
        raise ConfigError(f"expected {cfg.n} distances, got {len(r)}")
    if any(v <= 0 for v in r):
        raise ValueError(f"BS distances must be positive, got {r}")
    interference = icri_avg(cfg).total_avg.watts
    theta = cfg.tx_power_w / (cfg.noise_power_w + interference)
    mu_z = tuple(-cfg.alpha * math.log(v) for v in r)
    return SinrDecomposition(kappa=cfg.m, theta=theta, sigma_z=cfg.sigma_z,
                             mu_z=mu_z, distances=r)


def moment_match(dec: SinrDecomposition) -> LognormalSinr:
    """Fit a single lognormal to the SINR by matching its first two moments.

    gamma1 = sum_k E{xi} exp(mu_z[k] + sigma_z^2/2) and gamma2 adds the
    squared terms E{xi^2} exp(2 mu_z + 2 sigma_z^2) plus all i != j cross
    moments; then mu = 2 ln gamma1 - ln(gamma2)/2 and
    sigma^2 = ln gamma2 - 2 ln gamma1.
    """
    k, th, sz = dec.kappa, dec.theta, dec.sigma_z
    e_xi = k * th
    e_xi2 = k * (1 + k) * th * th
    z_mean = [math.exp(m + 0.5 * sz * sz) for m in dec.mu_z]
    g1 = math.fsum(e_xi * zm for zm in z_mean)
    square = math.fsum(e_xi2 * math.exp(2 * m + 2 * sz * sz) for m in dec.mu_z)
    s1 = math.fsum(z_mean)
    cross_sum = s1 * s1 - math.fsum(zm * zm for zm in z_mean)
    g2 = square + e_xi * e_xi * cross_sum
    if not (g1 > 0 and math.isfinite(g1) and math.isfinite(g2)) or g2 <= g1 * g1:
        raise MomentUnderflowError(
            f"moment matching failed (gamma1={g1}, gamma2={g2}); "
            "theta likely underflowed at this cell size"
        )
    mu = 2.0 * math.log(g1) - 0.5 * math.log(g2)
    sigma2 = math.log(g2) - 2.0 * math.log(g1)
    return LognormalSinr(mu=mu, sigma=math.sqrt(sigma2), gamma1=g1, gamma2=g2)


def _fit(cfg: NetworkConfig, r) -> LognormalSinr:
    return moment_match(decompose(cfg, r))


def ccp_point(cfg: NetworkConfig, r, q: CoverageQuery) -> float:
    """Capacity coverage probability of a user at BS distances r.

    Q((ln T - mu) / sigma) with T = 2^(n c0) - 1; c0 = 0 returns 1 exactly.
    """
    if q.c0 == 0.0:
        return 1.0
    fit = _fit(cfg, r)
    z = (math.log(q.threshold(cfg.n)) - fit.mu) / fit.sigma
    return float(_clamp_probability(q_function(z)))


def ergodic_point(cfg: NetworkConfig, r, exact_threshold: bool = False) -> float:
    """Ergodic capacity in b/s/Hz of a user at BS distances r.

    The closed form integrates the coverage curve with the threshold
    softened to ln(2^(n c0)) = n c0 ln 2.  With exact_threshold=True the
    unsoftened integrand ln(2^(n c0) - 1) is integrated numerically
    instead, as a diagnostic of the softening gap.
    """
    fit = _fit(cfg, r)
    n = cfg.n
    if exact_threshold:
        from scipy.integrate import quad

        def integrand(c0):
            t = 2.0 ** (n * c0) - 1.0
            return q_function((math.log(t) - fit.mu) / fit.sigma)

        val, _ = quad(integrand, 0.0, 80.0 / n, limit=200)
        return float(val)
    x = fit.mu / fit.sigma
    bracket = INV_SQRT_2PI * math.exp(-0.5 * x * x) - x * q_function(x)
    cap = (fit.mu + fit.sigma * bracket) / (n * math.log(2.0))
    if cap < 0.0:
        clamp_monitor.record(1)
        cap = 0.0
    return cap


def sum_ccp(cfg: NetworkConfig, users, q: CoverageQuery) -> float:
    """Coverage probability of the per-CR sum capacity for several users.

    The product of the per-user lognormal SINRs is lognormal with summed
    locations and summed variances; a single user reduces exactly to
    ccp_point.
    """
    if len(users) == 0:
        raise ValueError("sum_ccp needs at least one user")
    if q.c0 == 0.0:
        return 1.0
    fits = [_fit(cfg, r) for r in users]
    mu = math.fsum(f.mu for f in fits)
    sigma = math.sqrt(math.fsum(f.sigma**2 for f in fits))
    z = (math.log(q.threshold(cfg.n)) - mu) / sigma
    return float(_clamp_probability(q_function(z)))


def worst_case_ccp(cfg: NetworkConfig, q: CoverageQuery) -> float:
    """Coverage probability at the CR's worst-case point(s)."""
    _, rvec = worst_case_points(cfg)[0]
    return ccp_point(cfg, rvec, q)


def worst_case_ergodic(cfg: NetworkConfig) -> float:
    """Ergodic capacity at the CR's worst-case point(s)."""
    _, rvec = worst_case_points(cfg)[0]
    return ergodic_point(cfg, rvec)


def _moment_grid(cfg: NetworkConfig, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (mu, sigma) of the lognormal fit at many user positions.

    points: (K, 2) Cartesian positions inside the home CR, in meters.
    """
    anchors = np.array([[a.x, a.y] for a in home_cr(cfg).anchors])
    rr = np.linalg.norm(points[:, None, :] - anchors[None, :, :], axis=2)
    if np.any(rr <= 0):
        raise ValueError("grid point coincides with an anchor BS")
    interference = icri_avg(cfg).total_avg.watts
    theta = cfg.tx_power_w / (cfg.noise_power_w + interference)
    mf = cfg.shadow_mean_factor
    m = cfg.m
    ra = rr ** (-cfg.alpha)
    s1 = ra.sum(axis=1)
    s2 = (ra * ra).sum(axis=1)
    g1 = m * theta * mf * s1
    g2 = (m * (1 + m) * theta * theta * mf**4 * s2
          + (m * theta * mf) ** 2 * (s1 * s1 - s2))
    if np.any(g2 <= g1 * g1) or not np.all(np.isfinite(g2)):
        raise MomentUnderflowError("moment matching failed on the grid")
    mu = 2.0 * np.log(g1) - 0.5 * np.log(g2)
    sigma = np.sqrt(np.log(g2) - 2.0 * np.log(g1))
    return mu, sigma


def ccp_at_points(cfg: NetworkConfig, points: np.ndarray, q: CoverageQuery) -> np.ndarray:
    """Coverage probability at many positions inside the home CR."""
    if q.c0 == 0.0:
        return np.ones(len(points))
    mu, sigma = _moment_grid(cfg, points)
    lnt = math.log(q.threshold(cfg.n))
    return _clamp_probability(q_function((lnt - mu) / sigma))


def ergodic_at_points(cfg: NetworkConfig, points: np.ndarray) -> np.ndarray:
    """Ergodic capacity at many positions inside the home CR."""
    mu, sigma = _moment_grid(cfg, points)
    x = mu / sigma
    bracket = INV_SQRT_2PI * np.exp(-0.5 * x * x) - x * q_function(x)
    return (mu + sigma * bracket) / (cfg.n * math.log(2.0))


def _subtriangle_centroids(a, b, c, resolution: int) -> np.ndarray:
    """Centroids of the resolution^2 congruent sub-triangles of (a, b, c)."""
    ii, jj = np.meshgrid(np.arange(resolution), np.arange(resolution), indexing="ij")
    up = (ii + jj <= resolution - 1)
    down = (ii + jj <= resolution - 2)
    f = 1.0 / (3.0 * resolution)
    coords = [
        np.stack([(3 * ii[up] + 1) * f, (3 * jj[up] + 1) * f], axis=1),
        np.stack([(3 * ii[down] + 2) * f, (3 * jj[down] + 2) * f], axis=1),
    ]
    uv = np.concatenate(coords)
    return a + uv[:, :1] * (b - a) + uv[:, 1:] * (c - a)


def cr_grid_points(cfg: NetworkConfig, resolution: int) -> np.ndarray:
    """Equal-area cell centers covering the home CR, for coverage maps.

    The triangular CR is split into resolution^2 congruent cells; the
    diamond CR into 2 resolution^2 (one set per half along the BS-BS
    diagonal).
    """
    if resolution < 1:
        raise ValueError(f"resolution must be positive, got {resolution}")
    verts = home_cr(cfg).polygon.as_array()
    if cfg.n == 3:
        tris = [(verts[0], verts[1], verts[2])]
    else:  # diamond vertices are ordered (anchor, apex, anchor, apex)
        a1, apex1, a2, apex2 = verts
        tris = [(a1, apex1, a2), (a1, a2, apex2)]
    return np.concatenate([_subtriangle_centroids(a, b, c, resolution)
                           for a, b, c in tris])


def average_ccp(cfg: NetworkConfig, q: CoverageQuery, resolution: int = 64) -> float:
    """CR-averaged coverage probability under a uniform user distribution.

    Midpoint quadrature over a uniform triangular refinement of the home
    CR; the fan triangles from the centroid have equal areas for both CR
    shapes, so an unweighted mean over sub-triangle centroids is the
    uniform-density average.
    """
    if resolution < 32:
        raise ValueError(f"resolution must be at least 32, got {resolution}")
    poly = home_cr(cfg).polygon
    verts = poly.as_array()
    center = verts.mean(axis=0)
    values = []
    for k in range(len(verts)):
        pts = _subtriangle_centroids(center, verts[k], verts[(k + 1) % len(verts)],
                                     resolution)
        values.append(ccp_at_points(cfg, pts, q))
    return float(np.mean(np.concatenate(values)))


def interference_limited(cfg: NetworkConfig, ratio_threshold: float = 100.0) -> bool:
    """True when average inter-CR interference exceeds the noise power by
    more than ratio_threshold (strict inequality)."""
    interference = icri_avg(cfg).total_avg.watts
    noise = cfg.noise_power_w
    if noise == 0.0:
        return interference > 0.0
    return interference / noise > ratio_threshold
