"""Average inter-cooperation-region interference.

The total average co-channel interference at a BS antenna is
sigma_s^2 * exp(sigma_z^2/2) * beta(alpha, n) * d^(-alpha), where the
dimensionless coefficient beta is the CR-area-normalized integral of the
path-loss kernel (x^2 + y^2)^(-alpha/2) over the co-channel regions in
d units.  beta is evaluated by adaptive quadrature over each polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import NetworkConfig, PowerW
from .geometry import (
    CR_AREA_N2,
    CR_AREA_N3,
    ConvexPolygon,
    InterferenceLayout,
    Point2D,
    interference_layout,
)


class SingularKernelError(ValueError):
    """The integration polygon contains the origin, where the kernel blows up."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive subdivision hit its depth limit before reaching tolerance."""


# embedded pair on the reference triangle: degree-5 (7 points) against
# degree-2 (edge midpoints); barycentric coordinates and weights
_B1 = 0.470142064105115
_A1 = 1.0 - 2.0 * _B1
_B2 = 0.101286507323456
_A2 = 1.0 - 2.0 * _B2
_BARY5 = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_A1, _B1, _B1], [_B1, _A1, _B1], [_B1, _B1, _A1],
    [_A2, _B2, _B2], [_B2, _A2, _B2], [_B2, _B2, _A2],
])
_W5 = np.array([0.225,
                0.132394152788506, 0.132394152788506, 0.132394152788506,
                0.125939180544827, 0.125939180544827, 0.125939180544827])
_BARY2 = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
_W2 = np.array([1 / 3, 1 / 3, 1 / 3])


def _rule(tris: np.ndarray, bary: np.ndarray, w: np.ndarray, alpha: float) -> np.ndarray:
    """Apply a barycentric quadrature rule to a batch of triangles."""
    pts = np.einsum("pb,kbc->kpc", bary, tris)
    r2 = pts[..., 0] ** 2 + pts[..., 1] ** 2
    vals = r2 ** (-0.5 * alpha)
    ab = tris[:, 1] - tris[:, 0]
    ac = tris[:, 2] - tris[:, 0]
    area = 0.5 * np.abs(ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    return area * (vals @ w)


def kernel_integral(poly: ConvexPolygon, alpha: float, tol: float = 1e-8,
                    max_depth: int = 26) -> float:
    """Integral of (x^2+y^2)^(-alpha/2) over a convex polygon, to +-tol.

    The polygon is fan-triangulated from its centroid; each triangle is
    refined by uniform 4-way subdivision wherever the embedded degree-5 /
    degree-2 pair disagrees by more than its share of the error budget.
    """
    if alpha <= 2:
        raise ValueError(f"kernel integral diverges for alpha <= 2, got {alpha}")
    if poly.contains(Point2D(0.0, 0.0)):
        raise SingularKernelError("polygon contains the origin")

    verts = poly.as_array()
    c = verts.mean(axis=0)
    k = len(verts)
    tris = np.stack([np.stack([c, verts[i], verts[(i + 1) % k]]) for i in range(k)])
    tols = np.full(k, tol / k)

    pieces: list[float] = []
    for _ in range(max_depth):
        i5 = _rule(tris, _BARY5, _W5, alpha)
        i2 = _rule(tris, _BARY2, _W2, alpha)
        err = np.abs(i5 - i2)
        done = err <= tols
        pieces.extend(i5[done].tolist())
        if done.all():
            return math.fsum(pieces)
        tris = tris[~done]
        tols = tols[~done] / 4.0
        a, b, cc = tris[:, 0], tris[:, 1], tris[:, 2]
        mab, mbc, mca = 0.5 * (a + b), 0.5 * (b + cc), 0.5 * (cc + a)
        tris = np.concatenate([
            np.stack([a, mab, mca], axis=1),
            np.stack([mab, b, mbc], axis=1),
            np.stack([mca, mbc, cc], axis=1),
            np.stack([mab, mbc, mca], axis=1),
        ])
        tols = np.concatenate([tols, tols, tols, tols])
    raise QuadratureConvergenceError(
        f"quadrature did not converge to {tol} within {max_depth} subdivision levels"
    )


def beta_region(poly: ConvexPolygon, alpha: float, a_cr_normalized: float,
                tol: float = 1e-8) -> float:
    """Interference coefficient of a single co-channel region in d units."""
    return kernel_integral(poly, alpha, tol=tol) / a_cr_normalized


@dataclass(frozen=True)
class IcriCoefficients:
    """Per-region and total interference coefficients beta(alpha, n)."""

    per_region: tuple[float, ...]
    region_tiers: tuple[int, ...]
    total: float
    alpha: float
    n: int
    tiers: int

    def tier_total(self, tier: int) -> float:
        return math.fsum(b for b, t in zip(self.per_region, self.region_tiers) if t == tier)


@lru_cache(maxsize=None)
def _beta_cached(alpha: float, n: int, tiers: int) -> IcriCoefficients:
    layout = interference_layout(NetworkConfig(d=1.0, n=n, alpha=alpha, tiers=tiers))
    return beta_from_layout(layout, alpha, n, tiers)


def beta_from_layout(layout: InterferenceLayout, alpha: float, n: int,
                     tiers: int) -> IcriCoefficients:
    """Evaluate the beta coefficients over an explicit interference layout."""
    a_cr = CR_AREA_N2 if n == 2 else CR_AREA_N3
    betas, tier_of = [], []
    for tier in range(1, tiers + 1):
        polys = layout.tier1 if tier == 1 else layout.tier2
        for poly in polys:
            betas.append(beta_region(poly, alpha, a_cr))
            tier_of.append(tier)
    return IcriCoefficients(per_region=tuple(betas), region_tiers=tuple(tier_of),
                            total=math.fsum(betas), alpha=alpha, n=n, tiers=tiers)


def beta_total(alpha: float, n: int, tiers: int = 1) -> IcriCoefficients:
    """Total interference coefficient beta(alpha, n) over the modeled tiers.

    Results are cached: the coefficients are configuration-independent once
    expressed in d units.
    """
    if n not in (2, 3):
        raise ValueError(f"beta is defined for cooperation orders 2 and 3, got n={n}")
    if tiers not in (1, 2):
        raise ValueError(f"tiers must be 1 or 2, got {tiers}")
    return _beta_cached(float(alpha), int(n), int(tiers))


@dataclass(frozen=True)
class IcriResult:
    """Average co-channel interference at one receive antenna, in watts."""

    total_avg: PowerW
    per_tier: tuple[PowerW, ...]
    config: NetworkConfig


def icri_avg(cfg: NetworkConfig) -> IcriResult:
    """Average total inter-CR interference for a network configuration.

    Evaluates sigma_s^2 * exp(sigma_z^2/2) * beta_tier * d^(-alpha) per
    modeled tier and sums the tiers.
    """
    coeff = beta_total(cfg.alpha, cfg.n, cfg.tiers)
    scale = cfg.tx_power_w * cfg.shadow_mean_factor * cfg.d ** (-cfg.alpha)
    per_tier = tuple(PowerW(scale * coeff.tier_total(t)) for t in range(1, cfg.tiers + 1))
    return IcriResult(total_avg=PowerW(scale * coeff.total), per_tier=per_tier, config=cfg)
