"""Units, power conversions, shadowing constants and Gaussian-tail helpers.

All internal power arithmetic is carried out in watts; dBm and dB appear
only at configuration and reporting boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

LN10 = math.log(10.0)
SQRT3 = math.sqrt(3.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class ConfigError(ValueError):
    """Raised when a network configuration violates its invariants."""


@dataclass(frozen=True)
class PowerW:
    """A non-negative power in watts."""

    watts: float

    def __post_init__(self):
        if not self.watts >= 0.0:
            raise ValueError(f"power must be non-negative, got {self.watts}")

    @property
    def dbm(self) -> float:
        return watts_to_dbm(self.watts)


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and layout parameters of the cellular uplink under study.

    Attributes:
        d: hexagon side length in meters.
        n: cooperation order; 1 is the no-cooperation baseline, 2 and 3 are
            the diamond- and triangle-shaped cooperation regions.
        m: receive antennas per base station.
        alpha: path-loss exponent (> 2, otherwise the interference
            integral diverges).
        sigma_l: lognormal shadowing standard deviation in dB.
        tx_power_dbm: user transmit power in dBm.
        noise_power_dbm: per-antenna noise power in dBm (-inf means
            noiseless, used for interference-limited evaluations).
        reuse: frequency-reuse factor among cooperation regions; must be 6
            for n in {2, 3}, and 1 or 7 for the n = 1 baseline.
        tiers: co-channel interference tiers modeled (1 or 2).
    """

    d: float
    n: int
    m: int = 1
    alpha: float = 4.0
    sigma_l: float = 4.0
    tx_power_dbm: float = 20.0
    noise_power_dbm: float = -100.0
    reuse: int = field(default=0)  # 0 -> pick the default for n
    tiers: int = 1

    def __post_init__(self):
        if self.reuse == 0:
            object.__setattr__(self, "reuse", 6 if self.n in (2, 3) else 1)
        if not self.d > 0:
            raise ConfigError(f"hexagon side d must be positive, got {self.d}")
        if self.n not in (1, 2, 3):
            raise ConfigError(f"cooperation order n must be 1, 2 or 3, got {self.n}")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ConfigError(f"antenna count m must be an integer >= 1, got {self.m}")
        if not self.alpha > 2:
            raise ConfigError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if not self.sigma_l >= 0:
            raise ConfigError(f"sigma_l must be non-negative, got {self.sigma_l}")
        if self.n in (2, 3) and self.reuse != 6:
            raise ConfigError(f"reuse must be 6 when n={self.n}, got {self.reuse}")
        if self.n == 1 and self.reuse not in (1, 7):
            raise ConfigError(f"n=1 baseline needs reuse 1 or 7, got {self.reuse}")
        if self.tiers not in (1, 2):
            raise ConfigError(f"tiers must be 1 or 2, got {self.tiers}")

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power_w(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def sigma_z(self) -> float:
        """Shadowing standard deviation in nats, (0.1 ln 10) * sigma_l."""
        return 0.1 * LN10 * self.sigma_l

    @property
    def shadow_mean_factor(self) -> float:
        """Mean of the linear-scale shadowing, exp(sigma_z^2 / 2)."""
        return math.exp(0.5 * self.sigma_z**2)

    @property
    def cell_area(self) -> float:
        """Hexagonal cell area, 3*sqrt(3)/2 * d^2, in m^2."""
        return 1.5 * SQRT3 * self.d * self.d

    @property
    def bs_density(self) -> float:
        """Base stations per m^2, lambda = 2 / (3*sqrt(3)*d^2)."""
        return 1.0 / self.cell_area


def dbm_to_watts(p_dbm: float) -> float:
    """Convert dBm to watts; -inf maps to exactly 0 W (noiseless limit)."""
    if p_dbm == -math.inf:
        return 0.0
    if not math.isfinite(p_dbm):
        raise ValueError(f"power in dBm must be finite or -inf, got {p_dbm}")
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    """Convert watts to dBm; 0 W maps to -inf."""
    if p_w < 0:
        raise ValueError(f"power must be non-negative, got {p_w}")
    if p_w == 0.0:
        return -math.inf
    return 10.0 * math.log10(p_w) + 30.0


def shadow_scale(sigma_l: float) -> tuple[float, float]:
    """Shadowing scale in nats and the linear-scale mean factor.

    Args:
        sigma_l: shadowing standard deviation in dB, >= 0.

    Returns:
        (sigma_z, mean_factor) with sigma_z = (0.1 ln 10) sigma_l and
        mean_factor = exp(sigma_z^2 / 2), the mean of 10^(-L/10) for
        L ~ N(0, sigma_l^2).
    """
    if sigma_l < 0:
        raise ValueError(f"sigma_l must be non-negative, got {sigma_l}")
    sigma_z = 0.1 * LN10 * sigma_l
    return sigma_z, math.exp(0.5 * sigma_z * sigma_z)


def q_function(x):
    """Gaussian tail probability Q(x) = P{N(0,1) > x}.

    Accepts scalars or arrays; Q(-inf) = 1 and Q(+inf) = 0.
    """
    if np.isscalar(x):
        return 0.5 * math.erfc(x / math.sqrt(2.0))
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def q_integral(x: float) -> float:
    """Closed form of the running integral of the Q-function on [0, x].

    Uses int_0^x Q(t) dt = x Q(x) + (1 - exp(-x^2/2)) / sqrt(2 pi),
    and returns the total tail mass 1/sqrt(2 pi) for x = +inf.
    """
    if x < 0:
        raise ValueError(f"q_integral requires x >= 0, got {x}")
    if math.isinf(x):
        return INV_SQRT_2PI
    return x * q_function(x) + INV_SQRT_2PI * (1.0 - math.exp(-0.5 * x * x))
