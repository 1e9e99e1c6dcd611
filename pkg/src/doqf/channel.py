"""Fading channel models: gain distributions, densities at zero, path-loss geometry.

A link gain is G = |H|^2 where H is the complex channel amplitude.  Everything
downstream (outage gains, Monte Carlo, DMT) only needs two things from a link:
the value of the gain density at 0+ and the ability to draw gains reproducibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

RAYLEIGH = "rayleigh"
RICE = "rice"


@dataclass(frozen=True)
class ChannelModel:
    """Distribution of one link's power gain G = |H|^2.

    kind     -- "rayleigh" or "rice"
    sigma2   -- variance sigma^2 of the complex amplitude (scatter power)
    mean_mag -- |m|, magnitude of the deterministic line-of-sight component
                (must be 0 for Rayleigh)
    """

    kind: str
    sigma2: float
    mean_mag: float = 0.0

    def __post_init__(self):
        if self.kind not in (RAYLEIGH, RICE):
            raise ValueError(f"unknown channel kind: {self.kind!r}")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if self.mean_mag < 0:
            raise ValueError("mean_mag must be nonnegative")
        if self.kind == RAYLEIGH and self.mean_mag != 0.0:
            raise ValueError("a Rayleigh link has no line-of-sight component; mean_mag must be 0")

    @property
    def mean_gain(self) -> float:
        """E[G] = sigma^2 + |m|^2."""
        return self.sigma2 + self.mean_mag**2


def rayleigh(sigma2) -> ChannelModel:
    return ChannelModel(RAYLEIGH, float(sigma2))


def rice(mean_mag, sigma2) -> ChannelModel:
    return ChannelModel(RICE, float(sigma2), float(mean_mag))


def density_at_zero(model: ChannelModel) -> float:
    """Value c = f_G(0+) of the gain density at zero.

    Rayleigh: G ~ Exp(mean sigma^2), so f_G(0+) = 1/sigma^2.
    Rice: f_G(x) = exp(-(x+|m|^2)/sigma^2) I0(2|m| sqrt(x)/sigma^2) / sigma^2,
    whose value at x=0 is exp(-|m|^2/sigma^2)/sigma^2 since I0(0)=1.

    This single number drives the whole high-SNR outage theory: every outage
    gain below is a polynomial in the c's of the three links.
    """
    if model.kind == RAYLEIGH:
        return 1.0 / model.sigma2
    return math.exp(-model.mean_mag**2 / model.sigma2) / model.sigma2


def sample_gains(model: ChannelModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n i.i.d. gains from the model using the given generator.

    Rayleigh gains come straight from the exponential sampler.  Rice gains are
    built in the complex-amplitude domain — real part N(|m|, sigma^2/2) then
    imaginary part N(0, sigma^2/2), in that fixed order — which is exact and
    avoids any quadrature of the Bessel density.  The draw order is part of the
    determinism contract: same (model, generator state, n) means same array.
    """
    if model.kind == RAYLEIGH:
        return rng.exponential(scale=model.sigma2, size=n)
    s = math.sqrt(model.sigma2 / 2.0)
    re = rng.normal(loc=model.mean_mag, scale=s, size=n)
    im = rng.normal(loc=0.0, scale=s, size=n)
    return re * re + im * im


def sample_gain(model: ChannelModel, rng: np.random.Generator) -> float:
    """One gain draw (see sample_gains for the distribution and draw order)."""
    return float(sample_gains(model, rng, 1)[0])


@dataclass(frozen=True)
class NetworkGeometry:
    """Source(0) / relay(1) / destination(2) distances and the path-loss law.

    Link variances follow sigma^2_ij = C * d_ij^(-exponent).  When C is not
    given it is auto-normalized to d02^exponent so that the direct link has
    unit variance (sigma^2_02 = 1), the normalization used throughout the
    numerical setup here.
    """

    d01: float
    d12: float
    d02: float
    exponent: float = 3.0
    C: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("d01", "d12", "d02"):
            if not getattr(self, name) > 0:
                raise ValueError(f"distance {name} must be positive")
        if self.C is None:
            object.__setattr__(self, "C", float(self.d02) ** self.exponent)
        elif not self.C > 0:
            raise ValueError("normalization constant C must be positive")

    def sigma2(self, distance: float) -> float:
        return self.C * float(distance) ** (-self.exponent)


def geometry_to_models(geom: NetworkGeometry) -> tuple[ChannelModel, ChannelModel, ChannelModel]:
    """Rayleigh models for the three links, returned in (01, 12, 02) order."""
    return (
        rayleigh(geom.sigma2(geom.d01)),
        rayleigh(geom.sigma2(geom.d12)),
        rayleigh(geom.sigma2(geom.d02)),
    )
