"""Shared parameter containers, importance-vector validation and presets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "ChannelParams",
    "SplitSolution",
    "importance_vector",
    "aggregate_pairs",
    "PRESETS",
]

_STRICT_GAP = 1e-12
_SUM_TOL = 1e-12
_RENORM_TOL = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """Rate R (bits/use), power budget P and mean channel gain sigma2.

    ``theta`` is the threshold-to-average SNR ratio (2^R - 1) / (P sigma2).
    """

    R: float
    P: float
    sigma2: float

    def __post_init__(self):
        if not (self.R > 0 and self.P > 0 and self.sigma2 > 0):
            raise ValueError("R, P and sigma2 must all be positive")

    @property
    def theta(self) -> float:
        return (2.0**self.R - 1.0) / (self.P * self.sigma2)

    @classmethod
    def from_theta(cls, R: float, theta: float, P: float = 1.0) -> "ChannelParams":
        if theta <= 0:
            raise ValueError("theta must be positive")
        return cls(R=R, P=P, sigma2=(2.0**R - 1.0) / (P * theta))


@dataclass
class SplitSolution:
    """A solved allocation.

    ``split`` is the x-vector (PDS) or the time-fraction vector v (ORA);
    ``ell`` counts its strictly positive entries and ``lam`` is the equality
    multiplier, None for the single-layer solution (1, 0, ..., 0).
    """

    split: np.ndarray
    objective: float
    ell: int
    lam: Optional[float] = None


def importance_vector(d) -> np.ndarray:
    """Validate d_1 > ... > d_K > 0 summing to one; returns a float array.

    Sums off by at most 1e-9 are renormalised, anything further is rejected.
    """
    d = np.asarray(d, dtype=float).ravel()
    if d.size == 0:
        raise ValueError("importance vector is empty")
    if np.any(~np.isfinite(d)) or np.any(d <= 0):
        raise ValueError("importance weights must be positive and finite")
    if d.size > 1 and np.any(d[:-1] - d[1:] <= _STRICT_GAP):
        raise ValueError("importance weights must be strictly decreasing")
    s = d.sum()
    if abs(s - 1.0) > _SUM_TOL:
        if abs(s - 1.0) > _RENORM_TOL:
            raise ValueError(f"importance weights sum to {s!r}, not 1")
        d = d / s
    return d


def aggregate_pairs(d, times: int = 1) -> np.ndarray:
    """Sum adjacent entries pairwise, ``times`` times over."""
    d = np.asarray(d, dtype=float)
    for _ in range(times):
        if d.size % 2:
            raise ValueError("cannot pair-aggregate a vector of odd length")
        d = d.reshape(-1, 2).sum(axis=1)
    return d


PRESETS = {
    "fig2": np.array([5.0, 4.0, 3.0, 2.0]) / 14.0,
    "fig3": np.array([100.0, 85.0, 70.0, 60.0, 50.0, 40.0, 25.0, 10.0]) / 440.0,
    "fig9": np.array(
        [1000.0, 300.0, 250.0, 200.0, 150.0, 110.0, 100.0, 90.0,
         80.0, 70.0, 60.0, 50.0, 40.0, 30.0, 20.0, 10.0]
    ) / 2560.0,
}


def is_power_of_two(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0 and math.log2(k).is_integer()
