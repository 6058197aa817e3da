"""Comparison method: unconstrained weighted least squares plus a GLRT detector.

The estimator solves the same squared-range linear system as the exact
solver but drops the norm constraint, so it reduces to ordinary weighted
normal equations. Its detector tests each anchor's mean sample residual
against a threshold calibrated from a chosen false-alarm probability; the
residual of an honest anchor is zero-mean Gaussian with variance sigma^2/K
when evaluated at the true position, which makes the calibration exact there
and only approximate at the estimated position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .gtrs import build_system
from .measurement import MeasurementSet
from .pipeline import estimate_attack_intensity


@dataclass(frozen=True)
class GlrtConfig:
    """Operating point of the likelihood-ratio detector."""

    p_fa: float
    sigma: float
    k_samples: int

    def __post_init__(self):
        if not 0.0 < self.p_fa < 1.0:
            raise ValueError("p_fa must lie strictly inside (0, 1)")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.k_samples < 1:
            raise ValueError("need at least one sample per anchor")


def wls_locate(anchors, d) -> np.ndarray:
    """Weighted linear least-squares position from squared ranges.

    Uses inverse-distance weights and the lifted squared-range system, but
    solves the plain normal equations without tying the lifted coordinate to
    the squared norm. Raises DegenerateGeometryError on collinear anchors.
    """
    system = build_system(anchors, d)
    gram = system.gram()
    y = np.linalg.solve(gram, system.gram_rhs())
    return y[:2]


def glrt_threshold(cfg: GlrtConfig) -> float:
    """Decision threshold on the mean residual for the target false alarm.

    Equals sigma * Qinv(p_fa) / sqrt(K): the mean residual of an honest
    anchor has std sigma/sqrt(K), so exceeding the threshold under the
    no-attack hypothesis happens with probability p_fa.
    """
    q_inv = float(ndtri(1.0 - cfg.p_fa))
    return cfg.sigma * q_inv / math.sqrt(cfg.k_samples)


def glrt_detect(x_wls, m: MeasurementSet, anchors, cfg: GlrtConfig) -> frozenset[int]:
    """Flag anchors whose estimated bias exceeds the calibrated threshold."""
    delta_hat = estimate_attack_intensity(x_wls, m, anchors)
    thresh = glrt_threshold(cfg)
    return frozenset(int(i) for i in np.flatnonzero(delta_hat > thresh))
