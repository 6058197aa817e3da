"""Closed-form bounds on the probability of flagging the corrupted anchor.

The per-anchor relative errors are absolute values of Gaussians that share a
standard deviation, so every tail quantity reduces to Gaussian Q-function
evaluations. The pairwise comparison P(|A| < |B|) follows from rotating the
joint density by a quarter turn, which maps the wedge |A| < |B| onto two
quadrants and factorizes the probability into Q-function products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import erfc

_SQRT2 = math.sqrt(2.0)


def q_function(z):
    """Gaussian upper-tail probability Q(z) = P(Z > z) for standard normal Z.

    Accepts scalars or arrays; evaluated through the complementary error
    function, accurate to well below 1e-12 over |z| <= 8.
    """
    out = 0.5 * erfc(np.asarray(z, dtype=float) / _SQRT2)
    if np.isscalar(z) or np.ndim(z) == 0:
        return float(out)
    return out


def prob_abs_leq(tau: float, mu: float, sigma: float) -> float:
    """P(|Y| <= tau) for Y ~ N(mu, sigma^2)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    p = 1.0 - (q_function((tau + mu) / sigma) + q_function((tau - mu) / sigma))
    return min(1.0, max(0.0, p))


def prob_abs_less(mu_a: float, mu_i: float, sigma: float) -> float:
    """P(|A| < |B|) for independent A ~ N(mu_a, sigma^2), B ~ N(mu_i, sigma^2).

    The equal variances are essential: they keep the rotated coordinates
    independent, which is what makes the quadrant factorization exact.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    rot_a = (mu_a - mu_i) / _SQRT2
    rot_i = (mu_a + mu_i) / _SQRT2
    p = (
        q_function(rot_a / sigma) * q_function(-rot_i / sigma)
        + q_function(-rot_a / sigma) * q_function(rot_i / sigma)
    )
    return min(1.0, max(0.0, p))


@dataclass
class ErrorStats:
    """Means and shared std of the per-anchor relative-error Gaussians.

    ``mu[i]`` is the mean of the signed relative error of anchor i (the
    attacker's entry includes the attack bias), ``sigma_y`` the shared
    standard deviation, both in units of the measured-distance median.
    """

    mu: np.ndarray
    sigma_y: float
    attacker_index: int
    tau: float

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        if self.mu.ndim != 1 or self.mu.size < 2:
            raise ValueError("mu must hold one mean per anchor, at least two")
        if self.sigma_y <= 0:
            raise ValueError("sigma_y must be positive")
        if not 0 <= self.attacker_index < self.mu.size:
            raise ValueError("attacker_index outside anchor range")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")


class DetectionBounds(NamedTuple):
    lpd1: float
    lpd2: float
    lp_d: float
    up_d: float


def detection_bounds(s: ErrorStats) -> DetectionBounds:
    """Lower and upper bounds on the probability of detecting the attacker.

    Detection means the attacker's relative error exceeds both the threshold
    and every honest anchor's error. The upper bound keeps only the
    threshold event; the first lower bound subtracts a union bound over the
    ways detection can fail; the second multiplies the attacker exceeding
    the threshold with every honest anchor staying below it. All outputs are
    clamped to [0, 1] after floating arithmetic.
    """
    a = s.attacker_index
    mu_a = float(s.mu[a])
    others = [float(m) for i, m in enumerate(s.mu) if i != a]

    p_exceed = q_function((s.tau + mu_a) / s.sigma_y) + q_function((s.tau - mu_a) / s.sigma_y)
    up_d = min(1.0, max(0.0, p_exceed))

    # Union bound: 1 - sum_i P(|y_a| < |y_i|) - P(|y_a| <= tau).
    lpd1 = 1.0 - sum(prob_abs_less(mu_a, mu_i, s.sigma_y) for mu_i in others)
    lpd1 -= prob_abs_leq(s.tau, mu_a, s.sigma_y)
    lpd1 = min(1.0, max(0.0, lpd1))

    lpd2 = p_exceed
    for mu_i in others:
        lpd2 *= prob_abs_leq(s.tau, mu_i, s.sigma_y)
    lpd2 = min(1.0, max(0.0, lpd2))

    return DetectionBounds(lpd1=lpd1, lpd2=lpd2, lp_d=max(lpd1, lpd2), up_d=up_d)
