"""End-to-end secure localization: detect attackers, then refine by bisection.

The pipeline runs the geometric pre-filter, forms an initial estimate from
the honest intersection points, names attackers by thresholded relative
error, re-solves on the surviving anchors through the exact squared-range
solver, and keeps whichever of the two estimates scores the lower
bias-compensated likelihood cost. When the geometric pre-filter alone
shrinks the network to the minimum localizable size, the initial estimate is
skipped entirely and the refined estimate is returned outright.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import DetectionOutcome, _detect_from_graph, build_intersection_graph
from .errors import DegenerateGeometryError, NoRootError, UnlocalizableError
from .gtrs import build_system, solve
from .measurement import MeasurementSet, reduce_samples


@dataclass
class SecureLocResult:
    """Everything the secure pipeline decided for one measurement set.

    ``x_init`` and ``detection`` are None when the geometric pre-filter
    already reduced the network to q+1 anchors and the clustering stage
    never ran; in that case no cost comparison happens and ``costs[0]`` is
    None as well. ``delta_hat`` holds the per-anchor bias estimated at the
    final estimate.
    """

    x_final: np.ndarray
    x_init: np.ndarray | None
    x_gtrs: np.ndarray | None
    attacker_set: frozenset[int]
    delta_hat: np.ndarray
    costs: tuple[float | None, float | None]
    chose_gtrs: bool
    detection: DetectionOutcome | None = None


def estimate_attack_intensity(x_est, m: MeasurementSet, anchors) -> np.ndarray:
    """Per-anchor mean residual of the samples against an assumed position.

    This is the maximum-likelihood estimate of a constant additive bias on
    each anchor's samples; honest anchors yield values near zero, possibly
    negative through noise.
    """
    anchors = np.asarray(anchors, dtype=float)
    est = np.linalg.norm(anchors - np.asarray(x_est, dtype=float), axis=1)
    return (m.samples - est[:, None]).mean(axis=1)


def cost(x_est, delta_hat, m: MeasurementSet, anchors) -> float:
    """Sum of squared sample residuals after removing the per-anchor bias.

    Evaluates the likelihood cost of a candidate position over all samples of
    all given anchors, with each anchor's estimated bias subtracted. With a
    single sample per anchor the bias absorbs the residual exactly and the
    cost is identically zero.
    """
    anchors = np.asarray(anchors, dtype=float)
    delta_hat = np.asarray(delta_hat, dtype=float)
    est = np.linalg.norm(anchors - np.asarray(x_est, dtype=float), axis=1)
    r = m.samples - est[:, None] - delta_hat[:, None]
    return float(np.sum(r * r))


def _gtrs_estimate(anchors, d, indices) -> np.ndarray:
    idx = sorted(indices)
    system = build_system(anchors[idx], d[idx])
    return solve(system).x


def locate_secure(anchors, m: MeasurementSet, tau: float, q: int = 2) -> SecureLocResult:
    """Run the full secure localization pipeline on one measurement set.

    Detection and geometry consume the per-anchor sample means; the cost
    comparison consumes every sample. The refined estimate is preferred on
    cost ties. Raises UnlocalizableError when fewer than q+1 usable anchors
    or honest candidate points remain at any stage.
    """
    anchors = np.asarray(anchors, dtype=float)
    if anchors.shape[0] < q + 2:
        raise UnlocalizableError("secure localization needs at least q + 2 anchors")
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    n = anchors.shape[0]
    d = reduce_samples(m)
    graph = build_intersection_graph(anchors, d)

    # Geometric pre-filter with the minimum-network guard.
    active = set(range(n))
    attackers: set[int] = set()
    tripped = False
    for i in sorted(graph.geometric_flags):
        if len(active) <= q + 1:
            break
        attackers.add(i)
        active.discard(i)
        if len(active) == q + 1:
            tripped = True
            break

    if tripped:
        x_gtrs = _gtrs_estimate(anchors, d, active)
        delta2 = estimate_attack_intensity(x_gtrs, m, anchors)
        f2 = cost(x_gtrs, delta2, m, anchors)
        return SecureLocResult(
            x_final=x_gtrs,
            x_init=None,
            x_gtrs=x_gtrs,
            attacker_set=frozenset(attackers),
            delta_hat=delta2,
            costs=(None, f2),
            chose_gtrs=True,
        )

    outcome = _detect_from_graph(anchors, d, tau, q, graph)
    x_init = outcome.x_init
    delta1 = estimate_attack_intensity(x_init, m, anchors)
    f1 = cost(x_init, delta1, m, anchors)
    attackers = set(outcome.attacker_set)
    survivors = sorted(set(range(n)) - attackers)

    try:
        x_gtrs = _gtrs_estimate(anchors, d, survivors)
    except (DegenerateGeometryError, NoRootError):
        return SecureLocResult(
            x_final=x_init,
            x_init=x_init,
            x_gtrs=None,
            attacker_set=frozenset(attackers),
            delta_hat=delta1,
            costs=(f1, None),
            chose_gtrs=False,
            detection=outcome,
        )

    delta2 = estimate_attack_intensity(x_gtrs, m, anchors)
    f2 = cost(x_gtrs, delta2, m, anchors)
    chose_gtrs = f2 <= f1
    return SecureLocResult(
        x_final=x_gtrs if chose_gtrs else x_init,
        x_init=x_init,
        x_gtrs=x_gtrs,
        attacker_set=frozenset(attackers),
        delta_hat=delta2 if chose_gtrs else delta1,
        costs=(f1, f2),
        chose_gtrs=chose_gtrs,
        detection=outcome,
    )


def locate_no_detection(anchors, m: MeasurementSet) -> np.ndarray:
    """Benchmark: solve on every anchor, corrupted or not."""
    anchors = np.asarray(anchors, dtype=float)
    d = reduce_samples(m)
    return _gtrs_estimate(anchors, d, range(anchors.shape[0]))


def locate_perfect_detection(anchors, m: MeasurementSet, true_attackers) -> np.ndarray:
    """Benchmark: solve with the true attacker set removed."""
    anchors = np.asarray(anchors, dtype=float)
    d = reduce_samples(m)
    survivors = sorted(set(range(anchors.shape[0])) - set(true_attackers))
    if len(survivors) < 3:
        raise UnlocalizableError("fewer than 3 honest anchors remain")
    return _gtrs_estimate(anchors, d, survivors)
