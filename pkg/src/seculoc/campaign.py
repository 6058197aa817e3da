"""Seeded Monte Carlo campaigns over random deployments and attacker rotations.

A campaign sweeps a grid of attack intensities. For every deployment the
target and anchors are drawn uniformly inside a square region (degenerate
layouts are resampled); every admissible attacker assignment is then applied
a fixed number of times with fresh noise, and every requested method runs on
the same measurement set. Per-trial random streams are derived from the
campaign seed together with the deployment, assignment, repeat, and grid
indices, so results do not depend on execution order or worker count.

Detection is scored as flagging the true attacker (for pair attacks, exact
identification of the pair); a false alarm is any honest anchor flagged.
Trials a method cannot localize are counted and excluded from that method's
statistics. Analytic detection bounds are averaged over single-attacker
trials of the proposed method in which the thresholding stage actually ran
with the attacker in play, evaluated at each trial's realized initial
estimate and measured-distance median with the sample-mean noise level; the
threshold-stage detection rate over that same population is reported next
to the bounds, since the geometric pre-filter detects through a mechanism
the bounds deliberately ignore.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baseline import GlrtConfig, glrt_detect, wls_locate
from .bounds import ErrorStats, detection_bounds
from .errors import DegenerateGeometryError, NoRootError, UnlocalizableError
from .measurement import AttackSpec, Scene, generate_measurements, median_distance, reduce_samples
from .pipeline import locate_no_detection, locate_perfect_detection, locate_secure

METHOD_NAMES = ("proposed", "no_detection", "perfect_detection", "wls_glrt")
_DETECTING = ("proposed", "wls_glrt")

# Stream tags keep deployment sampling and trial noise on disjoint substreams.
_DEPLOY_STREAM = 1
_TRIAL_STREAM = 2

_MIN_ANCHOR_TARGET_GAP = 0.5
_COLLINEARITY_RTOL = 1e-6

# Accumulator field layout per (method, delta) cell.
(
    _SQERR, _OK, _EXCLUDED, _HITS, _FAS,
    _LPD1, _LPD2, _LPD, _UPD, _NBOUNDS, _THRESH_HITS,
) = range(11)
_N_FIELDS = 11


@dataclass(frozen=True)
class CampaignConfig:
    """Knobs of one campaign; defaults are the desk-scale operating point."""

    region_side: float = 20.0
    n_anchors: int = 4
    n_deployments: int = 100
    n_corruptions: int = 20
    k_samples: int = 10
    sigma: float = 1.0
    tau: float = 0.3
    delta_grid: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0)
    attackers_per_trial: int = 1
    seed: int = 0
    methods: tuple[str, ...] = ("proposed",)
    p_fa: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "delta_grid", tuple(float(v) for v in self.delta_grid))
        object.__setattr__(self, "methods", tuple(self.methods))

    def validate(self):
        problems = []
        if self.region_side <= 0:
            problems.append("region_side must be positive")
        if self.n_anchors < 4:
            problems.append("n_anchors must be at least 4")
        if self.attackers_per_trial not in (1, 2):
            problems.append("attackers_per_trial must be 1 or 2")
        if self.attackers_per_trial == 2 and self.n_anchors < 5:
            problems.append("two-attacker campaigns need at least 5 anchors")
        if self.n_deployments < 1 or self.n_corruptions < 1:
            problems.append("deployment and corruption counts must be at least 1")
        if self.k_samples < 1:
            problems.append("k_samples must be at least 1")
        if self.sigma <= 0:
            problems.append("sigma must be positive")
        if not 0.0 <= self.tau <= 1.0:
            problems.append("tau must lie in [0, 1]")
        if not self.delta_grid:
            problems.append("delta_grid must not be empty")
        elif any(v < 0 for v in self.delta_grid):
            problems.append("delta_grid values must be non-negative")
        if not self.methods:
            problems.append("at least one method is required")
        unknown = [m for m in self.methods if m not in METHOD_NAMES]
        if unknown:
            problems.append(f"unknown methods {unknown}; choose from {METHOD_NAMES}")
        if not 0.0 < self.p_fa < 1.0:
            problems.append("p_fa must lie strictly inside (0, 1)")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass
class MethodDeltaStats:
    """Aggregates for one (method, attack intensity) cell.

    ``threshold_detection_rate`` and ``bound_trials`` describe the
    sub-population of trials whose thresholding stage ran with the attacker
    in play; the analytic bound columns average over exactly that
    population. They are diagnostics and not part of the CSV schema.
    """

    method: str
    delta: float
    rmse: float
    detection_rate: float
    false_alarm_rate: float
    lpd1: float
    lpd2: float
    lp_d: float
    up_d: float
    trials: int
    excluded_trials: int
    threshold_detection_rate: float = math.nan
    bound_trials: int = 0


@dataclass
class CampaignStats:
    rows: list[MethodDeltaStats] = field(default_factory=list)
    resampled_deployments: int = 0
    config: CampaignConfig | None = None

    def get(self, method: str, delta: float) -> MethodDeltaStats:
        for row in self.rows:
            if row.method == method and row.delta == delta:
                return row
        raise KeyError(f"no row for {method!r} at delta={delta}")


def _attack_sets(cfg: CampaignConfig) -> list[frozenset[int]]:
    idx = range(cfg.n_anchors)
    if cfg.attackers_per_trial == 1:
        return [frozenset({i}) for i in idx]
    return [frozenset(p) for p in itertools.combinations(idx, 2)]


def _degenerate(target: np.ndarray, anchors: np.ndarray) -> bool:
    if np.linalg.norm(anchors - target, axis=1).min() < _MIN_ANCHOR_TARGET_GAP:
        return True
    centered = anchors - anchors.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    return sv[1] <= _COLLINEARITY_RTOL * sv[0]


def _sample_deployment(cfg: CampaignConfig, dep: int) -> tuple[Scene, int]:
    rng = np.random.default_rng([cfg.seed, _DEPLOY_STREAM, dep])
    side = cfg.region_side
    for attempt in range(1000):
        target = rng.uniform(0.0, side, 2)
        anchors = rng.uniform(0.0, side, (cfg.n_anchors, 2))
        if not _degenerate(target, anchors):
            scene = Scene(target=target, anchors=anchors, region=(0.0, 0.0, side, side))
            return scene, attempt
    raise RuntimeError(f"deployment {dep}: no non-degenerate layout in 1000 draws")


def _trial_bounds(scene, attack_set, delta, x_init, mset, cfg):
    d_bar = reduce_samples(mset)
    m_d = median_distance(d_bar)
    if m_d <= 0:
        return None
    est = np.linalg.norm(scene.anchors - x_init, axis=1)
    mu = scene.true_distances().copy()
    attacker = next(iter(attack_set))
    mu[attacker] += delta
    mu = (mu - est) / m_d
    sigma_y = cfg.sigma / (math.sqrt(cfg.k_samples) * m_d)
    stats = ErrorStats(mu=mu, sigma_y=sigma_y, attacker_index=attacker, tau=cfg.tau)
    return detection_bounds(stats)


def _threshold_event(cfg, det_outcome, attack_set) -> bool:
    """Did the attacker's relative error beat every rival and the threshold?

    This is the event the analytic bounds describe; only anchors that
    remained active for the thresholding stage compete.
    """
    attacker = next(iter(attack_set))
    errs = det_outcome.relative_errors
    rivals = [
        errs[i]
        for i in range(errs.size)
        if i != attacker and i not in det_outcome.geometric_flags
    ]
    e_a = errs[attacker]
    return bool(e_a > cfg.tau and e_a > max(rivals))


def _run_trial(cfg, scene, attack_set, delta, mset, method, cell):
    """Run one method on one measurement set and fold results into a cell."""
    loc_errors = (UnlocalizableError, DegenerateGeometryError, NoRootError)
    detected = None
    res = None
    if method == "proposed":
        try:
            res = locate_secure(scene.anchors, mset, cfg.tau)
        except loc_errors:
            cell[_EXCLUDED] += 1
            return
        x_hat = res.x_final
        detected = res.attacker_set
    elif method == "no_detection":
        try:
            x_hat = locate_no_detection(scene.anchors, mset)
        except loc_errors:
            cell[_EXCLUDED] += 1
            return
    elif method == "perfect_detection":
        try:
            x_hat = locate_perfect_detection(scene.anchors, mset, attack_set)
        except loc_errors:
            cell[_EXCLUDED] += 1
            return
    else:  # wls_glrt
        d_bar = reduce_samples(mset)
        try:
            x_hat = wls_locate(scene.anchors, d_bar)
        except loc_errors:
            cell[_EXCLUDED] += 1
            return
        glrt_cfg = GlrtConfig(p_fa=cfg.p_fa, sigma=cfg.sigma, k_samples=cfg.k_samples)
        detected = glrt_detect(x_hat, mset, scene.anchors, glrt_cfg)

    diff = x_hat - scene.target
    cell[_SQERR] += float(diff @ diff)
    cell[_OK] += 1
    if detected is not None:
        if cfg.attackers_per_trial == 1:
            cell[_HITS] += attack_set <= detected
        else:
            cell[_HITS] += detected == attack_set
        cell[_FAS] += bool(detected - attack_set)
    if (
        method == "proposed"
        and cfg.attackers_per_trial == 1
        and res.detection is not None
        and not (attack_set & res.detection.geometric_flags)
    ):
        b = _trial_bounds(scene, attack_set, delta, res.x_init, mset, cfg)
        if b is not None:
            cell[_LPD1] += b.lpd1
            cell[_LPD2] += b.lpd2
            cell[_LPD] += b.lp_d
            cell[_UPD] += b.up_d
            cell[_NBOUNDS] += 1
            cell[_THRESH_HITS] += _threshold_event(cfg, res.detection, attack_set)


def _deployment_partial(args: tuple[CampaignConfig, int]):
    """All trials of one deployment; returns (accumulator, resample count)."""
    cfg, dep = args
    scene, resamples = _sample_deployment(cfg, dep)
    sets = _attack_sets(cfg)
    acc = np.zeros((len(cfg.methods), len(cfg.delta_grid), _N_FIELDS))
    for corr, attack_set in enumerate(sets):
        for rep in range(cfg.n_corruptions):
            for di, delta in enumerate(cfg.delta_grid):
                rng = np.random.default_rng([cfg.seed, _TRIAL_STREAM, dep, corr, rep, di])
                mset = generate_measurements(
                    scene, AttackSpec(attack_set, delta), cfg.sigma, cfg.k_samples, rng
                )
                for mi, method in enumerate(cfg.methods):
                    _run_trial(cfg, scene, attack_set, delta, mset, method, acc[mi, di])
    return acc, resamples


def _finalize(cfg: CampaignConfig, acc: np.ndarray) -> list[MethodDeltaStats]:
    rows = []
    for mi, method in enumerate(cfg.methods):
        for di, delta in enumerate(cfg.delta_grid):
            cell = acc[mi, di]
            ok = int(cell[_OK])
            rmse = math.sqrt(cell[_SQERR] / ok) if ok else math.nan
            if method in _DETECTING and ok:
                det = cell[_HITS] / ok
                fa = cell[_FAS] / ok
            else:
                det = math.nan
                fa = math.nan
            nb = int(cell[_NBOUNDS])
            if nb:
                b = [cell[f] / nb for f in (_LPD1, _LPD2, _LPD, _UPD)]
                thresh_det = cell[_THRESH_HITS] / nb
            else:
                b = [math.nan] * 4
                thresh_det = math.nan
            rows.append(
                MethodDeltaStats(
                    method=method,
                    delta=delta,
                    rmse=rmse,
                    detection_rate=det,
                    false_alarm_rate=fa,
                    lpd1=b[0],
                    lpd2=b[1],
                    lp_d=b[2],
                    up_d=b[3],
                    trials=ok,
                    excluded_trials=int(cell[_EXCLUDED]),
                    threshold_detection_rate=thresh_det,
                    bound_trials=nb,
                )
            )
    return rows


def run_campaign(cfg: CampaignConfig, threads: int = 1) -> CampaignStats:
    """Execute a campaign; identical results for any worker count.

    Per-deployment partial sums are folded in deployment order, so the
    floating-point reduction is the same whether trials run inline or on a
    process pool.
    """
    cfg.validate()
    jobs = [(cfg, dep) for dep in range(cfg.n_deployments)]
    if threads > 1:
        chunk = max(1, cfg.n_deployments // (4 * threads))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(_deployment_partial, jobs, chunksize=chunk))
    else:
        partials = [_deployment_partial(job) for job in jobs]

    total = np.zeros((len(cfg.methods), len(cfg.delta_grid), _N_FIELDS))
    resamples = 0
    for acc, rs in partials:
        total += acc
        resamples += rs
    return CampaignStats(rows=_finalize(cfg, total), resampled_deployments=resamples, config=cfg)


_CSV_HEADER = (
    "method,delta_m,rmse_m,detection_rate,false_alarm_rate,"
    "lpd1,lpd2,lp_d,up_d,trials,excluded_trials"
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def emit_csv(stats: CampaignStats, path) -> None:
    """Write one row per (method, delta): UTF-8, LF endings, 9 significant digits."""
    lines = [_CSV_HEADER]
    for r in stats.rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.method, r.delta, r.rmse, r.detection_rate, r.false_alarm_rate,
                    r.lpd1, r.lpd2, r.lp_d, r.up_d, r.trials, r.excluded_trials,
                )
            )
        )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write campaign CSV to {path}: {exc}") from exc
