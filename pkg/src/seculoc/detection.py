"""Corrupted-anchor detection from circle-intersection clustering.

Each anchor's measured range draws a circle that passes near the true target
when the measurement is honest, so honest circle pairs intersect close to the
target while an enlarged circle scatters its intersections. Three regimes
drive the stage: every pair of circles intersects; some circle is disjoint
from all others; or only some pairs intersect. A circle disjoint from all
others is flagged as corrupted only when it strictly contains every other
circle, because an attack can only enlarge a range: an isolated circle that
could still be reached by growing its radius may simply be noise-starved.

From the surviving pairs the stage picks the most compact set of candidate
intersection points, averages them with inverse-distance weights into an
initial position estimate, and thresholds the relative disagreement between
measured and re-estimated ranges to name attackers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnlocalizableError
from .geometry import Circle, CircleRelation, classify_pair, intersect_circles
from .measurement import median_distance

# Beyond this many (subset, sign) combinations the selection falls back to
# greedy seeding plus local improvement.
_EXHAUSTIVE_LIMIT = 200_000


@dataclass
class IntersectionGraph:
    """Pairwise circle-intersection structure over the anchors.

    ``points`` maps an anchor pair (i, j), i < j, to the (2, 2) array of its
    candidate intersection points; ``disjoint_pairs`` holds the pairs whose
    circles do not meet; ``geometric_flags`` holds anchors whose circle
    strictly contains every other circle and is therefore corrupted.
    """

    n_anchors: int
    points: dict[tuple[int, int], np.ndarray]
    disjoint_pairs: frozenset[tuple[int, int]]
    geometric_flags: frozenset[int]

    def restricted_to(self, keep) -> "IntersectionGraph":
        """Sub-graph over a subset of anchors; flags are not recomputed."""
        keep = set(keep)
        pts = {p: v for p, v in self.points.items() if p[0] in keep and p[1] in keep}
        disj = frozenset(p for p in self.disjoint_pairs if p[0] in keep and p[1] in keep)
        return IntersectionGraph(
            n_anchors=len(keep), points=pts, disjoint_pairs=disj, geometric_flags=frozenset()
        )


@dataclass
class HonestSet:
    """Candidate intersection points chosen as presumably uncorrupted.

    ``selected`` pairs each chosen point with the anchor pair that produced
    it; at most one point per anchor pair is ever selected.
    """

    selected: list[tuple[tuple[int, int], np.ndarray]]

    @property
    def size(self) -> int:
        return len(self.selected)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [p for p, _ in self.selected]

    @property
    def points(self) -> np.ndarray:
        return np.array([pt for _, pt in self.selected])


@dataclass
class DetectionOutcome:
    """Result of the detection stage.

    ``relative_errors`` covers every input anchor (including ones flagged on
    geometric grounds); ``attacker_set`` holds both geometric flags and
    threshold removals. When the geometric flags alone shrink the network to
    the minimum localizable size, the clustering and thresholding stages are
    skipped and ``x_init``, ``relative_errors``, and ``honest`` are None.
    """

    x_init: np.ndarray | None
    attacker_set: frozenset[int]
    relative_errors: np.ndarray | None
    honest: HonestSet | None
    geometric_flags: frozenset[int]


def build_intersection_graph(anchors, d) -> IntersectionGraph:
    """Classify all circle pairs and collect their intersection points.

    An anchor is flagged corrupted when its circle strictly contains every
    other circle: no radius enlargement could ever have produced such a
    configuration honestly.
    """
    anchors = np.asarray(anchors, dtype=float)
    d = np.asarray(d, dtype=float)
    n = anchors.shape[0]
    if n < 4:
        raise ValueError("detection needs at least 4 anchors")
    if d.shape != (n,):
        raise ValueError("one distance per anchor required")
    circles = [Circle(float(a[0]), float(a[1]), float(r)) for a, r in zip(anchors, d)]

    points: dict[tuple[int, int], np.ndarray] = {}
    disjoint = set()
    relations: dict[tuple[int, int], CircleRelation] = {}
    for i in range(n - 1):
        for j in range(i + 1, n):
            rel = classify_pair(circles[i], circles[j])
            relations[(i, j)] = rel
            if rel in (CircleRelation.INTERSECTING, CircleRelation.TANGENT):
                points[(i, j)] = intersect_circles(circles[i], circles[j])
            else:
                disjoint.add((i, j))

    def contains_all(i: int) -> bool:
        for j in range(n):
            if j == i:
                continue
            rel = relations[(i, j)] if i < j else relations[(j, i)]
            wanted = (
                CircleRelation.FIRST_CONTAINS_SECOND if i < j
                else CircleRelation.SECOND_CONTAINS_FIRST
            )
            if rel is not wanted:
                return False
        return True

    flags = frozenset(i for i in range(n) if contains_all(i))
    return IntersectionGraph(
        n_anchors=n, points=points, disjoint_pairs=frozenset(disjoint), geometric_flags=flags
    )


@lru_cache(maxsize=64)
def _subset_templates(n_pairs: int, size: int):
    combos = np.array(list(itertools.combinations(range(n_pairs), size)), dtype=np.intp)
    signs = np.array(list(itertools.product((0, 1), repeat=size)), dtype=np.intp)
    return combos, signs


def _compactness_of(sel: np.ndarray) -> np.ndarray:
    """Pairwise-distance sums over the trailing (size, 2) axes."""
    size = sel.shape[-2]
    iu, jv = np.triu_indices(size, 1)
    return np.linalg.norm(sel[..., iu, :] - sel[..., jv, :], axis=-1).sum(axis=-1)


def _coord_key(points: np.ndarray) -> tuple:
    return tuple(sorted(map(tuple, np.round(points, 12))))


def _select_exhaustive(pair_ids, pts, target_size):
    combos, signs = _subset_templates(len(pair_ids), target_size)
    sel = pts[combos[:, None, :], signs[None, :, :]]  # (n_combos, n_signs, size, 2)
    comp = _compactness_of(sel)
    best = comp.min()
    ties = np.argwhere(comp == best)
    if len(ties) > 1:
        # Deterministic tie-break on the sorted coordinate list.
        ci, si = min(ties, key=lambda t: _coord_key(sel[t[0], t[1]]))
    else:
        ci, si = ties[0]
    chosen_pairs = combos[ci]
    chosen_signs = signs[si]
    return [(pair_ids[p], pts[p, s].copy()) for p, s in zip(chosen_pairs, chosen_signs)]


def _select_greedy(pair_ids, pts, target_size):
    """Greedy seeding from the closest cross-pair candidates, then 1-swap polish."""
    n_pairs = len(pair_ids)
    flat = pts.reshape(-1, 2)  # candidate 2*p + s belongs to pair p
    m = flat.shape[0]
    dist = np.linalg.norm(flat[:, None, :] - flat[None, :, :], axis=-1)
    same_pair = np.repeat(np.arange(n_pairs), 2)
    blocked = same_pair[:, None] == same_pair[None, :]
    masked = np.where(blocked, np.inf, dist)
    seed = np.unravel_index(np.argmin(masked), masked.shape)

    chosen = [int(seed[0]), int(seed[1])]
    used = {int(same_pair[c]) for c in chosen}
    while len(chosen) < target_size:
        cost = dist[:, chosen].sum(axis=1)
        cost[[c for c in range(m) if same_pair[c] in used]] = np.inf
        nxt = int(np.argmin(cost))
        chosen.append(nxt)
        used.add(int(same_pair[nxt]))

    improved = True
    passes = 0
    while improved and passes < 20:
        improved = False
        passes += 1
        for slot in range(target_size):
            rest = chosen[:slot] + chosen[slot + 1:]
            rest_pairs = {int(same_pair[c]) for c in rest}
            cur_add = dist[chosen[slot], rest].sum()
            for cand in range(m):
                if int(same_pair[cand]) in rest_pairs or cand == chosen[slot]:
                    continue
                add = dist[cand, rest].sum()
                if add < cur_add - 1e-15:
                    chosen[slot] = cand
                    cur_add = add
                    improved = True
    return [(pair_ids[int(same_pair[c])], flat[c].copy()) for c in sorted(chosen)]


def select_honest_points(graph: IntersectionGraph, target_size: int) -> HonestSet:
    """Most compact choice of candidate points, at most one per anchor pair.

    Minimizes the pairwise-distance sum over all admissible subsets of the
    given size (exhaustively for the small pair counts this library targets,
    greedily beyond that). Raises UnlocalizableError when fewer candidate
    pairs than requested points exist or the request drops below the three
    points needed to fix a planar position.
    """
    if target_size < 3:
        raise UnlocalizableError("fewer than 3 honest points cannot fix a planar position")
    pair_ids = sorted(graph.points)
    if len(pair_ids) < target_size:
        raise UnlocalizableError(
            f"only {len(pair_ids)} intersecting pairs available for {target_size} honest points"
        )
    pts = np.stack([graph.points[p] for p in pair_ids])  # (n_pairs, 2, 2)

    n_subsets = 1.0
    n_av, k = len(pair_ids), target_size
    for t in range(k):
        n_subsets *= (n_av - t) / (t + 1)
    n_subsets *= 2.0 ** k
    if n_subsets <= _EXHAUSTIVE_LIMIT:
        selected = _select_exhaustive(pair_ids, pts, target_size)
    else:
        selected = _select_greedy(pair_ids, pts, target_size)
    return HonestSet(selected=selected)


def wcm_estimate(honest: HonestSet, d) -> np.ndarray:
    """Weighted central mass of the honest points.

    Each point is weighted by the inverse of its pair's mean measured
    distance, normalized to a convex combination, so points backed by long
    (and therefore less trusted) ranges pull the estimate less.
    """
    if honest.size == 0:
        raise ValueError("cannot average an empty honest set")
    d = np.asarray(d, dtype=float)
    inv = np.array([2.0 / (d[i] + d[j]) for (i, j), _ in honest.selected])
    inv /= inv.sum()
    return (inv[:, None] * honest.points).sum(axis=0)


def relative_errors(x_est, anchors, d) -> np.ndarray:
    """Per-anchor |measured - re-estimated| distance, scaled by the measured median.

    The median keeps the scale robust to a grossly enlarged measurement.
    """
    anchors = np.asarray(anchors, dtype=float)
    d = np.asarray(d, dtype=float)
    med = median_distance(d)
    if med <= 0:
        raise ValueError("median of distance measurements must be positive")
    est = np.linalg.norm(anchors - np.asarray(x_est, dtype=float), axis=1)
    return np.abs(d - est) / med


def detect(anchors, d, tau: float, q: int = 2) -> DetectionOutcome:
    """Full detection stage: geometric flags, honest points, thresholded removal.

    Geometric flags are removed first; then anchors are stripped in order of
    decreasing relative error while the largest error exceeds ``tau`` and
    more than q+1 anchors remain. The initial estimate is computed once and
    not revised between removals. If flag removal alone leaves exactly q+1
    anchors the stage concludes immediately with the flagged set.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    if q != 2:
        raise ValueError("only planar (q = 2) networks are supported")
    anchors = np.asarray(anchors, dtype=float)
    d = np.asarray(d, dtype=float)
    if anchors.shape[0] < q + 2:
        raise ValueError("detection needs at least q + 2 anchors")
    graph = build_intersection_graph(anchors, d)
    return _detect_from_graph(anchors, d, tau, q, graph)


def _detect_from_graph(anchors, d, tau, q, graph) -> DetectionOutcome:
    n = graph.n_anchors
    active = set(range(n))
    attackers: set[int] = set()
    for i in sorted(graph.geometric_flags):
        if len(active) <= q + 1:
            break
        attackers.add(i)
        active.discard(i)
    if attackers and len(active) == q + 1:
        # The pre-filter alone fixed the verdict; nothing left to threshold.
        return DetectionOutcome(
            x_init=None,
            attacker_set=frozenset(attackers),
            relative_errors=None,
            honest=None,
            geometric_flags=graph.geometric_flags,
        )

    restricted = graph.restricted_to(active)
    disjoint = restricted.disjoint_pairs
    target = len(active) - len(disjoint) if disjoint else len(active) - 1
    honest = select_honest_points(restricted, target)

    x_init = wcm_estimate(honest, d)
    errs = relative_errors(x_init, anchors, d)

    while len(active) > q + 1:
        worst = max(active, key=lambda i: (errs[i], -i))
        if errs[worst] <= tau:
            break
        attackers.add(worst)
        active.discard(worst)

    return DetectionOutcome(
        x_init=x_init,
        attacker_set=frozenset(attackers),
        relative_errors=errs,
        honest=honest,
        geometric_flags=graph.geometric_flags,
    )
