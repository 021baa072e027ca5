"""The automated line-assignment algorithms.

Every algorithm maps a chronological fixation sequence plus line (and for
the warp family, word) geometry to a per-fixation line assignment. The
corrected output snaps y to the assigned line center and never touches x
or duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import Fixation, LineSet, nearest_line

ALGORITHMS = (
    "attach",
    "chain",
    "cluster",
    "merge",
    "regress",
    "stretch",
    "segment",
    "slice",
    "warp",
    "warp_attach",
    "warp_chain",
    "warp_regress",
    "warp_stretch",
)

WARP_FAMILY = ("warp", "warp_attach", "warp_chain", "warp_regress", "warp_stretch")

# Deterministic grid-then-refine policy shared by regress and stretch.
GRID_POINTS = 33
REFINE_PASSES = 2

Point = tuple[float, float]


@dataclass(frozen=True)
class AlgoParams:
    """Numeric knobs for the algorithms; every threshold is overridable."""

    chain_x_dist: float = 192.0
    chain_y_dist: float = 32.0
    merge_y_dist: float = 32.0
    merge_error: float = 20.0
    regress_slope: tuple[float, float] = (-0.1, 0.1)
    regress_offset: tuple[float, float] = (-50.0, 50.0)
    regress_sd: tuple[float, float] = (1.0, 20.0)
    stretch_scale: tuple[float, float] = (0.9, 1.1)
    stretch_offset: tuple[float, float] = (-50.0, 50.0)
    slice_y_dist: float = 32.0
    slice_min_run: int = 2
    # None derives from geometry: 1.5 x median within-line word gap / half line spacing.
    split_x_dist: Optional[float] = None
    split_y_dist: Optional[float] = None
    cluster_restarts: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("chain_x_dist", "chain_y_dist", "merge_y_dist", "slice_y_dist"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("regress_slope", "regress_offset", "regress_sd", "stretch_scale", "stretch_offset"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"{name} bounds must be finite with lower <= upper, got ({lo}, {hi})")
        if self.slice_min_run < 1:
            raise ValueError("slice_min_run must be >= 1")
        if self.cluster_restarts < 0:
            raise ValueError("cluster_restarts must be >= 0")
        for name in ("split_x_dist", "split_y_dist"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be > 0 when given")

    def with_overrides(self, overrides: Mapping[str, object]) -> "AlgoParams":
        """Apply key=value overrides (CLI/API); pair fields accept "lo:hi"."""
        known = {f.name: f for f in fields(self)}
        parsed: dict[str, object] = {}
        for key, raw in overrides.items():
            if key not in known:
                raise ValueError(f"unknown parameter {key!r}; valid: {', '.join(sorted(known))}")
            if key in ("slice_min_run", "cluster_restarts", "seed"):
                parsed[key] = int(raw)
            elif key in ("regress_slope", "regress_offset", "regress_sd", "stretch_scale", "stretch_offset"):
                if isinstance(raw, str):
                    lo, hi = raw.split(":")
                    parsed[key] = (float(lo), float(hi))
                else:
                    lo, hi = raw  # type: ignore[misc]
                    parsed[key] = (float(lo), float(hi))
            else:
                parsed[key] = float(raw)  # type: ignore[arg-type]
        return replace(self, **parsed)


@dataclass(frozen=True)
class Correction:
    """Per-fixation line assignment plus the snapped fixation sequence."""

    assigned_line: tuple[int, ...]
    corrected: tuple[Fixation, ...]
    flags: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.assigned_line)


def correct(
    algorithm: str,
    fixations: Sequence[Fixation],
    lines: LineSet,
    words: Optional[Sequence[Point]] = None,
    params: Optional[AlgoParams] = None,
    anchors: Optional[Mapping[int, tuple[float, float, int]]] = None,
) -> Correction:
    """Dispatch to the named algorithm.

    Anchored fixations take part in the computation at their anchored
    coordinates; their output assignment is forced to the anchor's line.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; valid: {', '.join(ALGORITHMS)}")
    if len(lines) == 0:
        raise ValueError("no lines")
    if algorithm in WARP_FAMILY and not words:
        raise ValueError(f"{algorithm} requires word centers")
    params = params or AlgoParams()
    fixations = tuple(fixations)
    if not fixations:
        return Correction((), (), ())

    anchors = dict(anchors or {})
    work: list[Fixation] = list(fixations)
    for i, (ax, ay, _line) in anchors.items():
        work[i] = fixations[i].moved_to(ax, ay)

    assigned, flags = _dispatch(algorithm, work, lines, words or [], params)

    centers = lines.line_ys
    out_lines = list(assigned)
    corrected = []
    for i, fix in enumerate(fixations):
        if i in anchors:
            ax, ay, aline = anchors[i]
            out_lines[i] = aline
            corrected.append(fix.moved_to(ax, centers[aline - 1]))
        else:
            corrected.append(replace(work[i], y=centers[out_lines[i] - 1]))
    return Correction(tuple(out_lines), tuple(corrected), tuple(flags))


def _dispatch(
    algorithm: str, fixations: list[Fixation], lines: LineSet, words: Sequence[Point], params: AlgoParams
) -> tuple[list[int], list[str]]:
    if algorithm == "attach":
        return _attach(fixations, lines), []
    if algorithm == "chain":
        return _chain(fixations, lines, params.chain_x_dist, params.chain_y_dist), []
    if algorithm == "cluster":
        return _cluster(fixations, lines, params.seed, params.cluster_restarts), []
    if algorithm == "merge":
        return _merge(fixations, lines, params.merge_y_dist, params.merge_error)
    if algorithm == "regress":
        return _regress(fixations, lines, params), []
    if algorithm == "stretch":
        return _stretch(fixations, lines, params), []
    if algorithm == "segment":
        return _segment(fixations, lines)
    if algorithm == "slice":
        return _slice(fixations, lines, params.slice_y_dist, params.slice_min_run), []
    if algorithm == "warp":
        return _warp(fixations, lines, words), []
    secondary = algorithm.split("_", 1)[1]
    return _hybrid(secondary, fixations, lines, words, params)


# --- attach -----------------------------------------------------------------


def _attach(fixations: Sequence[Fixation], lines: LineSet) -> list[int]:
    return [nearest_line(f.y, lines) for f in fixations]


# --- chain ------------------------------------------------------------------


def _chain(fixations: Sequence[Fixation], lines: LineSet, x_dist: float, y_dist: float) -> list[int]:
    groups: list[list[int]] = [[0]]
    for i in range(1, len(fixations)):
        prev, cur = fixations[i - 1], fixations[i]
        if abs(cur.x - prev.x) <= x_dist and abs(cur.y - prev.y) <= y_dist:
            groups[-1].append(i)
        else:
            groups.append([i])
    assigned = [0] * len(fixations)
    for group in groups:
        mean_y = sum(fixations[i].y for i in group) / len(group)
        line = nearest_line(mean_y, lines)
        for i in group:
            assigned[i] = line
    return assigned


# --- cluster ----------------------------------------------------------------


def _cluster(fixations: Sequence[Fixation], lines: LineSet, seed: int, restarts: int) -> list[int]:
    m = len(lines)
    ys = np.array([f.y for f in fixations], dtype=float)
    if len(ys) < m:
        raise ValueError("underdetermined clustering: fewer fixations than lines")

    init = np.quantile(ys, [(i + 0.5) / m for i in range(m)])
    best_labels, best_inertia = _lloyd_1d(ys, init)
    rng = np.random.default_rng(seed)
    lo, hi = float(ys.min()), float(ys.max())
    for _ in range(restarts):
        centers = np.sort(rng.uniform(lo, hi, m)) if hi > lo else np.full(m, lo)
        labels, inertia = _lloyd_1d(ys, centers)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia

    # Rank clusters by mean y: topmost cluster becomes line 1.
    means = [(ys[best_labels == c].mean() if np.any(best_labels == c) else math.inf, c) for c in range(m)]
    rank = {c: r + 1 for r, (_, c) in enumerate(sorted(means))}
    return [rank[int(c)] for c in best_labels]


def _lloyd_1d(ys: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    centers = np.array(centers, dtype=float)
    k = len(centers)
    labels: Optional[np.ndarray] = None
    for _ in range(200):
        dist = np.abs(ys[:, None] - centers[None, :])
        new_labels = np.argmin(dist, axis=1)
        # Re-seed empty clusters with the worst-fitting point.
        for c in range(k):
            if not np.any(new_labels == c):
                residual = np.abs(ys - centers[new_labels])
                sizes = np.bincount(new_labels, minlength=k)
                movable = sizes[new_labels] > 1
                if not np.any(movable):
                    break
                j = int(np.argmax(np.where(movable, residual, -1.0)))
                new_labels[j] = c
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            sel = labels == c
            if np.any(sel):
                centers[c] = ys[sel].mean()
    assert labels is not None
    inertia = float(np.sum((ys - centers[labels]) ** 2))
    return labels, inertia


# --- merge ------------------------------------------------------------------


class _Moments:
    """Running sums for a point set; gives the least-squares line residual
    in O(1), so sequence unions never refit from scratch."""

    __slots__ = ("n", "sx", "sy", "sxx", "sxy", "syy")

    def __init__(self, n: int, sx: float, sy: float, sxx: float, sxy: float, syy: float):
        self.n, self.sx, self.sy, self.sxx, self.sxy, self.syy = n, sx, sy, sxx, sxy, syy

    @classmethod
    def of(cls, points: Sequence[tuple[float, float]]) -> "_Moments":
        n = len(points)
        sx = sum(p[0] for p in points)
        sy = sum(p[1] for p in points)
        sxx = sum(p[0] * p[0] for p in points)
        sxy = sum(p[0] * p[1] for p in points)
        syy = sum(p[1] * p[1] for p in points)
        return cls(n, sx, sy, sxx, sxy, syy)

    def plus(self, other: "_Moments") -> "_Moments":
        return _Moments(
            self.n + other.n,
            self.sx + other.sx,
            self.sy + other.sy,
            self.sxx + other.sxx,
            self.sxy + other.sxy,
            self.syy + other.syy,
        )

    def rms_residual(self) -> float:
        if self.n <= 2:
            return 0.0
        sxx = self.sxx - self.sx * self.sx / self.n
        sxy = self.sxy - self.sx * self.sy / self.n
        syy = self.syy - self.sy * self.sy / self.n
        sse = syy if sxx <= 1e-9 else syy - sxy * sxy / sxx
        return math.sqrt(max(sse, 0.0) / self.n)


def _merge(
    fixations: Sequence[Fixation], lines: LineSet, y_dist: float, error_thresh: float
) -> tuple[list[int], list[str]]:
    import heapq

    m = len(lines)
    n = len(fixations)
    seqs: list[list[int]] = [[0]]
    for i in range(1, n):
        prev, cur = fixations[i - 1], fixations[i]
        if cur.x - prev.x > 0 and abs(cur.y - prev.y) <= y_dist:
            seqs[-1].append(i)
        else:
            seqs.append([i])

    if len(seqs) < m:
        # Not enough progressive material to cover every line.
        return _attach(fixations, lines), ["merge_fallback_attach"]

    # Sequence ids grow in creation order, keeping tie-breaks deterministic.
    indices: dict[int, list[int]] = {s: seq for s, seq in enumerate(seqs)}
    moments: dict[int, _Moments] = {
        s: _Moments.of([(fixations[i].x, fixations[i].y) for i in seq]) for s, seq in indices.items()
    }
    next_id = len(seqs)
    alive = set(indices)
    heap: list[tuple[float, int, int]] = []
    ids = sorted(alive)
    for ai in range(len(ids)):
        for bi in range(ai + 1, len(ids)):
            a, b = ids[ai], ids[bi]
            heap.append((moments[a].plus(moments[b]).rms_residual(), a, b))
    heapq.heapify(heap)

    while len(alive) > m:
        resid, a, b = heapq.heappop(heap)
        if a not in alive or b not in alive:
            continue
        merged = next_id
        next_id += 1
        indices[merged] = sorted(indices.pop(a) + indices.pop(b))
        moments[merged] = moments.pop(a).plus(moments.pop(b))
        alive.discard(a)
        alive.discard(b)
        for other in alive:
            heapq.heappush(heap, (moments[other].plus(moments[merged]).rms_residual(), other, merged))
        alive.add(merged)

    order = sorted(alive, key=lambda s: moments[s].sy / moments[s].n)
    assigned = [0] * n
    for line_idx, s in enumerate(order, start=1):
        for i in indices[s]:
            assigned[i] = line_idx
    return assigned, []


# --- regress ----------------------------------------------------------------


def _axis_grid(lo: float, hi: float, center: Optional[float] = None, span: Optional[float] = None) -> np.ndarray:
    if center is not None and span is not None:
        lo2 = max(lo, center - span / 2)
        hi2 = min(hi, center + span / 2)
        lo, hi = lo2, hi2
    if hi <= lo:
        return np.array([lo])
    return np.linspace(lo, hi, GRID_POINTS)


def regress_fit(
    fixations: Sequence[Fixation], lines: LineSet, params: Optional[AlgoParams] = None
) -> tuple[float, float, float]:
    """Best (slope, offset, sd) for the shared-slope line model.

    Line i is modeled as y = slope*x + line_ys[i] + offset; the objective is
    the total negative log density of each fixation under its best line with
    normal residuals and one shared sd.
    """
    params = params or AlgoParams()
    xs = np.array([f.x for f in fixations])
    ys = np.array([f.y for f in fixations])
    centers = np.array(lines.line_ys)
    n = len(xs)

    def sse_grid(slopes: np.ndarray, offsets: np.ndarray) -> np.ndarray:
        out = np.empty((len(slopes), len(offsets)))
        for i, s in enumerate(slopes):
            base = ys - s * xs
            r = base[None, :, None] - centers[:, None, None] - offsets[None, None, :]
            out[i] = (r**2).min(axis=0).sum(axis=0)
        return out

    s_lo, s_hi = params.regress_slope
    o_lo, o_hi = params.regress_offset
    d_lo, d_hi = params.regress_sd
    best = (0.0, 0.0, max(d_lo, 1e-9))
    spans = None
    for _ in range(REFINE_PASSES + 1):
        if spans is None:
            slopes = _axis_grid(s_lo, s_hi)
            offsets = _axis_grid(o_lo, o_hi)
            sds = _axis_grid(d_lo, d_hi)
        else:
            slopes = _axis_grid(s_lo, s_hi, best[0], spans[0])
            offsets = _axis_grid(o_lo, o_hi, best[1], spans[1])
            sds = _axis_grid(d_lo, d_hi, best[2], spans[2])
        sse = sse_grid(slopes, offsets)
        # nll[i, j, k] = n*log(sd_k) + sse[i, j] / (2 sd_k^2)
        nll = n * np.log(sds)[None, None, :] + sse[:, :, None] / (2.0 * sds[None, None, :] ** 2)
        flat = np.argmin(nll)
        i, j, k = np.unravel_index(flat, nll.shape)
        best = (float(slopes[i]), float(offsets[j]), float(sds[k]))
        if spans is None:
            spans = ((s_hi - s_lo) / 2, (o_hi - o_lo) / 2, (d_hi - d_lo) / 2)
        else:
            spans = tuple(s / 2 for s in spans)  # type: ignore[assignment]
    return best


def _regress(fixations: Sequence[Fixation], lines: LineSet, params: AlgoParams) -> list[int]:
    slope, offset, _sd = regress_fit(fixations, lines, params)
    xs = np.array([f.x for f in fixations])
    ys = np.array([f.y for f in fixations])
    centers = np.array(lines.line_ys)
    resid = np.abs((ys - slope * xs - offset)[None, :] - centers[:, None])
    return [int(i) + 1 for i in np.argmin(resid, axis=0)]


# --- stretch ----------------------------------------------------------------


def stretch_fit(
    fixations: Sequence[Fixation], lines: LineSet, params: Optional[AlgoParams] = None
) -> tuple[float, float]:
    """Best (scale, y offset) minimizing summed distance from the transformed
    fixations to their nearest line centers.

    The alignment error to horizontal lines is independent of any x offset,
    so that part of the transform is identically zero and not searched.
    """
    params = params or AlgoParams()
    ys = np.array([f.y for f in fixations])
    centers = np.array(lines.line_ys)

    def objective(scales: np.ndarray, offsets: np.ndarray) -> np.ndarray:
        out = np.empty((len(scales), len(offsets)))
        for i, s in enumerate(scales):
            t = s * ys
            r = np.abs(t[None, :, None] + offsets[None, None, :] - centers[:, None, None])
            out[i] = r.min(axis=0).sum(axis=0)
        return out

    k_lo, k_hi = params.stretch_scale
    o_lo, o_hi = params.stretch_offset
    best = (1.0, 0.0)
    spans = None
    for _ in range(REFINE_PASSES + 1):
        if spans is None:
            scales = _axis_grid(k_lo, k_hi)
            offsets = _axis_grid(o_lo, o_hi)
        else:
            scales = _axis_grid(k_lo, k_hi, best[0], spans[0])
            offsets = _axis_grid(o_lo, o_hi, best[1], spans[1])
        obj = objective(scales, offsets)
        min_val = obj.min()
        ties = np.argwhere(obj <= min_val + 1e-12)
        # Prefer the candidate closest to the identity transform.
        i, j = min(ties, key=lambda ij: (abs(scales[ij[0]] - 1.0) + abs(offsets[ij[1]]), ij[0], ij[1]))
        best = (float(scales[i]), float(offsets[j]))
        if spans is None:
            spans = ((k_hi - k_lo) / 2, (o_hi - o_lo) / 2)
        else:
            spans = (spans[0] / 2, spans[1] / 2)
    return best


def _stretch(fixations: Sequence[Fixation], lines: LineSet, params: AlgoParams) -> list[int]:
    scale, offset = stretch_fit(fixations, lines, params)
    ys = np.array([f.y for f in fixations])
    transformed = scale * ys + offset
    return [nearest_line(float(t), lines) for t in transformed]


# --- segment ----------------------------------------------------------------


def _segment(fixations: Sequence[Fixation], lines: LineSet) -> tuple[list[int], list[str]]:
    m = len(lines)
    n = len(fixations)
    flags: list[str] = []
    need = min(m - 1, n - 1)
    if need <= 0:
        return [1] * n, flags

    dxs = [(fixations[i + 1].x - fixations[i].x, i) for i in range(n - 1)]
    negative = sorted((d for d in dxs if d[0] < 0))
    if len(negative) >= m - 1:
        cuts = sorted(i for _, i in negative[: m - 1])
    else:
        # Not enough return sweeps: fall back to the overall smallest gaps.
        cuts = sorted(i for _, i in sorted(dxs)[:need])
        flags.append("segment_forced_splits")

    assigned = []
    line = 1
    cut_set = set(cuts)
    for i in range(n):
        assigned.append(line)
        if i in cut_set:
            line += 1
    return assigned, flags


# --- slice ------------------------------------------------------------------


def _slice(fixations: Sequence[Fixation], lines: LineSet, y_dist: float, min_run: int) -> list[int]:
    m = len(lines)
    n = len(fixations)
    if m == 1:
        return [1] * n

    runs: list[list[int]] = [[0]]
    for i in range(1, n):
        if abs(fixations[i].y - fixations[i - 1].y) <= y_dist:
            runs[-1].append(i)
        else:
            runs.append([i])

    def mean_y(run: list[int]) -> float:
        return sum(fixations[i].y for i in run) / len(run)

    major = [r for r in runs if len(r) >= min_run]
    if not major:
        major = runs
    minor = [r for r in runs if r not in major]

    run_line: dict[int, int] = {}
    # Largest run first, then by size; ties resolve to the earlier run.
    for run in sorted(major, key=lambda r: (-len(r), r[0])):
        my = mean_y(run)
        candidate = nearest_line(my, lines)
        lo, hi = 1, m
        for other in major:
            if id(other) == id(run) or other[0] not in run_line:
                continue
            oline = run_line[other[0]]
            if mean_y(other) < my:
                lo = max(lo, oline)
            elif mean_y(other) > my:
                hi = min(hi, oline)
        hi = max(hi, lo)
        run_line[run[0]] = min(max(candidate, lo), hi)

    spacing = lines.spacing()
    for run in minor:
        # Snap relative to the temporally nearest assigned run.
        neighbors = [r for r in major if r[0] in run_line]
        prev = [r for r in neighbors if r[0] < run[0]]
        nxt = [r for r in neighbors if r[0] > run[0]]
        anchor = prev[-1] if prev else nxt[0]
        delta = round((mean_y(run) - mean_y(anchor)) / spacing) if math.isfinite(spacing) else 0
        run_line[run[0]] = min(max(run_line[anchor[0]] + delta, 1), m)

    assigned = [0] * n
    for run in runs:
        for i in run:
            assigned[i] = run_line[run[0]]
    return assigned


# --- warp -------------------------------------------------------------------


def _dtw_path(points_a: list[Point], points_b: list[Point]) -> list[tuple[int, int]]:
    """Min-cost monotone alignment between two point sequences.

    Unit step moves (match/insert/delete), Euclidean point distance, no
    window. Traceback prefers diagonal, then the fixation axis, then the
    word axis on exact ties.
    """
    n, k = len(points_a), len(points_b)
    dist = [[math.hypot(points_a[i][0] - points_b[j][0], points_a[i][1] - points_b[j][1]) for j in range(k)] for i in range(n)]
    acc = [[0.0] * k for _ in range(n)]
    acc[0][0] = dist[0][0]
    for j in range(1, k):
        acc[0][j] = acc[0][j - 1] + dist[0][j]
    for i in range(1, n):
        acc[i][0] = acc[i - 1][0] + dist[i][0]
        for j in range(1, k):
            acc[i][j] = dist[i][j] + min(acc[i - 1][j - 1], acc[i - 1][j], acc[i][j - 1])
    path = [(n - 1, k - 1)]
    i, j = n - 1, k - 1
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diag, up, left = acc[i - 1][j - 1], acc[i - 1][j], acc[i][j - 1]
            if diag <= up and diag <= left:
                i, j = i - 1, j - 1
            elif up <= left:
                i -= 1
            else:
                j -= 1
        path.append((i, j))
    path.reverse()
    return path


def _warp(fixations: Sequence[Fixation], lines: LineSet, words: Sequence[Point]) -> list[int]:
    if not words:
        raise ValueError("warp requires word centers")
    word_lines = [nearest_line(wy, lines) for _, wy in words]
    pts = [(f.x, f.y) for f in fixations]
    path = _dtw_path(pts, list(words))
    matched: dict[int, list[int]] = {}
    for i, j in path:
        matched.setdefault(i, []).append(j)
    assigned = []
    for i, fix in enumerate(fixations):
        best_j = min(matched[i], key=lambda j: (math.hypot(fix.x - words[j][0], fix.y - words[j][1]), j))
        assigned.append(word_lines[best_j])
    return assigned


# --- hybrids ----------------------------------------------------------------


def split_regressions(
    fixations: Sequence[Fixation], x_dist: float, y_dist: float
) -> tuple[list[int], set[int]]:
    """Partition indices into progressive reading and regressions.

    A fixation is regressive when it jumps up more than y_dist from its
    predecessor, or falls more than x_dist behind the rightmost progressive
    x reached since the last line advance.
    """
    progressive: list[int] = []
    regressions: set[int] = set()
    run_max = -math.inf
    for i, fix in enumerate(fixations):
        if i == 0:
            progressive.append(i)
            run_max = fix.x
            continue
        prev = fixations[i - 1]
        if fix.y > prev.y + y_dist:
            progressive.append(i)
            run_max = fix.x
        elif fix.y < prev.y - y_dist:
            regressions.add(i)
        elif fix.x < run_max - x_dist:
            regressions.add(i)
        else:
            progressive.append(i)
            run_max = max(run_max, fix.x)
    return progressive, regressions


def _median(values: list[float]) -> float:
    if not values:
        return math.inf
    s = sorted(values)
    mid = len(s) // 2
    if len(s) % 2:
        return s[mid]
    return (s[mid - 1] + s[mid]) / 2.0


def _split_defaults(lines: LineSet, words: Sequence[Point], params: AlgoParams) -> tuple[float, float]:
    x_dist = params.split_x_dist
    y_dist = params.split_y_dist
    if x_dist is None:
        word_lines = [nearest_line(wy, lines) for _, wy in words]
        gaps = [
            words[j + 1][0] - words[j][0]
            for j in range(len(words) - 1)
            if word_lines[j + 1] == word_lines[j] and words[j + 1][0] > words[j][0]
        ]
        x_dist = 1.5 * _median(gaps)
    if y_dist is None:
        y_dist = lines.spacing() / 2.0
    return x_dist, y_dist


def _hybrid(
    secondary: str, fixations: list[Fixation], lines: LineSet, words: Sequence[Point], params: AlgoParams
) -> tuple[list[int], list[str]]:
    x_dist, y_dist = _split_defaults(lines, words, params)
    progressive, _regs = split_regressions(fixations, x_dist, y_dist)

    work = list(fixations)
    if progressive:
        warped = _warp([fixations[i] for i in progressive], lines, words)
        for pos, i in enumerate(progressive):
            work[i] = replace(fixations[i], y=lines.line_ys[warped[pos] - 1])

    if secondary == "attach":
        return _attach(work, lines), []
    if secondary == "chain":
        return _chain(work, lines, params.chain_x_dist, params.chain_y_dist), []
    if secondary == "regress":
        return _regress(work, lines, params), []
    if secondary == "stretch":
        return _stretch(work, lines, params), []
    raise ValueError(f"unknown hybrid secondary {secondary!r}")
