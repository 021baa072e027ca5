"""Data-cleaning filters: temporal cutoffs, duration outliers, short-fixation
merging, and outside-screen removal. Filters never reorder fixations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import Fixation, Trial

FILTER_KINDS = ("duration_above", "duration_below", "outlier_sd", "merge_short", "outside_screen")

DEFAULT_HIGH_MS = 800.0
DEFAULT_LOW_MS = 80.0


@dataclass(frozen=True)
class FilterSpec:
    kind: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in FILTER_KINDS:
            raise ValueError(f"unknown filter kind {self.kind!r}; valid: {', '.join(FILTER_KINDS)}")
        expected = 2 if self.kind in ("merge_short", "outside_screen") else 1
        if len(self.values) != expected:
            raise ValueError(f"filter {self.kind} takes {expected} value(s), got {len(self.values)}")
        if any(v <= 0 for v in self.values):
            raise ValueError(f"filter {self.kind} thresholds must be > 0")


def filter_duration(trial: Trial, low_ms: Optional[float] = None, high_ms: Optional[float] = None) -> Trial:
    """Drop fixations with duration below low_ms or above high_ms."""
    if low_ms is not None and high_ms is not None and low_ms >= high_ms:
        raise ValueError(f"low threshold must be below high threshold, got {low_ms} >= {high_ms}")
    kept = [
        f
        for f in trial.fixations
        if (low_ms is None or f.duration >= low_ms) and (high_ms is None or f.duration <= high_ms)
    ]
    return trial.with_fixations(kept)


def filter_outliers(trial: Trial, n_sd: float) -> Trial:
    """Drop fixations more than n_sd population standard deviations from the
    mean duration. Mean and std come from the input, not recomputed."""
    if n_sd <= 0:
        raise ValueError("n_sd must be > 0")
    if len(trial) < 2:
        return trial
    durations = [f.duration for f in trial.fixations]
    mean = sum(durations) / len(durations)
    std = math.sqrt(sum((d - mean) ** 2 for d in durations) / len(durations))
    kept = [f for f in trial.fixations if abs(f.duration - mean) <= n_sd * std]
    return trial.with_fixations(kept)


def merge_short_fixations(trial: Trial, max_duration_ms: float, max_distance_px: float) -> Trial:
    """Merge short fixations into a close temporal neighbor.

    The neighbor keeps its position and gains the short fixation's duration;
    ties between the two neighbors go to the previous one. Runs to a fixed
    point, so total duration is conserved.
    """
    if max_duration_ms <= 0 or max_distance_px <= 0:
        raise ValueError("merge thresholds must be > 0")
    fixs = list(trial.fixations)
    changed = True
    while changed:
        changed = False
        for i, fix in enumerate(fixs):
            if fix.duration > max_duration_ms:
                continue
            candidates = []
            if i > 0:
                candidates.append((math.hypot(fix.x - fixs[i - 1].x, fix.y - fixs[i - 1].y), 0, i - 1))
            if i + 1 < len(fixs):
                candidates.append((math.hypot(fix.x - fixs[i + 1].x, fix.y - fixs[i + 1].y), 1, i + 1))
            candidates = [c for c in candidates if c[0] <= max_distance_px]
            if not candidates:
                continue
            _, _, j = min(candidates)
            target = fixs[j]
            fixs[j] = Fixation(
                x=target.x,
                y=target.y,
                duration=target.duration + fix.duration,
                timestamp=target.timestamp,
                pupil=target.pupil,
            )
            del fixs[i]
            changed = True
            break
    return trial.with_fixations(fixs)


def filter_outside_screen(trial: Trial, width: float, height: float) -> Trial:
    """Drop fixations outside the stimulus; the boundary itself is inside."""
    if width <= 0 or height <= 0:
        raise ValueError("screen dimensions must be > 0")
    kept = [f for f in trial.fixations if 0 <= f.x <= width and 0 <= f.y <= height]
    return trial.with_fixations(kept)


def parse_chain(spec: str) -> list[FilterSpec]:
    """Parse "duration_below=80,duration_above=800,merge_short=80:10" into specs."""
    out: list[FilterSpec] = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"filter spec {item!r} must be kind=value")
        kind, _, raw = item.partition("=")
        try:
            values = tuple(float(v) for v in raw.split(":"))
        except ValueError:
            raise ValueError(f"filter spec {item!r} has non-numeric value") from None
        out.append(FilterSpec(kind=kind.strip(), values=values))
    return out


def apply_chain(trial: Trial, specs: Sequence[FilterSpec]) -> Trial:
    """Apply filters left to right."""
    for spec in specs:
        if spec.kind == "duration_above":
            trial = filter_duration(trial, high_ms=spec.values[0])
        elif spec.kind == "duration_below":
            trial = filter_duration(trial, low_ms=spec.values[0])
        elif spec.kind == "outlier_sd":
            trial = filter_outliers(trial, spec.values[0])
        elif spec.kind == "merge_short":
            trial = merge_short_fixations(trial, spec.values[0], spec.values[1])
        else:
            trial = filter_outside_screen(trial, spec.values[0], spec.values[1])
    return trial
