"""Hit-testing, AOI duration metrics (FFD/GD/TT), fixation/saccade reports,
and line-assignment accuracy scoring."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import AOI, Trial

HIT_CSV_COLUMNS = ("fix_x", "fix_y", "duration", "aoi_x", "aoi_y", "aoi_width", "aoi_height", "line", "part", "image")
METRICS_CSV_COLUMNS = ("image", "line", "part", "x", "y", "width", "height", "fixation_count", "FFD", "GD", "TT")
FIXATION_CSV_COLUMNS = ("index", "x", "y", "duration", "timestamp", "pupil")
SACCADE_CSV_COLUMNS = ("from_index", "dx", "dy", "amplitude", "direction")


@dataclass(frozen=True)
class HitRow:
    fix_x: float
    fix_y: float
    duration: float
    aoi_x: Optional[float] = None
    aoi_y: Optional[float] = None
    aoi_width: Optional[float] = None
    aoi_height: Optional[float] = None
    line: Optional[int] = None
    part: Optional[int] = None
    image: Optional[str] = None

    @property
    def hit(self) -> bool:
        return self.line is not None


@dataclass(frozen=True)
class AoiMetricsRow:
    aoi: AOI
    fixation_count: int
    ffd: float
    gd: float
    tt: float


@dataclass(frozen=True)
class AccuracyResult:
    total: int
    matching: int

    @property
    def accuracy(self) -> float:
        return self.matching / self.total if self.total else 1.0


def hit_test(trial: Trial, aois: Sequence[AOI]) -> list[HitRow]:
    """One row per fixation; overlapping AOIs resolve to the smallest area."""
    ordered = sorted(aois, key=lambda a: (a.line, a.part))
    rows: list[HitRow] = []
    for fix in trial.fixations:
        hits = [a for a in ordered if a.contains(fix.x, fix.y)]
        if not hits:
            rows.append(HitRow(fix.x, fix.y, fix.duration))
            continue
        a = min(hits, key=lambda a: (a.area, a.line, a.part))
        rows.append(
            HitRow(fix.x, fix.y, fix.duration, a.x, a.y, a.width, a.height, a.line, a.part, a.image)
        )
    return rows


def aoi_metrics(trial: Trial, aois: Sequence[AOI]) -> list[AoiMetricsRow]:
    """Fixation count, first-fixation duration, first-pass gaze duration, and
    total time per AOI. GD covers the unbroken run of hits containing the
    first hit."""
    rows = hit_test(trial, aois)
    out: list[AoiMetricsRow] = []
    for a in sorted(aois, key=lambda x: (x.line, x.part)):
        hit_idx = [i for i, r in enumerate(rows) if r.line == a.line and r.part == a.part and r.image == a.image]
        if not hit_idx:
            out.append(AoiMetricsRow(a, 0, 0.0, 0.0, 0.0))
            continue
        first = hit_idx[0]
        end = first
        while end + 1 in hit_idx:
            end += 1
        durations = [trial.fixations[i].duration for i in hit_idx]
        ffd = trial.fixations[first].duration
        gd = sum(trial.fixations[i].duration for i in range(first, end + 1))
        out.append(AoiMetricsRow(a, len(hit_idx), ffd, gd, sum(durations)))
    return out


def saccade_rows(trial: Trial) -> list[tuple[int, float, float, float, float]]:
    """(from_index, dx, dy, amplitude, direction in degrees) per fixation pair.

    Direction uses screen coordinates (y grows downward), so 0 degrees is
    rightward and positive angles turn downward.
    """
    rows = []
    fixs = trial.fixations
    for i in range(len(fixs) - 1):
        dx = fixs[i + 1].x - fixs[i].x
        dy = fixs[i + 1].y - fixs[i].y
        rows.append((i, dx, dy, math.hypot(dx, dy), math.degrees(math.atan2(dy, dx))))
    return rows


def fixation_rows(trial: Trial) -> list[tuple]:
    return [(i, f.x, f.y, f.duration, f.timestamp, f.pupil) for i, f in enumerate(trial.fixations)]


def accuracy(corrected_lines: Sequence[int], truth_lines: Sequence[int]) -> AccuracyResult:
    """Fraction of fixations whose assigned line matches the ground truth."""
    if len(corrected_lines) != len(truth_lines):
        raise ValueError(f"length mismatch: {len(corrected_lines)} vs {len(truth_lines)}")
    matching = sum(1 for a, b in zip(corrected_lines, truth_lines) if a == b)
    return AccuracyResult(total=len(corrected_lines), matching=matching)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if v.is_integer():
            return str(int(v))
        return repr(v)
    return str(v)


def _write_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def hit_rows_to_csv(rows: Sequence[HitRow]) -> str:
    return _write_csv(
        HIT_CSV_COLUMNS,
        [
            (r.fix_x, r.fix_y, r.duration, r.aoi_x, r.aoi_y, r.aoi_width, r.aoi_height, r.line, r.part, r.image)
            for r in rows
        ],
    )


def metrics_rows_to_csv(rows: Sequence[AoiMetricsRow]) -> str:
    return _write_csv(
        METRICS_CSV_COLUMNS,
        [
            (r.aoi.image, r.aoi.line, r.aoi.part, r.aoi.x, r.aoi.y, r.aoi.width, r.aoi.height, r.fixation_count, r.ffd, r.gd, r.tt)
            for r in rows
        ],
    )


def fixation_rows_to_csv(rows: Sequence[Sequence]) -> str:
    return _write_csv(FIXATION_CSV_COLUMNS, rows)


def saccade_rows_to_csv(rows: Sequence[Sequence]) -> str:
    return _write_csv(SACCADE_CSV_COLUMNS, rows)
