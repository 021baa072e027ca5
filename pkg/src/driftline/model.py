"""Shared domain types: fixations, trials, AOIs, and text-line geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class Fixation:
    """One fixation: stimulus-pixel position plus duration in milliseconds."""

    x: float
    y: float
    duration: float
    timestamp: Optional[float] = None
    pupil: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "duration", float(self.duration))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"fixation coordinates must be finite, got ({self.x}, {self.y})")
        if not math.isfinite(self.duration) or self.duration <= 0:
            raise ValueError(f"fixation duration must be > 0, got {self.duration}")

    def moved_to(self, x: float, y: float) -> "Fixation":
        return replace(self, x=float(x), y=float(y))


@dataclass(frozen=True)
class Trial:
    """An ordered (chronological) fixation sequence over one stimulus."""

    fixations: tuple[Fixation, ...]
    stimulus_ref: Optional[str] = None
    screen_width: Optional[float] = None
    screen_height: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "fixations", tuple(self.fixations))
        stamps = [f.timestamp for f in self.fixations if f.timestamp is not None]
        if len(stamps) > 1 and any(b < a for a, b in zip(stamps, stamps[1:])):
            raise ValueError("fixation timestamps must be non-decreasing")

    def __len__(self) -> int:
        return len(self.fixations)

    def __iter__(self):
        return iter(self.fixations)

    def __getitem__(self, i: int) -> Fixation:
        return self.fixations[i]

    def with_fixations(self, fixations: Iterable[Fixation]) -> "Trial":
        return replace(self, fixations=tuple(fixations))


@dataclass(frozen=True)
class AOI:
    """A rectangle over the stimulus text, indexed by (line, part) in reading order."""

    x: float
    y: float
    width: float
    height: float
    line: int
    part: int
    image: str = ""
    token: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "height", float(self.height))
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"AOI dimensions must be positive, got {self.width}x{self.height}")
        if self.line < 1 or self.part < 1:
            raise ValueError(f"AOI line/part indices are 1-based, got ({self.line}, {self.part})")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)

    def contains(self, x: float, y: float) -> bool:
        """Closed-rectangle hit test (edges count as inside)."""
        return self.x <= x <= self.x + self.width and self.y <= y <= self.y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class LineSet:
    """Vertical centers of the text lines, ascending (y grows downward)."""

    line_ys: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "line_ys", tuple(float(y) for y in self.line_ys))
        if any(b <= a for a, b in zip(self.line_ys, self.line_ys[1:])):
            raise ValueError("line centers must be strictly ascending")

    def __len__(self) -> int:
        return len(self.line_ys)

    @classmethod
    def from_aois(cls, aois: Sequence[AOI]) -> "LineSet":
        """Per-line mean of the AOI vertical centers, ordered by line index."""
        by_line: dict[int, list[float]] = {}
        for a in aois:
            by_line.setdefault(a.line, []).append(a.y + a.height / 2.0)
        ys = [sum(v) / len(v) for _, v in sorted(by_line.items())]
        return cls(tuple(ys))

    def spacing(self) -> float:
        """Median gap between adjacent line centers; inf for a single line."""
        if len(self.line_ys) < 2:
            return math.inf
        gaps = sorted(b - a for a, b in zip(self.line_ys, self.line_ys[1:]))
        mid = len(gaps) // 2
        if len(gaps) % 2:
            return gaps[mid]
        return (gaps[mid - 1] + gaps[mid]) / 2.0


def nearest_line(y: float, lines: LineSet) -> int:
    """1-based index of the line center closest to y; ties go to the upper line."""
    if len(lines) == 0:
        raise ValueError("no lines")
    best = 0
    best_d = abs(y - lines.line_ys[0])
    for i, cy in enumerate(lines.line_ys[1:], start=1):
        d = abs(y - cy)
        if d < best_d:
            best, best_d = i, d
    return best + 1


def word_centers(aois: Sequence[AOI]) -> list[tuple[float, float]]:
    """Center points of the AOIs in reading order, i.e. sorted by (line, part)."""
    return [a.center for a in sorted(aois, key=lambda a: (a.line, a.part))]
