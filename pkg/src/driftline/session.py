"""Assisted-correction sessions.

A session walks the fixation sequence one suggestion at a time. Accepting
or manually placing a fixation anchors it; manual interventions re-run the
algorithm with anchors pinned so the remaining suggestions improve. Every
interaction is timestamped into the event log, and every state change can
be undone.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .algorithms import AlgoParams, Correction, correct
from .model import Fixation, LineSet, Trial, nearest_line

EVENT_KINDS = (
    "session_start",
    "accept",
    "manual_move",
    "line_above",
    "line_below",
    "line_n",
    "back",
    "next",
    "undo",
    "finish",
)


@dataclass(frozen=True)
class Anchor:
    """A vetted fixation position; immutable to recomputes."""

    x: float
    y: float
    line: int


@dataclass(frozen=True)
class Suggestion:
    index: int
    line: int
    y: float
    source: str


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    index: Optional[int] = None
    x: Optional[float] = None
    y: Optional[float] = None
    n: Optional[int] = None
    warning: bool = False

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"t": self.t, "kind": self.kind, "index": self.index}
        if self.x is not None:
            out["x"] = self.x
        if self.y is not None:
            out["y"] = self.y
        if self.n is not None:
            out["n"] = self.n
        if self.warning:
            out["warning"] = True
        return out


@dataclass
class _Snapshot:
    current: int
    anchors: dict[int, Anchor]
    suggestions: dict[int, Suggestion]
    finished: bool


def _default_clock() -> float:
    return time.time() * 1000.0


class Session:
    """Single-writer assisted correction over one trial.

    Mutating methods return the session itself; callers must serialize
    mutations (the HTTP service enforces this with a per-session lock).
    """

    def __init__(
        self,
        trial: Trial,
        lines: LineSet,
        word_centers: Sequence[tuple[float, float]],
        algorithm: str,
        params: Optional[AlgoParams] = None,
        clock: Optional[Callable[[], float]] = None,
    ):
        if len(trial) == 0:
            raise ValueError("empty trial")
        self.trial = trial
        self.lines = lines
        self.word_centers = list(word_centers)
        self.algorithm = algorithm
        self.params = params or AlgoParams()
        self._clock = clock or _default_clock
        self.current = 0
        self.anchors: dict[int, Anchor] = {}
        self.suggestions: dict[int, Suggestion] = {}
        self.history: list[_Snapshot] = []
        self.log: list[Event] = []
        self.finished = False
        self._recompute()
        self._log("session_start", index=0)

    # -- internals ---------------------------------------------------------

    def _log(self, kind: str, index: Optional[int] = None, x: Optional[float] = None,
             y: Optional[float] = None, n: Optional[int] = None, warning: bool = False) -> None:
        self.log.append(Event(t=self._clock(), kind=kind, index=index, x=x, y=y, n=n, warning=warning))

    def _push(self) -> None:
        self.history.append(
            _Snapshot(self.current, dict(self.anchors), dict(self.suggestions), self.finished)
        )

    def _recompute(self) -> None:
        """Re-run the algorithm with anchors pinned; only unanchored
        suggestions may change."""
        anchor_map = {i: (a.x, a.y, a.line) for i, a in self.anchors.items()}
        corr: Correction = correct(
            self.algorithm, self.trial.fixations, self.lines, self.word_centers, self.params, anchor_map
        )
        self.suggestions = {
            i: Suggestion(i, corr.assigned_line[i], corr.corrected[i].y, self.algorithm)
            for i in range(len(self.trial))
            if i not in self.anchors
        }

    def _advance(self) -> None:
        i = self.current + 1
        n = len(self.trial)
        while i < n and i in self.anchors:
            i += 1
        self.current = min(i, n)

    def _anchor_current(self, anchor: Anchor, recompute: bool) -> None:
        was_anchored = self.current in self.anchors
        self.anchors[self.current] = anchor
        self.suggestions.pop(self.current, None)
        if recompute or was_anchored:
            self._recompute()
        self._advance()

    # -- operations ----------------------------------------------------------

    def accept(self) -> "Session":
        """Anchor the current fixation at its suggested position."""
        if self.current >= len(self.trial):
            self._log("accept", index=self.current, warning=True)
            return self
        self._push()
        idx = self.current
        if idx in self.anchors:
            # Revisited anchor: re-decide against a fresh suggestion.
            del self.anchors[idx]
            self._recompute()
        sug = self.suggestions[idx]
        self._anchor_current(Anchor(self.trial[idx].x, sug.y, sug.line), recompute=False)
        self._log("accept", index=idx)
        return self

    def manual_move(self, new_x: float, new_y: float) -> "Session":
        """Anchor the current fixation at a user-chosen position and
        recondition the remaining suggestions."""
        if not (math.isfinite(new_x) and math.isfinite(new_y)):
            raise ValueError(f"coordinates must be finite, got ({new_x}, {new_y})")
        if self.current >= len(self.trial):
            self._log("manual_move", index=self.current, warning=True)
            return self
        self._push()
        idx = self.current
        self.anchors.pop(idx, None)
        line = nearest_line(new_y, self.lines)
        self._anchor_current(Anchor(float(new_x), float(new_y), line), recompute=True)
        self._log("manual_move", index=idx, x=float(new_x), y=float(new_y))
        return self

    def _to_line(self, target: int, kind: str, n: Optional[int] = None) -> "Session":
        idx = self.current
        if idx >= len(self.trial):
            self._log(kind, index=idx, n=n, warning=True)
            return self
        if target < 1 or target > len(self.lines):
            self._log(kind, index=idx, n=n, warning=True)
            return self
        self._push()
        anchored = self.anchors.pop(idx, None)
        x = anchored.x if anchored is not None else self.trial[idx].x
        y = self.lines.line_ys[target - 1]
        self._anchor_current(Anchor(x, y, target), recompute=True)
        self._log(kind, index=idx, n=n)
        return self

    def _base_line(self) -> Optional[int]:
        idx = self.current
        if idx in self.anchors:
            return self.anchors[idx].line
        if idx in self.suggestions:
            return self.suggestions[idx].line
        return None

    def line_above(self) -> "Session":
        base = self._base_line()
        if base is None:
            self._log("line_above", index=self.current, warning=True)
            return self
        return self._to_line(base - 1, "line_above")

    def line_below(self) -> "Session":
        base = self._base_line()
        if base is None:
            self._log("line_below", index=self.current, warning=True)
            return self
        return self._to_line(base + 1, "line_below")

    def line_n(self, n: int) -> "Session":
        return self._to_line(n, "line_n", n=n)

    def back(self) -> "Session":
        if self.current <= 0:
            self._log("back", index=self.current, warning=True)
            return self
        self._push()
        self.current -= 1
        self._log("back", index=self.current)
        return self

    def next(self) -> "Session":
        if self.current >= len(self.trial):
            self._log("next", index=self.current, warning=True)
            return self
        self._push()
        self.current += 1
        self._log("next", index=self.current)
        return self

    def undo(self) -> "Session":
        if not self.history:
            self._log("undo", index=self.current, warning=True)
            return self
        snap = self.history.pop()
        self.current = snap.current
        self.anchors = snap.anchors
        self.suggestions = snap.suggestions
        self.finished = snap.finished
        self._log("undo", index=self.current)
        return self

    def finish(self) -> "Session":
        self._push()
        self.finished = True
        self._log("finish", index=self.current)
        return self

    # -- outputs ---------------------------------------------------------------

    def export(self) -> tuple[Trial, list[Event]]:
        """Corrected trial (anchors win, everything else untouched) + log."""
        fixs: list[Fixation] = []
        for i, fix in enumerate(self.trial.fixations):
            a = self.anchors.get(i)
            fixs.append(fix.moved_to(a.x, a.y) if a is not None else fix)
        return self.trial.with_fixations(fixs), list(self.log)

    def state(self) -> dict[str, Any]:
        """JSON-friendly snapshot of everything a UI needs to render."""
        cur = self.suggestions.get(self.current)
        return {
            "algorithm": self.algorithm,
            "current": self.current,
            "finished": self.finished,
            "n_fixations": len(self.trial),
            "fixations": [[f.x, f.y, f.duration] for f in self.trial.fixations],
            "anchors": {str(i): {"x": a.x, "y": a.y, "line": a.line} for i, a in sorted(self.anchors.items())},
            "suggestions": {str(i): {"line": s.line, "y": s.y} for i, s in sorted(self.suggestions.items())},
            "current_suggestion": ({"line": cur.line, "y": cur.y} if cur else None),
            "line_ys": list(self.lines.line_ys),
            "word_centers": [list(w) for w in self.word_centers],
        }

    def validate(self) -> list[str]:
        """Invariant check; returns a list of violations (empty when healthy)."""
        problems = []
        n = len(self.trial)
        if not 0 <= self.current <= n:
            problems.append(f"current {self.current} outside [0, {n}]")
        overlap = set(self.anchors) & set(self.suggestions)
        if overlap:
            problems.append(f"anchors and suggestions overlap at {sorted(overlap)}")
        for i, a in self.anchors.items():
            if not 1 <= a.line <= len(self.lines):
                problems.append(f"anchor {i} has invalid line {a.line}")
        for i, s in self.suggestions.items():
            if s.y != self.lines.line_ys[s.line - 1]:
                problems.append(f"suggestion {i} y does not match its line center")
        ts = [e.t for e in self.log]
        if any(b < a for a, b in zip(ts, ts[1:])):
            problems.append("log timestamps decrease")
        return problems


def start(
    trial: Trial,
    lines: LineSet,
    word_centers: Sequence[tuple[float, float]],
    algorithm: str,
    params: Optional[AlgoParams] = None,
    clock: Optional[Callable[[], float]] = None,
) -> Session:
    """Open an assisted session with suggestions from the given algorithm."""
    return Session(trial, lines, word_centers, algorithm, params, clock)


def events_to_json(events: Sequence[Event]) -> list[dict[str, Any]]:
    return [e.to_json() for e in events]
